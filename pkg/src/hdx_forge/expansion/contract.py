"""Trivialise a cocycle with a 1-cone: psi(u) is the holonomy along P_u."""
from __future__ import annotations

import numpy as np

from ..complexes.core import PartiteComplex
from ..cones.certificate import ConeCertificate, ConeError, validate_cone
from .cochains import Cochain0, Cochain1, NotACocycle, action, d1


class InvalidCone(ValueError):
    pass


def holonomy(phi: Cochain1, path) -> int:
    G = phi.space.G
    out = G.identity
    for a, b in zip(path, path[1:]):
        out = int(G.mul[out, phi(a, b)])
    return out


def _replay(C: ConeCertificate, phi: Cochain1, key, memo: dict) -> None:
    """Run script `key`, asserting the loop holonomy is e after every step."""
    if key in memo:
        return
    e = phi.space.G.identity
    loop = list(C.start_of(key))
    assert holonomy(phi, loop) == e, f"start loop of {key} has nontrivial holonomy"
    for st in C.scripts[key].steps:
        op, p = st[0], st[1]
        if op == "BT":
            del loop[p + 1:p + 3]
        elif op == "BT+":
            loop[p + 1:p + 1] = [st[2], loop[p]]
        elif op == "TR":
            del loop[p + 1]
        elif op == "TR+":
            loop.insert(p + 1, st[3])
        elif op == "REF":
            s0 = C.start_of(st[2], st[3])
            _replay(C, phi, st[2], memo)
            loop[p:p + len(s0)] = [C.apex]
        assert holonomy(phi, loop) == e, f"step {st} of {key} changes the holonomy"
    memo[key] = True


def contract_cocycle(X: PartiteComplex, C: ConeCertificate, phi: Cochain1,
                     validated: bool = False, replay: bool = False) -> Cochain0:
    """Return psi with psi . phi == e on every edge.

    The postcondition is always checked edge by edge.  With replay, every
    contraction script is also rerun tracking loop holonomy."""
    S = phi.space
    if X.dim >= 2 and not d1(phi).trivial():
        raise NotACocycle("phi has nontrivial d1 on some triangle")
    if C.kind != 1:
        raise InvalidCone("contraction needs a 1-cone")
    if not validated:
        try:
            validate_cone(X, C)
        except ConeError as exc:
            raise InvalidCone(str(exc)) from exc
    G = S.G
    psi = np.full(S.nv, -1, dtype=np.int64)
    psi[C.apex] = G.identity
    # paths share prefixes; fill shortest first so each value extends a known one
    for u in sorted(C.paths, key=lambda x: len(C.paths[x])):
        P = C.paths[u]
        if len(P) == 1:
            psi[u] = G.identity
            continue
        prev = P[-2]
        if psi[prev] >= 0 and C.paths.get(prev) == P[:-1]:
            psi[u] = G.mul[psi[prev], phi(prev, u)]
        else:
            psi[u] = holonomy(phi, P)
    out = Cochain0(S, psi)
    triv = action(out, phi, check=False)
    bad = np.nonzero(triv.values != G.identity)[0]
    assert bad.size == 0, f"psi . phi is nontrivial on edge {tuple(S.edges[bad[0]])}"
    if replay:
        memo: dict = {}
        for key in C.scripts:
            _replay(C, phi, key, memo)
    return out

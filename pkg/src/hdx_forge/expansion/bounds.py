"""Bound evaluators: cone radius to h^1_cb, and local to global cosystolic."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from ..complexes.core import PartiteComplex
from ..cones.certificate import ConeCertificate, ConeError, validate_cone


class NoSymmetryWitness(ValueError):
    pass


class InvalidWitness(ValueError):
    pass


@dataclass
class SymmetryWitness:
    """Evidence that Aut(X) is transitive on top faces.

    kind: 'automorphisms' (explicit vertex permutations, checked),
    'coset-translation' (left translation on a coset complex, transitive by
    construction) or 'assumed' (claimed, not checked; bound not certified)."""
    kind: str
    generators: tuple = ()
    note: str = ""

    def verify(self, X: PartiteComplex) -> bool:
        if self.kind == "assumed":
            return False
        if self.kind == "coset-translation":
            return True
        if self.kind != "automorphisms":
            raise InvalidWitness(f"unknown witness kind {self.kind!r}")
        top = {tuple(int(x) for x in r) for r in X.top_faces()}
        n = X.n_vertices
        for g in self.generators:
            if sorted(g) != list(range(n)):
                raise InvalidWitness("generator is not a permutation of the vertices")
            for f in top:
                if tuple(sorted(g[v] for v in f)) not in top:
                    raise InvalidWitness(f"generator does not map {f} to a face")
        start = min(top)
        seen = {start}
        stack = [start]
        while stack:
            f = stack.pop()
            for g in self.generators:
                h = tuple(sorted(g[v] for v in f))
                if h not in seen:
                    seen.add(h)
                    stack.append(h)
        if len(seen) != len(top):
            raise InvalidWitness(f"orbit of a top face has {len(seen)} of {len(top)} faces")
        return True


@dataclass
class ConeBound:
    value: Fraction
    n: int
    rad1: int
    witness_kind: str
    certified: bool

    def lines(self):
        yield f"h1_cb_lower_bound={self.value}"
        yield f"h1_cb_lower_bound_float={float(self.value):.6e}"
        yield f"dimension={self.n} rad1={self.rad1} witness={self.witness_kind} certified={self.certified}"


def h1_lower_bound_from_cone(X: PartiteComplex, C: ConeCertificate, witness: SymmetryWitness | None,
                             rad1: int | None = None) -> ConeBound:
    """1 / (C(n+1, 3) Rad_1) with n = dim X, for a strongly symmetric X.

    The cone is validated here unless its Rad_1 is passed in by a caller
    that already validated it."""
    if witness is None:
        raise NoSymmetryWitness("no transitive symmetry on top faces was supplied")
    certified = witness.verify(X)
    n = X.dim
    if n < 2:
        raise ConeError("the bound needs a complex of dimension at least 2")
    if rad1 is None:
        if C.kind != 1:
            raise ConeError("the bound needs a 1-cone")
        rad1 = validate_cone(X, C).rad1
    if rad1 <= 0:
        raise ConeError("Rad_1 must be positive")
    kind = witness.kind if certified else "assumed"
    return ConeBound(Fraction(1, comb(n + 1, 3) * rad1), n, rad1, kind, certified)


def radius_h1_bound(n: int, rad1: int) -> Fraction:
    return Fraction(1, comb(n + 1, 3) * rad1)


def cosystolic_bound(lam, beta):
    """(1 - lam) beta / 24 - e lam.  Exact when lam == 0 and beta is rational;
    nonpositive results are vacuous."""
    if not 0 <= lam < 1:
        raise ValueError("lambda must lie in [0, 1)")
    if beta <= 0:
        raise ValueError("beta must be positive")
    if lam == 0:
        return Fraction(beta) / 24
    return (1 - lam) * float(beta) / 24 - math.e * lam


def is_vacuous(value) -> bool:
    return value <= 0


def flag_unipotent_witness(S) -> SymmetryWitness:
    """Automorphisms of T_E(V) for the standard flag E: the elementary
    matrices I + a E_ji (j > i), acting on row spaces, fix every E_k.  The
    group they generate is transitive on chambers opposite E; verify()
    checks this on the complex rather than trusting it."""
    from ..complexes.buildings import standard_flag
    V = S.V
    if tuple(S.E) != standard_flag(V):
        raise NoSymmetryWitness("unipotent witness needs the standard flag")
    K = V.K
    basis = [K.from_coeffs([int(t == s) for t in range(K.m)]) for s in range(K.m)]
    gens = []
    for i in range(V.m):
        for j in range(i + 1, V.m):
            for a in basis:
                perm = []
                for U in S.subspaces:
                    rows = [list(r) for r in U]
                    for r in rows:
                        r[i] = K.add(r[i], K.mul(a, r[j]))
                    perm.append(S.index[V.rref(rows)])
                gens.append(tuple(perm))
    return SymmetryWitness("automorphisms", tuple(gens), "unipotent radical of the flag stabiliser")

"""Move a cone from the weak C_n model T to the oriflamme complex T~.

The vertex map psi sends an (n-1)-dimensional u to its chosen Lagrangian
extension W_u and fixes every other vertex; a path maps to the psi-image with
consecutive repeats collapsed (this is the edge map phi applied edge by
edge).  Scripts are replayed on T, and each step's effect on the phi-image is
realised in T~ by the cheapest sequence of local moves (fewest TR) between
the two images, found by a small exhaustive search on the changed window.
Edges of T~ joining two Lagrangians meeting in m get a script on T first,
P_u (u;m;v) P_v^-1 -> trivial, assembled from the scripts of (u,m) and (m,v).
"""
from __future__ import annotations

import heapq
from collections import Counter
from dataclasses import dataclass, field

from ..complexes.buildings import SubspaceComplex
from .certificate import ConeCertificate, ConeError, Script, validate_cone
from .constructors import ScriptBuilder


class NotWeakCnModel(ConeError):
    pass


class TransferFailed(ConeError):
    pass


def lagrangian_extensions(form, U) -> list:
    """All totally isotropic n-spaces containing U."""
    V = form.V
    return [W for W in form.ti_subspaces(form.n) if V.is_subspace(U, W)]


def edge_map_case(n, dim_u, dim_v, u_is_Wv=False, v_is_Wu=False) -> int:
    """Which branch of the edge map applies to (u, v): 1..5 in the order
    (W_u;v), (W_u), (u;W_v), (W_v), (u;v)."""
    if dim_u == n - 1:
        return 2 if v_is_Wu else 1
    if dim_v == n - 1:
        return 4 if u_is_Wv else 3
    return 5


@dataclass
class TransferReport:
    rad0_in: int
    rad1_in: int
    rad0: int
    rad1: int
    case_counts: dict
    move_counts: dict = field(default_factory=dict)

    @property
    def c(self) -> int:
        return max(self.rad0_in, self.rad1_in)

    @property
    def within_bounds(self) -> bool:
        return self.rad0 <= self.c and self.rad1 <= 2 * self.c


class _Local:
    """Cheapest BT/TR move sequence between two short paths with equal ends."""

    def __init__(self, adj, tris, cap=60000):
        self.adj = adj
        self.tris = tris
        self.cap = cap
        self.cache = {}

    def tri(self, a, b, c):
        return tuple(sorted((a, b, c))) in self.tris

    def solve(self, old, new):
        key = (old, new)
        if key in self.cache:
            return self.cache[key]
        alphabet = sorted(set(old) | set(new))
        maxlen = max(len(old), len(new)) + 2
        best = {old: (0, 0)}
        prev = {old: None}
        heap = [(0, 0, old)]
        seen = 0
        res = None
        while heap:
            c, k, s = heapq.heappop(heap)
            if best.get(s) != (c, k):
                continue
            if s == new:
                res = []
                while prev[s] is not None:
                    s, st = prev[s]
                    res.append(st)
                res.reverse()
                break
            seen += 1
            if seen > self.cap:
                break
            L = len(s)
            nxt = []
            for i in range(L - 2):
                if s[i] == s[i + 2]:
                    nxt.append((("BT", i), s[:i + 1] + s[i + 3:], 0))
                elif self.tri(s[i], s[i + 1], s[i + 2]):
                    nxt.append((("TR", i, s[i], s[i + 1], s[i + 2]), s[:i + 1] + s[i + 2:], 1))
            if L + 1 <= maxlen:
                for i in range(L - 1):
                    for b in alphabet:
                        if b != s[i] and b != s[i + 1] and self.tri(s[i], b, s[i + 1]):
                            nxt.append((("TR+", i, s[i], b, s[i + 1]), s[:i + 1] + (b,) + s[i + 1:], 1))
            if L + 2 <= maxlen:
                for i in range(L):
                    for y in alphabet:
                        if y in self.adj[s[i]]:
                            nxt.append((("BT+", i, y), s[:i + 1] + (y, s[i]) + s[i + 1:], 0))
            for st, t, dc in nxt:
                cand = (c + dc, k + 1)
                if t not in best or cand < best[t]:
                    best[t] = cand
                    prev[t] = (s, st)
                    heapq.heappush(heap, (cand[0], cand[1], t))
        self.cache[key] = res
        return res


def _phi(seq, psi):
    out = []
    pos = []
    for x in seq:
        y = psi[x]
        if not out or out[-1] != y:
            out.append(y)
        pos.append(len(out) - 1)
    return out, pos


def subdivision_transfer(ST: SubspaceComplex, C: ConeCertificate, SO: SubspaceComplex,
                         validate: bool = True):
    """ST: weak C_n model T_E(V); C: valid 1-cone on ST.X; SO: oriflamme
    complex T~_E(V) over the same form and E.  Returns (cone on SO.X, report)."""
    form = ST.form
    n = form.n
    V = ST.V
    T, Tt = ST.X, SO.X
    dims = [len(U) for U in ST.subspaces]
    # W_u for every (n-1)-dimensional u
    W = {}
    for i, U in enumerate(ST.subspaces):
        if dims[i] == n - 1:
            ext = lagrangian_extensions(form, U)
            if len(ext) != 2:
                raise NotWeakCnModel(f"{V.label(U)} has {len(ext)} maximal extensions, expected 2")
            inside = [E for E in ext if E in SO.index]
            if not inside:
                raise NotWeakCnModel(f"no extension of {V.label(U)} lies in the oriflamme complex")
            inside.sort(key=lambda E: (form.lagrangian_class(E), E))
            W[i] = SO.index[inside[0]]
    psi = {}
    for i, U in enumerate(ST.subspaces):
        psi[i] = W[i] if i in W else SO.index.get(U)
        if psi[i] is None:
            raise NotWeakCnModel(f"{V.label(U)} is missing from the oriflamme complex")
    back = {SO.index[U]: ST.index[U] for U in SO.subspaces if U in ST.index}

    # case sweep over ordered edges of T
    cases = Counter()
    for a, b in T.simplex_set(1):
        for u, v in ((a, b), (b, a)):
            cases[edge_map_case(n, dims[u], dims[v], psi[u] == psi[v] and dims[v] == n - 1,
                             psi[v] == psi[u] and dims[u] == n - 1)] += 1

    CT = C.copy()
    apex = psi[C.apex]
    out = ConeCertificate(apex, {}, 1, name=(C.name + "~") if C.name else "transfer")
    for j in range(Tt.n_vertices):
        out.paths[j] = tuple(_phi(C.paths[back[j]], psi)[0])

    adj_t = Tt.adjacency_sets()
    local = _Local(adj_t, Tt.simplex_set(2))
    moves = Counter()
    done = {}

    def tkey(key):
        """Key of the transferred script in the output certificate."""
        if isinstance(key, tuple) and len(key) == 2 and all(isinstance(x, int) for x in key):
            u, v = key
            if dims[u] != n - 1 and dims[v] != n - 1:
                return (psi[u], psi[v])
            return ("phi", u, v)
        return ("phi",) + tuple(key)

    def transfer(key):
        if key in done:
            return done[key]
        k2 = tkey(key)
        done[key] = k2
        loop = list(CT.start_of(key))
        cur, _ = _phi(loop, psi)
        start = tuple(cur)
        steps = []
        for st in CT.scripts[key].steps:
            op, p = st[0], st[1]
            if op == "REF":
                sub, rev = st[2], st[3]
                s0 = CT.start_of(sub, rev)
                sk = transfer(sub)
                _, pos = _phi(loop, psi)
                q = pos[p]
                sub_img = tuple(_phi(s0, psi)[0])
                if tuple(cur[q:q + len(sub_img)]) != sub_img:
                    raise TransferFailed(f"REF image mismatch in {key}")
                if len(sub_img) > 1:
                    steps.append(("REF", q, sk, rev))
                    cur[q:q + len(sub_img)] = [apex]
                loop[p:p + len(s0)] = [C.apex]
                moves[("REF",)] += 1
                continue
            if op == "BT":
                del loop[p + 1:p + 3]
            elif op == "BT+":
                loop[p + 1:p + 1] = [st[2], loop[p]]
            elif op == "TR":
                del loop[p + 1]
            elif op == "TR+":
                loop.insert(p + 1, st[3])
            new, _ = _phi(loop, psi)
            got = _realise(cur, new, local, steps)
            moves[(op, got)] += 1
            cur = new
        if cur != [apex]:
            raise TransferFailed(f"transferred script {key} does not end trivially")
        if isinstance(k2, tuple) and len(k2) == 2 and all(isinstance(x, int) for x in k2) \
                and start == out.edge_start(*k2):
            out.scripts[k2] = Script(steps)
        else:
            out.scripts[k2] = Script(steps, start)
        return k2

    if C.kind == 0:
        out.kind = 0
        r_in = validate_cone(T, C)
        rep = TransferReport(r_in.rad0, 0, out.rad0(), 0, dict(cases))
        if validate:
            rep.rad0 = validate_cone(Tt, out).rad0
        return out, rep
    for a, b in sorted(Tt.simplex_set(1)):
        ua, ub = back[a], back[b]
        if dims[ua] == n and dims[ub] == n and not V.is_subspace(ST.subspaces[ua], ST.subspaces[ub]):
            m = ST.index.get(V.intersect(ST.subspaces[ua], ST.subspaces[ub]))
            if m is None:
                raise NotWeakCnModel("intersection of adjacent Lagrangians is not in the model")
            lk = ("lag", ua, ub)
            start = C.paths[ua] + (m,) + tuple(reversed(C.paths[ub]))
            sb = ScriptBuilder(CT, start)
            sb.insert_path_pair(len(C.paths[ua]), C.paths[m])
            sb.ref(0, ua, m)
            sb.ref(0, m, ub)
            CT.add_aux(lk, start, sb.finish())
            k2 = transfer(lk)
            s = out.scripts.pop(k2)
            if s.start is not None and tuple(s.start) != out.edge_start(a, b):
                raise TransferFailed("Lagrangian edge script does not start at the edge loop")
            out.scripts[(a, b)] = Script(s.steps)
        else:
            key, _ = C.edge_key(ua, ub)
            if key is None:
                raise ConeError(f"input cone has no script for edge ({ua},{ub})")
            transfer(key)
    r_in = validate_cone(T, C)
    rep = TransferReport(r_in.rad0, r_in.rad1, out.rad0(), 0, dict(cases),
                         {str(k): v for k, v in sorted(moves.items(), key=str)})
    if validate:
        r = validate_cone(Tt, out)
        rep.rad0, rep.rad1 = r.rad0, r.rad1
    return out, rep


def _realise(cur, new, local: _Local, steps) -> tuple:
    """Append moves turning the loop `cur` into `new`; returns the opcodes used."""
    if cur == new:
        return ()
    p = 0
    while p < min(len(cur), len(new)) and cur[p] == new[p]:
        p += 1
    s = 0
    while s < min(len(cur), len(new)) - p and cur[-1 - s] == new[-1 - s]:
        s += 1
    for widen in range(4):
        i0 = max(0, p - 1 - widen)
        e_old = min(len(cur), len(cur) - s + 1 + widen)
        e_new = min(len(new), len(new) - s + 1 + widen)
        old_w, new_w = tuple(cur[i0:e_old]), tuple(new[i0:e_new])
        if old_w[0] != new_w[0] or old_w[-1] != new_w[-1]:
            continue
        seq = local.solve(old_w, new_w)
        if seq is not None:
            for st in seq:
                steps.append((st[0], st[1] + i0) + tuple(st[2:]))
            return tuple(st[0] for st in seq)
    raise TransferFailed(f"no local moves from {cur} to {new}")

"""Finite matrix groups from generators, coset spaces, intersections and the
KMS generator families.

Two enumeration engines share one interface.  Over finite rings whose keys
fit in 64 bits the closure runs on numpy arrays of entry digits (this is what
makes SL_3(F_9), about 4.2e7 elements, tractable).  Everything else (K[t],
wide keys) goes through a plain Python BFS on hashable entry tuples.

Breadth-first search uses the symmetric generating set S = gens + inverses,
so layer k+1 is (layer_k * S) minus layers k and k-1; the visited set never
has to be materialised during the search.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .algebra import (FieldSpec, PolyRing, Poly, QuotientRing, RingMatrix,
                      decode, elementary_matrix, encode, identity_matrix,
                      key_bits, mat_pi_f)

log = logging.getLogger(__name__)


class GroupError(ValueError):
    pass


class BudgetExceeded(GroupError):
    def __init__(self, count: int, budget: int):
        super().__init__(f"group closure exceeded budget {budget} (reached {count})")
        self.count = count
        self.budget = budget


class NonInvertibleGenerator(GroupError):
    pass


class NotASubgroup(GroupError):
    pass


class ShapeMismatch(GroupError):
    pass


class RankTooSmall(GroupError):
    pass


class DegreeTooSmall(GroupError):
    pass


@dataclass(frozen=True)
class GenSet:
    dim: int
    ring: object
    gens: tuple[RingMatrix, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise GroupError("generator labels must be unique")
        for g in self.gens:
            if g.dim != self.dim:
                raise ShapeMismatch("generator of the wrong size")

    def without(self, label: str) -> "GenSet":
        keep = [(g, l) for g, l in zip(self.gens, self.labels) if l != label]
        return GenSet(self.dim, self.ring, tuple(g for g, _ in keep), tuple(l for _, l in keep))


def _is_table_ring(ring) -> bool:
    return isinstance(ring, (FieldSpec, QuotientRing))


def fast_path(dim: int, ring) -> bool:
    return _is_table_ring(ring) and key_bits(dim, ring.order) <= 64


# --------------------------------------------------------------------------
# vectorised helpers over table rings
# --------------------------------------------------------------------------

class _Digits:
    """Key <-> digit-array conversion for one (dim, ring) shape."""

    def __init__(self, dim: int, ring):
        self.dim = dim
        self.ring = ring
        self.base = ring.order
        n = dim * dim
        self.weights = np.array([self.base ** (n - 1 - i) for i in range(n)], dtype=np.uint64)
        self.add = np.asarray(ring.add_table, dtype=np.int64)
        self.mul = np.asarray(ring.mul_table, dtype=np.int64)

    def digit(self, keys: np.ndarray, idx: int) -> np.ndarray:
        return ((keys // self.weights[idx]) % np.uint64(self.base)).astype(np.int64)

    def decode(self, keys: np.ndarray) -> np.ndarray:
        n = self.dim * self.dim
        out = np.empty((keys.size, n), dtype=np.int64)
        k = keys.copy()
        b = np.uint64(self.base)
        for i in range(n - 1, -1, -1):
            out[:, i] = (k % b).astype(np.int64)
            k //= b
        return out

    def encode(self, digits: np.ndarray) -> np.ndarray:
        return (digits.astype(np.uint64) * self.weights).sum(axis=1, dtype=np.uint64)

    def right_mul(self, keys: np.ndarray, g: RingMatrix) -> np.ndarray:
        """keys of k * g for every key k."""
        d = self.dim
        e = g.entries
        ident = identity_matrix(d, g.ring).entries
        diff = [i for i in range(d * d) if e[i] != ident[i]]
        if len(diff) == 1 and diff[0] // d != diff[0] % d:
            # elementary: column j += a * column i
            i, j = divmod(diff[0], d)
            a = e[diff[0]]
            out = keys.copy()
            for r in range(d):
                src = self.digit(keys, r * d + i)
                old = self.digit(keys, r * d + j)
                new = self.add[old, self.mul[src, a]]
                delta = new - old
                pos = delta > 0
                w = self.weights[r * d + j]
                out[pos] += delta[pos].astype(np.uint64) * w
                out[~pos] -= (-delta[~pos]).astype(np.uint64) * w
            return out
        D = self.decode(keys)
        out = np.empty_like(D)
        for r in range(d):
            for c in range(d):
                acc = np.zeros(keys.size, dtype=np.int64)
                for k in range(d):
                    gk = e[k * d + c]
                    if gk == 0:
                        continue
                    term = D[:, r * d + k] if gk == 1 else self.mul[D[:, r * d + k], gk]
                    acc = self.add[acc, term]
                out[:, r * d + c] = acc
        return self.encode(out)


def _setdiff_sorted(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if b.size == 0 or a.size == 0:
        return a
    idx = np.searchsorted(b, a)
    idx[idx == b.size] = b.size - 1
    return a[b[idx] != a]


def _in_sorted(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if b.size == 0:
        return np.zeros(a.shape, dtype=bool)
    idx = np.searchsorted(b, a)
    idx[idx == b.size] = b.size - 1
    return b[idx] == a


# --------------------------------------------------------------------------
# group tables
# --------------------------------------------------------------------------

class GroupTable:
    """Sorted canonical keys of a finite matrix group.

    ``keys`` is a uint64 array on the fast path and a sorted list of Python
    ints otherwise.  Index i refers to the i-th smallest key.
    """

    def __init__(self, dim: int, ring, keys, gens: GenSet | None, degree_bound: int | None = None):
        self.dim = dim
        self.ring = ring
        self.gens = gens
        self.degree_bound = degree_bound
        self.fast = isinstance(keys, np.ndarray)
        self.keys = keys
        if not self.fast:
            self._pos = {k: i for i, k in enumerate(keys)}
        self._digits = _Digits(dim, ring) if self.fast else None

    @property
    def order(self) -> int:
        return len(self.keys)

    def __len__(self):
        return self.order

    def key_of(self, A: RingMatrix) -> int:
        return encode(A, self.degree_bound) if isinstance(self.ring, PolyRing) else encode(A)

    def matrix(self, i: int) -> RingMatrix:
        return decode(int(self.keys[i]), self.dim, self.ring, True, self.degree_bound)

    def index_of(self, keys):
        """Indices of the given keys (-1 where absent)."""
        if self.fast:
            keys = np.asarray(keys, dtype=np.uint64)
            idx = np.searchsorted(self.keys, keys)
            idx[idx == self.keys.size] = 0
            hit = self.keys[idx] == keys
            return np.where(hit, idx, -1).astype(np.int64)
        return np.array([self._pos.get(int(k), -1) for k in keys], dtype=np.int64)

    def __contains__(self, key) -> bool:
        return int(self.index_of([key])[0]) >= 0

    def identity_key(self) -> int:
        return self.key_of(identity_matrix(self.dim, self.ring))

    def right_perm(self, g: RingMatrix, chunk: int = 4_000_000) -> np.ndarray:
        """perm[i] = index of (element i) * g."""
        if self.fast:
            out = np.empty(self.order, dtype=np.int64 if self.order >= 2 ** 31 else np.int32)
            for s in range(0, self.order, chunk):
                ks = self._digits.right_mul(self.keys[s:s + chunk], g)
                idx = self.index_of(ks)
                if (idx < 0).any():
                    raise NotASubgroup("table is not closed under this element")
                out[s:s + chunk] = idx
            return out
        out = np.empty(self.order, dtype=np.int64)
        for i in range(self.order):
            k = self.key_of(self.matrix(i) @ g)
            j = self._pos.get(k, -1)
            if j < 0:
                raise NotASubgroup("table is not closed under this element")
            out[i] = j
        return out

    def elements(self):
        for i in range(self.order):
            yield self.matrix(i)

    def check_closure(self) -> bool:
        """Full sweep: every product with every generator lies in the table."""
        if self.gens is None:
            return True
        for g in self.gens.gens:
            try:
                self.right_perm(g)
            except NotASubgroup:
                return False
        return True


def _inverse_set(gens: GenSet) -> list[RingMatrix]:
    S, seen = [], set()
    for g in gens.gens:
        try:
            gi = g.inverse()
        except ZeroDivisionError as exc:
            raise NonInvertibleGenerator(str(exc)) from exc
        for h in (g, gi):
            k = h.entries
            if k not in seen:
                seen.add(k)
                S.append(h)
    return S


def generate_group(gens: GenSet, budget: int = 10 ** 6, max_degree: int = 64) -> GroupTable:
    """Breadth-first closure under gens and their inverses."""
    S = _inverse_set(gens)
    if fast_path(gens.dim, gens.ring):
        return _generate_fast(gens, S, budget)
    return _generate_slow(gens, S, budget, max_degree)


def _generate_fast(gens: GenSet, S, budget: int) -> GroupTable:
    dg = _Digits(gens.dim, gens.ring)
    ident = np.array([encode(identity_matrix(gens.dim, gens.ring))], dtype=np.uint64)
    layers = [ident]
    prev = np.empty(0, dtype=np.uint64)
    total = 1
    chunk = 2_000_000
    while True:
        cur = layers[-1]
        acc: list[np.ndarray] = []
        acc_size = 0
        for s0 in range(0, cur.size, chunk):
            part = cur[s0:s0 + chunk]
            for s in S:
                c = np.unique(dg.right_mul(part, s))
                c = _setdiff_sorted(_setdiff_sorted(c, cur), prev)
                acc.append(c)
                acc_size += c.size
                if acc_size > 3 * chunk and len(acc) > 1:
                    acc = [np.unique(np.concatenate(acc))]
                    acc_size = acc[0].size
        nxt = np.unique(np.concatenate(acc)) if acc else np.empty(0, dtype=np.uint64)
        if nxt.size == 0:
            break
        total += nxt.size
        if total > budget:
            raise BudgetExceeded(total, budget)
        prev = cur
        layers.append(nxt)
        log.debug("bfs layer %d: %d new (total %d)", len(layers) - 1, nxt.size, total)
    keys = np.concatenate(layers)
    keys.sort()
    return GroupTable(gens.dim, gens.ring, keys, gens)


def _generate_slow(gens: GenSet, S, budget: int, max_degree: int) -> GroupTable:
    ident = identity_matrix(gens.dim, gens.ring)
    poly = isinstance(gens.ring, PolyRing)
    seen = {ident.entries}
    frontier = [ident]
    maxdeg = 0
    while frontier:
        nxt = []
        for a in frontier:
            for s in S:
                b = a @ s
                if b.entries not in seen:
                    seen.add(b.entries)
                    nxt.append(b)
                    if poly:
                        maxdeg = max(maxdeg, max(x.degree for x in b.entries))
                        if maxdeg > max_degree:
                            raise BudgetExceeded(len(seen), budget)
        if len(seen) > budget:
            raise BudgetExceeded(len(seen), budget)
        # deterministic order within a layer
        frontier = sorted(nxt, key=lambda m: _sort_key(m))
    bound = None
    if poly:
        bound = maxdeg + 1
        keys = sorted(encode(RingMatrix(gens.dim, e, gens.ring, True), bound) for e in seen)
    else:
        keys = sorted(encode(RingMatrix(gens.dim, e, gens.ring, True)) for e in seen)
    return GroupTable(gens.dim, gens.ring, keys, gens, bound)


def _sort_key(m: RingMatrix):
    if isinstance(m.ring, PolyRing):
        return tuple(x.coeffs for x in m.entries)
    return m.entries


def table_from_elements(dim: int, ring, mats, gens: GenSet | None = None) -> GroupTable:
    keys = sorted({encode(m) for m in mats})
    if fast_path(dim, ring):
        return GroupTable(dim, ring, np.array(keys, dtype=np.uint64), gens)
    return GroupTable(dim, ring, keys, gens)


# --------------------------------------------------------------------------
# cosets
# --------------------------------------------------------------------------

def generating_subset(H: GroupTable) -> GenSet:
    """Greedy generating set for a table that has none."""
    if H.gens is not None:
        return H.gens
    chosen: list[RingMatrix] = []
    current = {H.identity_key()}
    for i in range(H.order):
        k = int(H.keys[i])
        if k in current:
            continue
        chosen.append(H.matrix(i))
        gs = GenSet(H.dim, H.ring, tuple(chosen), tuple(f"h{j}" for j in range(len(chosen))))
        sub = generate_group(gs, budget=H.order)
        current = {int(x) for x in sub.keys}
        if len(current) == H.order:
            break
    return GenSet(H.dim, H.ring, tuple(chosen), tuple(f"h{j}" for j in range(len(chosen))))


@dataclass
class CosetSpace:
    """Left cosets gH.  ``rep_index[i]`` is the index (in G) of the minimum
    key of the coset of element i; ``coset_id[i]`` numbers cosets 0..|G:H|-1
    in order of their representatives."""

    group: GroupTable
    subgroup: GroupTable
    rep_index: np.ndarray
    coset_id: np.ndarray
    reps: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return int(self.reps.size)

    def rep_key(self, i: int) -> int:
        return int(self.group.keys[self.rep_index[i]])


def coset_space(G: GroupTable, H: GroupTable, check: bool = True) -> CosetSpace:
    if (G.dim, G.ring) != (H.dim, H.ring):
        raise ShapeMismatch("group and subgroup live in different matrix rings")
    if check:
        hk = H.keys if H.fast else list(H.keys)
        if (G.index_of(hk) < 0).any():
            raise NotASubgroup("H is not contained in G")
    hg = generating_subset(H)
    perms = [G.right_perm(h) for h in hg.gens]
    lab = np.arange(G.order, dtype=perms[0].dtype if perms else np.int64)
    while True:
        changed = False
        for p in perms:
            new = np.minimum(lab, lab[p])
            # pull the minimum back along p as well so each sweep is symmetric
            back = np.empty_like(new)
            back[p] = new
            new = np.minimum(new, back)
            if not changed and not np.array_equal(new, lab):
                changed = True
            lab = new
        if not changed:
            break
    reps, coset_id = np.unique(lab, return_inverse=True)
    if reps.size * H.order != G.order:
        raise NotASubgroup(f"coset count {reps.size} * {H.order} != {G.order}")
    return CosetSpace(G, H, lab, coset_id.astype(np.int32 if reps.size < 2 ** 31 else np.int64), reps)


def subgroup_intersection(H1: GroupTable, H2: GroupTable) -> GroupTable:
    if (H1.dim, H1.ring) != (H2.dim, H2.ring):
        raise ShapeMismatch("different ambient shapes")
    if H1.fast and H2.fast:
        keys = np.intersect1d(H1.keys, H2.keys)
        return GroupTable(H1.dim, H1.ring, keys, None)
    keys = sorted(set(int(k) for k in H1.keys) & set(int(k) for k in H2.keys))
    return GroupTable(H1.dim, H1.ring, keys, None, H1.degree_bound)


def subgroup_table(G: GroupTable, gens: GenSet) -> GroupTable:
    return generate_group(gens, budget=G.order)


# --------------------------------------------------------------------------
# KMS generators for type A
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class KMSGenerators:
    B: GenSet
    H: tuple[GenSet, ...]
    small_field_warning: bool


def kms_generators_A(n: int, field: FieldSpec) -> KMSGenerators:
    """B = {e_{i,i+1}(1)} u {e_{n+1,1}(t)} over K[t]; H_i drops e_{i,i+1}(1)
    for 1 <= i <= n and H_0 drops e_{n+1,1}(t)."""
    if n < 2:
        raise RankTooSmall("the construction needs n >= 2")
    R = PolyRing(field)
    gens, labels = [], []
    for i in range(1, n + 1):
        gens.append(elementary_matrix(n, i, i + 1, 1, R))
        labels.append(f"e{i}{i + 1}(1)")
    gens.append(elementary_matrix(n, n + 1, 1, R.t(), R))
    labels.append(f"e{n + 1}1(t)")
    B = GenSet(n + 1, R, tuple(gens), tuple(labels))
    H = [B.without(labels[-1])] + [B.without(labels[i - 1]) for i in range(1, n + 1)]
    return KMSGenerators(B, tuple(H), field.order < 5)


def phi_f_image(gens: GenSet, f: Poly) -> GenSet:
    if f.degree < 2:
        raise DegreeTooSmall("the modulus must have degree >= 2")
    Q = QuotientRing(f)
    return GenSet(gens.dim, Q, tuple(mat_pi_f(g, Q) for g in gens.gens), gens.labels)


def injectivity_check(H: GenSet, f: Poly, budget: int = 10 ** 6) -> tuple[bool, int, int]:
    """Compare |<H>| in K[t] (degree-monitored closure) with |<phi_f(H)>|."""
    pre = generate_group(H, budget=budget)
    img = generate_group(phi_f_image(H, f), budget=budget)
    return pre.order == img.order, pre.order, img.order


def sl_order(n: int, q: int) -> int:
    """|SL_n(F_q)| = q^{n(n-1)/2} prod_{i=2}^n (q^i - 1)."""
    out = q ** (n * (n - 1) // 2)
    for i in range(2, n + 1):
        out *= q ** i - 1
    return out

"""Partite simplicial complexes stored by their maximal faces.

Vertices are 0..N-1 with a type in 0..n_types-1.  Maximal faces are kept in
numpy arrays grouped by size (rows sorted ascending), so the same class
serves an 18-vertex link and a 4.7-million-vertex congruence complex.  Faces
of every dimension, set views and adjacency are derived lazily.
"""
from __future__ import annotations

import hashlib
import io
import itertools
from fractions import Fraction
from math import comb

import numpy as np


class ComplexError(ValueError):
    pass


class SimplexNotInComplex(ComplexError):
    pass


class NotPure(ComplexError):
    pass


class NotPartite(ComplexError):
    pass


class EmptyFactor(ComplexError):
    pass


class FormatError(ComplexError):
    pass


def _row_keys(arr: np.ndarray, n_vertices: int):
    """Encode sorted int rows as single int64 keys when that is lossless."""
    k = arr.shape[1]
    if k == 0:
        return np.zeros(arr.shape[0], dtype=np.int64)
    if n_vertices ** k < 2 ** 62:
        key = np.zeros(arr.shape[0], dtype=np.int64)
        for c in range(k):
            key = key * n_vertices + arr[:, c].astype(np.int64)
        return key
    return None


def unique_rows(arr: np.ndarray, n_vertices: int, return_counts=False):
    keys = _row_keys(arr, n_vertices)
    if keys is None:
        return np.unique(arr, axis=0, return_counts=return_counts)
    if return_counts:
        _, idx, cnt = np.unique(keys, return_index=True, return_counts=True)
        return arr[idx], cnt
    _, idx = np.unique(keys, return_index=True)
    return arr[idx]


class PartiteComplex:
    """Downward-closed complex given by maximal faces, with vertex types."""

    def __init__(self, n_types: int, vtype, facets, labels=None, label_fn=None,
                 name: str = "", check: bool = True, maximal: bool = False):
        self.n_types = int(n_types)
        self.vtype = np.asarray(vtype, dtype=np.int16)
        self.name = name
        self._labels = list(labels) if labels is not None else None
        self._label_fn = label_fn
        self.parent_ids: np.ndarray | None = None
        self._cache: dict = {}
        groups: dict[int, list] = {}
        if isinstance(facets, np.ndarray):
            arr = np.sort(facets.astype(np.int64 if self.n_vertices >= 2 ** 31 else np.int32), axis=1)
            groups[arr.shape[1]] = [arr]
        else:
            for f in facets:
                t = tuple(sorted(int(x) for x in f))
                groups.setdefault(len(t), []).append(t)
        self._facets: dict[int, np.ndarray] = {}
        for size, rows in sorted(groups.items()):
            if isinstance(rows[0], np.ndarray):
                arr = rows[0]
            else:
                arr = np.array(rows, dtype=np.int64).reshape(len(rows), size)
            self._facets[size] = arr
        if not maximal:
            self._reduce_to_maximal()
        if check:
            self.check_partite()

    # ------------------------------------------------------------------ basic
    @property
    def n_vertices(self) -> int:
        return int(self.vtype.size)

    @property
    def dim(self) -> int:
        if not self._facets:
            return -1
        return max(self._facets) - 1

    @property
    def is_pure(self) -> bool:
        return len(self._facets) <= 1 and self._covers_all_vertices()

    def _covers_all_vertices(self) -> bool:
        if self.n_vertices == 0:
            return True
        seen = np.zeros(self.n_vertices, dtype=bool)
        for arr in self._facets.values():
            seen[arr.ravel()] = True
        return bool(seen.all())

    def facet_arrays(self):
        return dict(self._facets)

    def facets(self):
        for size in sorted(self._facets):
            for row in self._facets[size]:
                yield tuple(int(x) for x in row)

    def n_facets(self) -> int:
        return sum(a.shape[0] for a in self._facets.values())

    def top_faces(self) -> np.ndarray:
        if not self.is_pure:
            raise NotPure("complex is not pure")
        return self._facets[self.dim + 1]

    def label(self, v: int) -> str:
        if self._labels is not None:
            return str(self._labels[v])
        if self._label_fn is not None:
            return str(self._label_fn(v))
        return str(v)

    def _reduce_to_maximal(self):
        sizes = sorted(self._facets)
        if len(sizes) <= 1:
            if sizes:
                self._facets[sizes[0]] = unique_rows(self._facets[sizes[0]], max(1, self.n_vertices))
            return
        bigger: set = set()
        out = {}
        for size in reversed(sizes):
            arr = unique_rows(self._facets[size], max(1, self.n_vertices))
            keep = []
            for row in arr:
                t = tuple(int(x) for x in row)
                if t not in bigger:
                    keep.append(t)
            if keep:
                out[size] = np.array(keep, dtype=np.int64).reshape(len(keep), size)
            for t in keep:
                for r in range(1, size):
                    for sub in itertools.combinations(t, r):
                        bigger.add(sub)
        self._facets = dict(sorted(out.items()))

    def check_partite(self):
        for arr in self._facets.values():
            if arr.shape[1] > 1:
                t = np.sort(self.vtype[arr], axis=1)
                if (np.diff(t, axis=1) == 0).any():
                    raise NotPartite("a face has two vertices of the same type")

    # -------------------------------------------------------------- simplices
    def simplices(self, k: int) -> np.ndarray:
        """All k-simplices as sorted rows, lexicographically ordered."""
        key = ("S", k)
        if key in self._cache:
            return self._cache[key]
        if k == 0:
            out = np.arange(self.n_vertices, dtype=np.int64).reshape(-1, 1)
        else:
            parts = []
            for size, arr in self._facets.items():
                if size < k + 1:
                    continue
                for cols in itertools.combinations(range(size), k + 1):
                    parts.append(arr[:, list(cols)])
            if parts:
                out = unique_rows(np.concatenate(parts), max(1, self.n_vertices))
                keys = _row_keys(out, max(1, self.n_vertices))
                if keys is not None:
                    out = out[np.argsort(keys, kind="stable")]
            else:
                out = np.empty((0, k + 1), dtype=np.int64)
        self._cache[key] = out
        return out

    def count(self, k: int) -> int:
        return int(self.simplices(k).shape[0])

    def f_vector(self) -> list[int]:
        return [self.count(k) for k in range(self.dim + 1)]

    def simplex_set(self, k: int) -> set:
        key = ("set", k)
        if key not in self._cache:
            self._cache[key] = {tuple(int(x) for x in r) for r in self.simplices(k)}
        return self._cache[key]

    def has_simplex(self, s) -> bool:
        s = tuple(sorted(s))
        if len(s) == 0:
            return True
        if len(s) == 1:
            return 0 <= s[0] < self.n_vertices
        return s in self.simplex_set(len(s) - 1)

    def has_edge(self, a: int, b: int) -> bool:
        return (a, b) in self.simplex_set(1) if a < b else (b, a) in self.simplex_set(1)

    def has_triangle(self, a: int, b: int, c: int) -> bool:
        return tuple(sorted((a, b, c))) in self.simplex_set(2)

    def _csr(self):
        if "csr" not in self._cache:
            e = self.simplices(1)
            n = self.n_vertices
            src = np.concatenate([e[:, 0], e[:, 1]]) if e.size else np.empty(0, dtype=np.int64)
            dst = np.concatenate([e[:, 1], e[:, 0]]) if e.size else np.empty(0, dtype=np.int64)
            order = np.lexsort((dst, src))
            src, dst = src[order], dst[order]
            ptr = np.zeros(n + 1, dtype=np.int64)
            np.add.at(ptr, src + 1, 1)
            ptr = np.cumsum(ptr)
            self._cache["csr"] = (ptr, dst)
        return self._cache["csr"]

    def neighbors(self, v: int) -> np.ndarray:
        ptr, dst = self._csr()
        return dst[ptr[v]:ptr[v + 1]]

    def adjacency_sets(self) -> list[set]:
        if "adj" not in self._cache:
            ptr, dst = self._csr()
            self._cache["adj"] = [set(int(x) for x in dst[ptr[v]:ptr[v + 1]])
                                  for v in range(self.n_vertices)]
        return self._cache["adj"]

    def vertices_of_type(self, t: int) -> np.ndarray:
        return np.nonzero(self.vtype == t)[0]

    def is_connected(self) -> bool:
        from scipy.sparse import coo_matrix
        from scipy.sparse.csgraph import connected_components
        n = self.n_vertices
        if n == 0:
            return True
        # star edges from each facet's first vertex span the same components
        # as the 1-skeleton without materialising it
        src, dst = [], []
        for arr in self._facets.values():
            for j in range(1, arr.shape[1]):
                src.append(arr[:, 0])
                dst.append(arr[:, j])
        if not src:
            return n == 1
        src, dst = np.concatenate(src), np.concatenate(dst)
        g = coo_matrix((np.ones(src.size, dtype=np.int8), (src, dst)), shape=(n, n))
        return connected_components(g, directed=False)[0] == 1

    # ------------------------------------------------------------ operations
    def full_subcomplex(self, vertices) -> "PartiteComplex":
        vs = np.array(sorted(set(int(v) for v in vertices)), dtype=np.int64)
        local = -np.ones(self.n_vertices, dtype=np.int64)
        local[vs] = np.arange(vs.size)
        faces = set()
        for arr in self._facets.values():
            for row in arr:
                inside = tuple(sorted(int(local[x]) for x in row if local[x] >= 0))
                if inside:
                    faces.add(inside)
        labels = [self.label(int(v)) for v in vs]
        sub = PartiteComplex(self.n_types, self.vtype[vs], list(faces), labels=labels,
                             name=f"{self.name}|sub", check=False)
        sub.parent_ids = vs
        return sub

    def link(self, sigma) -> "PartiteComplex":
        sigma = tuple(sorted(int(v) for v in sigma))
        if not self.has_simplex(sigma):
            raise SimplexNotInComplex(f"{sigma} is not a simplex")
        s = set(sigma)
        faces = set()
        for arr in self._facets.values():
            if len(sigma) == 0:
                mask = np.ones(arr.shape[0], dtype=bool)
            else:
                mask = np.ones(arr.shape[0], dtype=bool)
                for v in sigma:
                    mask &= (arr == v).any(axis=1)
            for row in arr[mask]:
                rest = tuple(int(x) for x in row if int(x) not in s)
                faces.add(rest)
        faces.discard(())
        vs = sorted({v for f in faces for v in f})
        local = {v: i for i, v in enumerate(vs)}
        facets = [tuple(local[v] for v in f) for f in faces]
        out = PartiteComplex(self.n_types, self.vtype[vs] if vs else np.empty(0, dtype=np.int16),
                             facets, labels=[self.label(v) for v in vs],
                             name=f"lk({sigma})", check=False)
        out.parent_ids = np.array(vs, dtype=np.int64)
        return out

    def compact_types(self) -> "PartiteComplex":
        """Same complex with only the types that occur, renumbered in order
        (links keep the ambient type count otherwise)."""
        used = np.unique(self.vtype)
        remap = np.full(max(self.n_types, 1), -1, dtype=np.int16)
        remap[used] = np.arange(used.size, dtype=np.int16)
        out = PartiteComplex(int(used.size), remap[self.vtype], list(self.facets()),
                             labels=[self.label(v) for v in range(self.n_vertices)],
                             name=self.name, check=False, maximal=True)
        out.parent_ids = self.parent_ids
        return out

    # -------------------------------------------------------------- hashing
    def canonical_hash(self) -> str:
        if "hash" not in self._cache:
            h = hashlib.sha256()
            h.update(f"{self.n_types}|{self.n_vertices}|".encode())
            h.update(self.vtype.astype(np.int64).tobytes())
            for size in sorted(self._facets):
                arr = np.ascontiguousarray(self._facets[size].astype(np.int64))
                keys = _row_keys(arr, max(1, self.n_vertices))
                if keys is not None:
                    arr = arr[np.argsort(keys, kind="stable")]
                h.update(f"|{size}|".encode())
                h.update(arr.tobytes())
            self._cache["hash"] = h.hexdigest()
        return self._cache["hash"]

    def __repr__(self):
        return (f"PartiteComplex({self.name or 'X'}: {self.n_vertices} vertices, "
                f"dim {self.dim}, {self.n_types} types, {self.n_facets()} maximal faces)")


def vertex_link_profile(X: PartiteComplex) -> np.ndarray:
    """Per vertex v: [facets through v, vertices of lk(v), min and max number
    of facets through an edge at v].  Isomorphic vertex links have equal rows;
    the last two columns are the extreme vertex degrees of lk(v) in dim 2.

    Works on the top faces only, one type pair at a time, so the edge list of
    a very large complex is never built in full."""
    if "vlp" in X._cache:
        return X._cache["vlp"]
    top = X.top_faces()
    n = X.n_vertices
    width = top.shape[1]
    out = np.zeros((n, 4), dtype=np.int64)
    out[:, 0] = np.bincount(top.ravel(), minlength=n)
    out[:, 2] = np.iinfo(np.int64).max
    if width < 2:
        out[:, 2] = 0
        return out
    typed = width == X.n_types and bool((np.diff(X.vtype[top[:1]], axis=1) > 0).all())
    if typed:
        typed = bool((X.vtype[top] == np.arange(width, dtype=X.vtype.dtype)).all())
    if typed:
        blocks = [[top[:, [i, j]]] for i, j in itertools.combinations(range(width), 2)]
    else:
        blocks = [[top[:, [i, j]] for i, j in itertools.combinations(range(width), 2)]]
    for parts in blocks:
        pairs = np.concatenate(parts)
        key = pairs[:, 0].astype(np.int64) * n + pairs[:, 1]
        del pairs
        u, c = np.unique(key, return_counts=True)
        del key
        a, b = u // n, u % n
        for side in (a, b):
            out[:, 1] += np.bincount(side, minlength=n)
            np.minimum.at(out[:, 2], side, c)
            np.maximum.at(out[:, 3], side, c)
    out[out[:, 2] == np.iinfo(np.int64).max, 2] = 0
    X._cache["vlp"] = out
    return out


def join(Y1: PartiteComplex, Y2: PartiteComplex) -> PartiteComplex:
    """Y1 * Y2; vertices of Y2 are shifted by |Y1|, types by Y1.n_types."""
    if Y1.n_vertices == 0 or Y2.n_vertices == 0:
        raise EmptyFactor("both join factors must be nonempty")
    off = Y1.n_vertices
    vtype = np.concatenate([Y1.vtype, Y2.vtype + Y1.n_types])
    f1 = list(Y1.facets()) or [()]
    f2 = list(Y2.facets()) or [()]
    facets = [a + tuple(b_ + off for b_ in b) for a in f1 for b in f2]
    facets = [f for f in facets if f]
    labels = [Y1.label(v) for v in range(Y1.n_vertices)] + [Y2.label(v) for v in range(Y2.n_vertices)]
    return PartiteComplex(Y1.n_types + Y2.n_types, vtype, facets, labels=labels,
                          name=f"({Y1.name})*({Y2.name})")


def complex_from_simplices(n_types: int, vtype, simplices, labels=None, name="") -> PartiteComplex:
    return PartiteComplex(n_types, vtype, simplices, labels=labels, name=name)


# --------------------------------------------------------------------------
# weights
# --------------------------------------------------------------------------

class WeightFn:
    """w(tau) = #{top faces containing tau} / (C(n+1, k+1) |X(n)|)."""

    def __init__(self, X: PartiteComplex):
        if not X.is_pure:
            raise NotPure("weights need a pure complex")
        self.X = X
        self.n = X.dim
        self.n_top = X.top_faces().shape[0]
        self._counts: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    def denominator(self, k: int) -> int:
        return comb(self.n + 1, k + 1) * self.n_top

    def counts(self, k: int):
        """(simplices(k), containment counts) aligned row by row."""
        if k not in self._counts:
            top = self.X.top_faces()
            if k == self.n:
                self._counts[k] = (self.X.simplices(k), np.ones(self.n_top, dtype=np.int64))
            else:
                parts = [top[:, list(c)] for c in itertools.combinations(range(self.n + 1), k + 1)]
                arr = np.concatenate(parts)
                rows, cnt = unique_rows(arr, max(1, self.X.n_vertices), return_counts=True)
                keys = _row_keys(rows, max(1, self.X.n_vertices))
                if keys is not None:
                    order = np.argsort(keys, kind="stable")
                    rows, cnt = rows[order], cnt[order]
                self._counts[k] = (rows, cnt.astype(np.int64))
        return self._counts[k]

    def array(self, k: int) -> np.ndarray:
        """Float weights aligned with X.simplices(k)."""
        rows, cnt = self.counts(k)
        return cnt / float(self.denominator(k))

    def dict(self, k: int) -> dict:
        rows, cnt = self.counts(k)
        d = self.denominator(k)
        return {tuple(int(x) for x in r): Fraction(int(c), d) for r, c in zip(rows, cnt)}

    def __call__(self, tau) -> Fraction:
        tau = tuple(sorted(int(v) for v in tau))
        if not tau:
            return Fraction(1)
        k = len(tau) - 1
        rows, cnt = self.counts(k)
        key = ("idx", k)
        if key not in self._counts:
            self._counts[key] = {tuple(int(x) for x in r): i for i, r in enumerate(rows)}
        i = self._counts[key].get(tau)
        if i is None:
            raise SimplexNotInComplex(f"{tau} is not a simplex")
        return Fraction(int(cnt[i]), self.denominator(k))

    def total(self, k: int) -> Fraction:
        rows, cnt = self.counts(k)
        return Fraction(int(cnt.sum()), self.denominator(k))


def weight(X: PartiteComplex) -> WeightFn:
    return WeightFn(X)


# --------------------------------------------------------------------------
# coset complexes
# --------------------------------------------------------------------------

def coset_complex(G, H: list, name: str = "CC") -> PartiteComplex:
    """CC(G; H_0..H_n): chambers {gH_0, ..., gH_n} for all g, closed downward."""
    from ..groups import coset_space
    spaces = [coset_space(G, h) for h in H]
    return coset_complex_from_spaces(spaces, name=name)


def coset_complex_from_spaces(spaces, name: str = "CC") -> PartiteComplex:
    sizes = [cs.size for cs in spaces]
    offsets = np.concatenate([[0], np.cumsum(sizes)[:-1]]).astype(np.int64)
    n_vert = int(sum(sizes))
    vtype = np.concatenate([np.full(s, i, dtype=np.int16) for i, s in enumerate(sizes)])
    dtype = np.int32 if n_vert < 2 ** 31 else np.int64
    cols = [cs.coset_id.astype(dtype) + dtype(off) for cs, off in zip(spaces, offsets)]
    chambers = np.stack(cols, axis=1)
    del cols
    chambers = unique_rows(chambers, n_vert)
    G = spaces[0].group

    def label_fn(v, spaces=spaces, offsets=offsets):
        t = int(np.searchsorted(offsets, v, side="right") - 1)
        c = v - int(offsets[t])
        return f"{t}:{int(G.keys[spaces[t].reps[c]])}"

    X = PartiteComplex(len(spaces), vtype, chambers, label_fn=label_fn, name=name,
                       check=False, maximal=True)
    X.coset_spaces = spaces
    X.coset_offsets = offsets
    return X


# --------------------------------------------------------------------------
# typed isomorphism
# --------------------------------------------------------------------------

def _refine(adjs, colors):
    """1-dimensional Weisfeiler-Leman refinement on a list of graphs sharing
    one colour space.  Returns stable integer colours per graph."""
    cols = [list(c) for c in colors]
    n_classes = -1
    while True:
        table: dict = {}
        new = []
        for adj, col in zip(adjs, cols):
            out = []
            for v, nb in enumerate(adj):
                sig = (col[v], tuple(sorted(col[u] for u in nb)))
                out.append(table.setdefault(sig, len(table)))
            new.append(out)
        cols = new
        if len(table) == n_classes:
            return cols
        n_classes = len(table)


def find_isomorphism(X: PartiteComplex, Y: PartiteComplex, type_map=None, node_budget: int = 10 ** 6):
    """Type-preserving vertex bijection X -> Y mapping maximal faces onto
    maximal faces, or None.  Backtracking over the 1-skeleton in BFS order
    with colour refinement, checked on the faces at each leaf."""
    n = X.n_vertices
    if n != Y.n_vertices or X.n_facets() != Y.n_facets():
        return None
    tm = type_map or tuple(range(X.n_types))
    ax, ay = X.adjacency_sets(), Y.adjacency_sets()

    def base_colors(Z, tmap):
        deg = {}
        for f in Z.facets():
            for v in f:
                deg.setdefault(v, []).append(len(f))
        return [(int(tmap[int(Z.vtype[v])]), tuple(sorted(deg.get(v, ())))) for v in range(Z.n_vertices)]

    bx, by = base_colors(X, tm), base_colors(Y, tuple(range(Y.n_types)))
    keys = {c: i for i, c in enumerate(sorted(set(bx) | set(by)))}
    cx, cy = _refine([ax, ay], [[keys[c] for c in bx], [keys[c] for c in by]])
    if sorted(cx) != sorted(cy):
        return None
    by_color: dict = {}
    for v, c in enumerate(cy):
        by_color.setdefault(c, []).append(v)
    # BFS order on X, each component started from its rarest colour
    freq = np.bincount(np.array(cx + [0]))
    order, parent, seen = [], {}, set()
    for s in sorted(range(n), key=lambda v: (freq[cx[v]], v)):
        if s in seen:
            continue
        seen.add(s)
        parent[s] = None
        queue = [s]
        for v in queue:
            order.append(v)
            for u in sorted(ax[v]):
                if u not in seen:
                    seen.add(u)
                    parent[u] = v
                    queue.append(u)
    facets_y = {tuple(sorted(f)) for f in Y.facets()}
    fwd = [-1] * n
    used = [False] * n
    nodes = [0]

    def candidates(v):
        p = parent[v]
        pool = ay[fwd[p]] if p is not None else by_color[cx[v]]
        mapped_nb = [fwd[u] for u in ax[v] if fwd[u] >= 0]
        n_mapped = len(mapped_nb)
        for w in sorted(pool):
            if used[w] or cy[w] != cx[v]:
                continue
            if any(m not in ay[w] for m in mapped_nb):
                continue
            if sum(1 for u in ay[w] if used[u]) != n_mapped:
                continue
            yield w

    def leaf_ok():
        for f in X.facets():
            if tuple(sorted(fwd[v] for v in f)) not in facets_y:
                return False
        return True

    def rec(i):
        if i == n:
            return leaf_ok()
        v = order[i]
        for w in candidates(v):
            nodes[0] += 1
            if nodes[0] > node_budget:
                raise TimeoutError("isomorphism search budget exhausted")
            fwd[v] = w
            used[w] = True
            if rec(i + 1):
                return True
            fwd[v] = -1
            used[w] = False
        return False

    import sys
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, n + 1000))
    try:
        ok = rec(0)
    finally:
        sys.setrecursionlimit(old)
    return list(fwd) if ok else None


def typed_isomorphic(X: PartiteComplex, Y: PartiteComplex, allow_type_permutation: bool = True,
                     node_budget: int = 10 ** 6):
    """Exact isomorphism of complexes preserving types (up to a bijection of
    type labels when allowed).  Returns the type bijection or None."""
    if X.n_types != Y.n_types or X.n_vertices != Y.n_vertices or X.n_facets() != Y.n_facets():
        return None
    cx = np.bincount(X.vtype, minlength=X.n_types)
    cy = np.bincount(Y.vtype, minlength=Y.n_types)
    perms = itertools.permutations(range(X.n_types)) if allow_type_permutation else [tuple(range(X.n_types))]
    for perm in perms:
        if any(cx[t] != cy[perm[t]] for t in range(X.n_types)):
            continue
        if find_isomorphism(X, Y, type_map=perm, node_budget=node_budget) is not None:
            return perm
    return None


# --------------------------------------------------------------------------
# export / import
# --------------------------------------------------------------------------

FORMAT_VERSION = 1


def export_complex(X: PartiteComplex, fh) -> None:
    """Line format: header, vertex table (id type label), maximal faces."""
    fh.write(f"hdx-complex {FORMAT_VERSION}\n")
    fh.write(f"dim {X.dim}\n")
    fh.write(f"types {X.n_types}\n")
    counts = X.f_vector()
    fh.write("counts " + " ".join(str(c) for c in counts) + "\n")
    fh.write(f"vertices {X.n_vertices}\n")
    for v in range(X.n_vertices):
        fh.write(f"{v} {int(X.vtype[v])} {X.label(v)}\n")
    fh.write(f"facets {X.n_facets()}\n")
    for size in sorted(X._facets):
        arr = X._facets[size]
        buf = io.StringIO()
        np.savetxt(buf, arr, fmt="%d", delimiter=" ")
        fh.write(buf.getvalue())
    fh.write("end\n")


def export_string(X: PartiteComplex) -> str:
    buf = io.StringIO()
    export_complex(X, buf)
    return buf.getvalue()


def import_complex(fh) -> PartiteComplex:
    def expect(prefix):
        line = fh.readline()
        if not line.startswith(prefix):
            raise FormatError(f"expected {prefix!r}, got {line[:40]!r}")
        return line[len(prefix):].strip()

    ver = expect("hdx-complex ")
    if int(ver) != FORMAT_VERSION:
        raise FormatError(f"unsupported format version {ver}")
    int(expect("dim "))
    n_types = int(expect("types "))
    counts = [int(x) for x in expect("counts").split()]
    nv = int(expect("vertices "))
    vtype = np.empty(nv, dtype=np.int16)
    labels = []
    for i in range(nv):
        parts = fh.readline().rstrip("\n").split(" ", 2)
        if int(parts[0]) != i:
            raise FormatError("vertex ids must be consecutive")
        vtype[i] = int(parts[1])
        labels.append(parts[2] if len(parts) > 2 else str(i))
    nf = int(expect("facets "))
    rows = [tuple(int(x) for x in fh.readline().split()) for _ in range(nf)]
    if fh.readline().strip() != "end":
        raise FormatError("missing end marker")
    X = PartiteComplex(n_types, vtype, rows, labels=labels, maximal=True)
    if X.f_vector() != counts:
        raise FormatError("face counts do not match the header")
    return X


def import_string(s: str) -> PartiteComplex:
    return import_complex(io.StringIO(s))


def link_of(X: PartiteComplex, sigma) -> PartiteComplex:
    return X.link(sigma)

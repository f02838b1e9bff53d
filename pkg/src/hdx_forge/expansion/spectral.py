"""Second eigenvalue of the weighted random walk, globally and on links."""
from __future__ import annotations

import hashlib
import itertools
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from ..complexes.core import PartiteComplex, WeightFn, typed_isomorphic, vertex_link_profile
from ..cones.search import Disconnected

log = logging.getLogger(__name__)

DENSE_LIMIT = 4000


@dataclass
class SpectralReport:
    lambda2: float
    method: str
    residual: float
    n_vertices: int
    tolerance: float | None = None
    sweeps: int | None = None
    spectrum: list | None = None

    def lines(self):
        yield f"lambda2={self.lambda2:.12g}"
        yield f"method={self.method}"
        yield f"residual={self.residual:.3e}"
        if self.tolerance is not None:
            yield f"tolerance={self.tolerance:g} sweeps={self.sweeps}"


def _edge_weight_matrix(X: PartiteComplex):
    """Symmetric sparse matrix of edge facet counts (proportional to w)."""
    W = WeightFn(X)
    rows, cnt = W.counts(1)
    n = X.n_vertices
    A = sparse.coo_matrix((np.concatenate([cnt, cnt]).astype(float),
                           (np.concatenate([rows[:, 0], rows[:, 1]]),
                            np.concatenate([rows[:, 1], rows[:, 0]]))), shape=(n, n)).tocsr()
    return A


def _symmetrized(X: PartiteComplex):
    """D^-1/2 A D^-1/2, similar to M = D^-1 A, and the top eigenvector D^1/2 1."""
    if X.dim < 1:
        raise Disconnected("a walk needs edges")
    if not X.is_connected():
        raise Disconnected(f"{X.name or 'complex'} is not connected")
    A = _edge_weight_matrix(X)
    d = np.asarray(A.sum(axis=1)).ravel()
    s = 1.0 / np.sqrt(d)
    S = sparse.diags(s) @ A @ sparse.diags(s)
    top = np.sqrt(d)
    return S.tocsr(), top / np.linalg.norm(top)


def _seed_block(X: PartiteComplex, n: int, width: int) -> np.ndarray:
    h = int(hashlib.sha256(X.canonical_hash().encode()).hexdigest()[:16], 16)
    return np.random.default_rng(h).standard_normal((n, width))


def random_walk_lambda2(X: PartiteComplex, method: str = "auto", tol: float = 1e-8,
                        max_sweeps: int = 10 ** 4, keep_spectrum: bool = False,
                        block: int = 8) -> SpectralReport:
    """Second-largest eigenvalue of the weighted walk M on the 1-skeleton."""
    S, top = _symmetrized(X)
    n = X.n_vertices
    if n == 1:
        return SpectralReport(float("-inf"), "trivial", 0.0, 1)
    if method == "auto":
        method = "dense" if n < DENSE_LIMIT else "power"
    if method == "dense":
        vals, vecs = np.linalg.eigh(S.toarray())
        lam = float(vals[-2])
        x = vecs[:, -2]
        res = float(np.linalg.norm(S @ x - lam * x))
        return SpectralReport(lam, "dense", res, n,
                              spectrum=[float(v) for v in vals[::-1]] if keep_spectrum else None)
    if method != "power":
        raise ValueError(f"unknown method {method!r}")
    # block power iteration on S + I (spectrum in [0, 2]) with the known top
    # vector projected out and a Rayleigh-Ritz step per sweep; the block
    # keeps clustered eigenvalues below lambda2 from stalling convergence
    width = max(1, min(block, n - 1))
    Q = _seed_block(X, n, width)
    Q -= np.outer(top, top @ Q)
    Q, _ = np.linalg.qr(Q)
    lam, res, sweeps = 0.0, np.inf, 0
    for sweeps in range(1, max_sweeps + 1):
        Y = S @ Q + Q
        Y -= np.outer(top, top @ Y)
        Q, _ = np.linalg.qr(Y)
        SQ = S @ Q
        vals, vecs = np.linalg.eigh(Q.T @ SQ)
        x = Q @ vecs[:, -1]
        new = float(vals[-1])
        res = float(np.linalg.norm(SQ @ vecs[:, -1] - new * x))
        done = abs(new - lam) < tol and res < 10 * tol ** 0.5 * 1e-2
        lam = new
        if done:
            break
    return SpectralReport(lam, "power", res, n, tolerance=tol, sweeps=sweeps)


def trickling_down(lam: float) -> dict:
    """Global one-sided bound lam/(1-lam) from vertex links (connected X)."""
    if lam >= 1:
        return {"bound": float("inf"), "vacuous": True}
    b = lam / (1 - lam)
    return {"bound": b, "vacuous": b >= 1}


def spectral_target_local(q: int, n: int) -> float:
    """1/(sqrt(q) - (n-1)) for the congruence family of rank n."""
    den = np.sqrt(q) - (n - 1)
    return float("inf") if den <= 0 else 1.0 / den


@dataclass
class LinkRow:
    face_type: tuple
    count: int
    lambda2: float
    connected: bool
    checked: str

    def passes(self, target: float) -> bool:
        return self.connected and self.lambda2 <= target + 1e-12


@dataclass
class LocalSpectralReport:
    target: float
    rows: list = field(default_factory=list)

    @property
    def worst(self) -> float:
        vals = [r.lambda2 if r.connected else float("inf") for r in self.rows]
        return max(vals) if vals else float("-inf")

    @property
    def passed(self) -> bool:
        return all(r.passes(self.target) for r in self.rows)

    def lines(self):
        for r in self.rows:
            t = "empty" if not r.face_type else ",".join(map(str, r.face_type))
            lam = f"{r.lambda2:.6f}" if r.connected else "disconnected"
            yield (f"link type=({t}) count={r.count} lambda2={lam} check={r.checked} "
                   f"{'pass' if r.passes(self.target) else 'fail'}")
        yield f"worst={self.worst:.6f} target={self.target:.6f} {'pass' if self.passed else 'fail'}"


def _link_lambda(L: PartiteComplex):
    if L.dim < 1:
        return float("inf"), False
    try:
        return random_walk_lambda2(L).lambda2, True
    except Disconnected:
        return float("inf"), False


def _link_invariants(X: PartiteComplex, faces: np.ndarray) -> np.ndarray:
    """Facet counts through each face (plus, for vertices, link sizes and
    degree extremes); equal on isomorphic links.  One row per face."""
    top = X.top_faces()
    k = faces.shape[1]
    if k == 1:
        prof = vertex_link_profile(X)[faces[:, 0]]
        _, inv = np.unique(prof, axis=0, return_inverse=True)
        return inv.ravel()
    n = X.n_vertices
    parts = [top[:, list(c)] for c in itertools.combinations(range(top.shape[1]), k)]
    arr = np.concatenate(parts)
    key = np.zeros(arr.shape[0], dtype=np.int64)
    fk = np.zeros(faces.shape[0], dtype=np.int64)
    for j in range(k):
        key = key * n + arr[:, j]
        fk = fk * n + faces[:, j]
    u, c = np.unique(key, return_counts=True)
    return c[np.searchsorted(u, fk)]


def local_spectral_report(X: PartiteComplex, target: float, per_type: bool = False,
                          exact_samples: int = 3, seed: int = 0,
                          include_global: bool = True) -> LocalSpectralReport:
    """lambda2 of lk(tau) for tau = empty and every face of dimension <= dim-2.

    With per_type, faces are grouped by their type set: facet-count invariants
    are compared on every face of a type, a few sampled links are checked
    isomorphic to the first, and lambda2 is computed once per type."""
    if not X.is_pure:
        raise ValueError("local spectral report needs a pure complex")
    rep = LocalSpectralReport(target)
    if include_global:
        lam, ok = _link_lambda(X)
        rep.rows.append(LinkRow((), 1, lam, ok, "direct"))
    rng = np.random.default_rng(seed)
    for k in range(0, X.dim - 1):
        faces = X.simplices(k)
        tsets, which = np.unique(X.vtype[faces], axis=0, return_inverse=True)
        which = which.ravel()
        for g, row in enumerate(tsets):
            t = tuple(int(x) for x in row)
            idx = np.nonzero(which == g)[0]
            if not per_type:
                worst, all_conn = float("-inf"), True
                for i in idx:
                    lam, ok = _link_lambda(X.link(tuple(int(x) for x in faces[i])))
                    all_conn &= ok
                    worst = max(worst, lam)
                rep.rows.append(LinkRow(t, len(idx), worst, all_conn, "all links"))
                continue
            inv = _link_invariants(X, faces[idx])
            if np.unique(inv).size != 1:
                raise ValueError(f"links of type {t} differ in size")
            first = X.link(tuple(int(x) for x in faces[idx[0]]))
            picks = rng.choice(len(idx), size=min(exact_samples, len(idx)), replace=False)
            for j in picks:
                L = X.link(tuple(int(x) for x in faces[idx[j]]))
                if typed_isomorphic(first, L) is None:
                    raise ValueError(f"sampled link of type {t} is not isomorphic to the first")
            lam, ok = _link_lambda(first)
            rep.rows.append(LinkRow(t, len(idx), lam, ok,
                                    f"invariants on {len(idx)}, isomorphism on {len(picks)} samples"))
    return rep

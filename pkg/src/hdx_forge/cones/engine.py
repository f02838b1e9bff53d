"""Induction engine: grow a cone along a provider's filtration.

A provider describes a filtration of a complex kappa (the host) as

* an initial star {apex} * lk(apex) (radius 1),
* seed layers whose vertices each come with a hub: the hub lies in the
  vertex's current link and is adjacent to everything else there, so the
  link is a cone over the hub,
* main layers, where the current link of each vertex splits as a join of a
  lower and an upper part (or is a single class member).

Each layer is added with the adding-vertices construction.  The engine checks
every condition it relies on and raises ProviderContractViolated naming the
failed one; it never trusts class membership claims.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

from ..complexes.core import PartiteComplex
from .certificate import ConeCertificate, ConeError, _Checker, validate_cone
from .constructors import add_vertices_in, join_zero_cone_in, star_cone_in
from .search import Disconnected, bfs_zero_cone

log = logging.getLogger(__name__)


class ProviderContractViolated(ConeError):
    def __init__(self, condition: int, detail: str = ""):
        super().__init__(f"filtration condition {condition} fails: {detail}")
        self.condition = condition
        self.detail = detail


@dataclass
class Layer:
    vertices: list
    hubs: dict | None = None
    label: str = ""


@dataclass
class Filtration:
    host: PartiteComplex
    apex: int
    star: list
    seed_layers: list = field(default_factory=list)
    layers: list = field(default_factory=list)
    seed_bound: int | None = None
    budget: int | None = None
    split: Callable | None = None
    side_cone: Callable | None = None
    notes: dict = field(default_factory=dict)
    name: str = ""


@dataclass
class LayerTrace:
    label: str
    size: int
    link_radius: int
    rad0: int
    bound: int


@dataclass
class EngineReport:
    name: str
    kind: int
    rad0: int
    rad1: int | None
    seed_rad0: int
    seed_rad1: int | None
    seed_bound: int | None
    budget: int | None
    trace: list
    notes: dict

    @property
    def radius(self) -> int:
        return max(self.rad0, self.rad1 or 0)

    @property
    def within_budget(self) -> bool | None:
        return None if self.budget is None else self.radius <= self.budget

    @property
    def seed_within_bound(self) -> bool | None:
        if self.seed_bound is None:
            return None
        return max(self.seed_rad0, self.seed_rad1 or 0) <= self.seed_bound

    def lines(self):
        yield f"provider={self.name} kind={self.kind} rad0={self.rad0} rad1={self.rad1}"
        yield f"seed rad0={self.seed_rad0} rad1={self.seed_rad1} bound={self.seed_bound}"
        yield f"budget={self.budget} within={self.within_budget}"
        for t in self.trace:
            yield f"  layer {t.label}: {t.size} vertices, link radius {t.link_radius}, rad0 {t.rad0}, running bound {t.bound}"


def default_split(X: PartiteComplex):
    vt = X.vtype

    def split(w, L):
        lo = sorted(u for u in L if vt[u] < vt[w])
        hi = sorted(u for u in L if vt[u] > vt[w])
        return lo, hi
    return split


def _rad1_of(X, C, keys) -> int:
    chk = _Checker(X, C)
    return max((chk.run(k) for k in keys), default=0)


def induction_engine(F: Filtration, validate: bool = True):
    """Returns (certificate, EngineReport)."""
    X = F.host
    adj = X.adjacency_sets()
    kind = 1 if X.dim >= 2 else 0
    split = F.split or default_split(X)

    star = list(F.star)
    if F.apex in star or len(set(star)) != len(star):
        raise ProviderContractViolated(1, "star lists the apex or repeats a vertex")
    for u in star:
        if u not in adj[F.apex]:
            raise ProviderContractViolated(1, f"star vertex {u} is not adjacent to the apex")
    C = star_cone_in(X, F.apex, star, kind)
    C.name = F.name
    present = {F.apex, *star}

    def check_layer(layer, cond_links):
        W = list(layer.vertices)
        if len(set(W)) != len(W):
            raise ProviderContractViolated(2, f"layer {layer.label} repeats a vertex")
        ws = set(W)
        for w in W:
            if not (0 <= w < X.n_vertices):
                raise ProviderContractViolated(2, f"vertex {w} is not in the complex")
            if w in present:
                raise ProviderContractViolated(2, f"vertex {w} added twice")
            if adj[w] & ws:
                raise ProviderContractViolated(2, f"layer {layer.label} contains adjacent vertices")
        for w in W:
            if not adj[w] & present:
                raise ProviderContractViolated(cond_links, f"vertex {w} has empty link in the previous stage")
        return W

    def add(layer, seed: bool, bound: int):
        cond = 1 if seed else 3
        W = check_layer(layer, cond)
        cones = {}
        for w in W:
            L = adj[w] & present
            if kind == 0:
                a = min(L, key=lambda u: (len(C.paths[u]), u))
                cones[w] = ConeCertificate(a, {a: (a,)}, 0)
                continue
            if layer.hubs is not None:
                s = layer.hubs.get(w)
                if s is None or s not in L:
                    raise ProviderContractViolated(cond, f"hub of {w} is not in its link")
                if not (L - {s}) <= adj[s]:
                    raise ProviderContractViolated(cond, f"link of {w} is not a cone over its hub {s}")
                cones[w] = ConeCertificate(s, {s: (s,), **{u: (s, u) for u in L if u != s}}, 0)
                continue
            lo, hi = split(w, L)
            if set(lo) | set(hi) != L:
                raise ProviderContractViolated(3, f"split of the link of {w} does not cover it")
            if lo and hi:
                for u in lo:
                    if not set(hi) <= adj[u]:
                        raise ProviderContractViolated(3, f"link of {w} is not the join of its two sides")
                cones[w] = join_zero_cone_in(hi, lo)
            else:
                side = lo or hi
                try:
                    cones[w] = (F.side_cone or (lambda s: bfs_zero_cone(adj, s)))(side)
                except Disconnected as exc:
                    raise ProviderContractViolated(3, f"link of {w} is disconnected") from exc
        link_r = max((c.rad0() for c in cones.values()), default=0)
        add_vertices_in(X, C, present, W, cones, kind=kind)
        S = max(2, link_r) if not seed else max(1, link_r)
        new_bound = S * (bound + 1) if kind == 1 else bound + 1
        trace.append(LayerTrace(layer.label, len(W), link_r, C.rad0(), new_bound))
        return new_bound

    trace: list = []
    bound = 1
    for layer in F.seed_layers:
        bound = add(layer, True, bound)
    seed_rad0 = C.rad0()
    seed_rad1 = _rad1_of(X, C, list(C.scripts)) if kind == 1 else None
    for layer in F.layers:
        bound = add(layer, False, bound)
    missing = set(range(X.n_vertices)) - present
    if missing:
        raise ProviderContractViolated(2, f"filtration misses {len(missing)} vertices")
    if validate:
        rep = validate_cone(X, C)
        rad0, rad1 = rep.rad0, rep.rad1
    else:
        rad0 = C.rad0()
        rad1 = _rad1_of(X, C, list(C.scripts)) if kind == 1 else None
    er = EngineReport(F.name, kind, rad0, rad1, seed_rad0, seed_rad1, F.seed_bound, F.budget,
                      trace, dict(F.notes))
    if er.within_budget is False:
        log.warning("measured radius %s exceeds budget %s", er.radius, er.budget)
    return C, er

"""Cone certificates: apex, paths, contraction scripts, and their checker.

A loop is a tuple of vertices starting and ending at the apex.  A contraction
script is a list of steps, each a tuple:

    ("BT", p)             (x;y;x) -> (x) at loop position p
    ("BT+", p, y)         (x) -> (x;y;x) at position p
    ("TR", p, a, b, c)    (a;b;c) -> (a;c), {a,b,c} a triangle
    ("TR+", p, a, b, c)   (a;c) -> (a;b;c)
    ("REF", p, key, rev)  the sub-loop starting at p is the start loop of the
                          script `key` (mirrored when rev); it is contracted
                          by that script and collapses to the apex.

TR and TR+ both count towards |T|; BT steps are free.  Scripts are keyed by an
ordered edge (u, v), stored for one orientation only (the other orientation
is the mirror image), or by an auxiliary key with an explicit start loop.
"""
from __future__ import annotations

import hashlib
import io
from dataclasses import dataclass, field

from ..complexes.core import PartiteComplex


class ConeError(ValueError):
    pass


class BrokenPath(ConeError):
    def __init__(self, vertex, reason):
        super().__init__(f"path to vertex {vertex}: {reason}")
        self.vertex = vertex


class IllegalStep(ConeError):
    def __init__(self, key, index, reason):
        super().__init__(f"script {key}, step {index}: {reason}")
        self.key = key
        self.index = index


class NonTrivialTerminal(ConeError):
    def __init__(self, key, loop):
        super().__init__(f"script {key} ends at {tuple(loop)} instead of the trivial loop")
        self.key = key


class MissingEdgeScript(ConeError):
    def __init__(self, edge):
        super().__init__(f"no contraction script for edge {edge}")
        self.edge = edge


@dataclass
class Script:
    steps: list
    start: tuple | None = None  # only for auxiliary scripts


@dataclass
class ConeCertificate:
    apex: int
    paths: dict
    kind: int = 1
    scripts: dict = field(default_factory=dict)
    name: str = ""

    # ------------------------------------------------------------------ access
    def path(self, u) -> tuple:
        return self.paths[u]

    def rad0(self) -> int:
        return max((len(p) - 1 for p in self.paths.values()), default=0)

    def edge_key(self, u, v):
        """(key, reversed) of the stored script for ordered edge (u, v)."""
        if (u, v) in self.scripts:
            return (u, v), False
        if (v, u) in self.scripts:
            return (v, u), True
        return None, False

    def edge_start(self, u, v) -> tuple:
        return tuple(self.paths[u]) + tuple(reversed(self.paths[v]))

    def start_of(self, key, rev=False) -> tuple:
        s = self.scripts[key]
        if s.start is not None:
            loop = tuple(s.start)
        else:
            loop = self.edge_start(*key)
        return tuple(reversed(loop)) if rev else loop

    def set_script(self, u, v, steps):
        self.scripts[(u, v)] = Script(list(steps))

    def add_aux(self, key, start, steps):
        self.scripts[key] = Script(list(steps), tuple(start))

    def copy(self) -> "ConeCertificate":
        return ConeCertificate(self.apex, dict(self.paths), self.kind, dict(self.scripts), self.name)


# --------------------------------------------------------------------------
# step semantics
# --------------------------------------------------------------------------

def mirror_step(step, length: int, sub_len: int = 0):
    """The same step seen on the reversed loop (loop has `length` vertices)."""
    op = step[0]
    p = step[1]
    if op == "BT":
        return ("BT", length - 3 - p)
    if op == "BT+":
        return ("BT+", length - 1 - p, step[2])
    if op == "TR":
        return ("TR", length - 3 - p, step[4], step[3], step[2])
    if op == "TR+":
        return ("TR+", length - 2 - p, step[4], step[3], step[2])
    if op == "REF":
        return ("REF", length - p - sub_len, step[2], not step[3])
    raise ValueError(op)


def length_delta(step, sub_len=0) -> int:
    op = step[0]
    return {"BT": -2, "BT+": 2, "TR": -1, "TR+": 1}.get(op, 1 - sub_len)


# --------------------------------------------------------------------------
# validation
# --------------------------------------------------------------------------

@dataclass
class ConeReport:
    valid: bool
    kind: int
    rad0: int
    rad1: int | None
    n_vertices: int
    n_edges: int
    nac: bool
    apex: int
    complex_hash: str = ""

    def lines(self):
        yield f"kind={self.kind} apex={self.apex} rad0={self.rad0} rad1={self.rad1} nac={self.nac}"


class _Checker:
    def __init__(self, X: PartiteComplex, C: ConeCertificate):
        self.X = X
        self.C = C
        self.edges = X.simplex_set(1)
        self.tris = X.simplex_set(2) if X.dim >= 2 else set()
        self.tr: dict = {}
        self.active: set = set()

    def edge(self, a, b) -> bool:
        return (a, b) in self.edges if a < b else (b, a) in self.edges

    def tri(self, a, b, c) -> bool:
        return tuple(sorted((a, b, c))) in self.tris

    def run(self, key) -> int:
        """Replay script `key` from its start loop; return its TR count."""
        if key in self.tr:
            return self.tr[key]
        if key in self.active:
            raise IllegalStep(key, 0, "cyclic script reference")
        C = self.C
        if key not in C.scripts:
            raise IllegalStep(key, 0, "reference to unknown script")
        self.active.add(key)
        loop = list(C.start_of(key))
        if loop[0] != C.apex or loop[-1] != C.apex:
            raise IllegalStep(key, 0, "start loop is not based at the apex")
        for i in range(len(loop) - 1):
            if not self.edge(loop[i], loop[i + 1]):
                raise IllegalStep(key, 0, f"start loop uses non-edge ({loop[i]},{loop[i + 1]})")
        count = 0
        for idx, st in enumerate(C.scripts[key].steps):
            op = st[0]
            p = st[1]
            n = len(loop)
            if op == "BT":
                if not (0 <= p and p + 2 < n and loop[p] == loop[p + 2]):
                    raise IllegalStep(key, idx, f"BT at {p}: no backtrack there")
                del loop[p + 1:p + 3]
            elif op == "BT+":
                y = st[2]
                if not (0 <= p < n) or not self.edge(loop[p], y):
                    raise IllegalStep(key, idx, f"BT+ at {p}: ({loop[p] if 0 <= p < n else '?'},{y}) is not an edge")
                loop[p + 1:p + 1] = [y, loop[p]]
            elif op == "TR":
                a, b, c = st[2], st[3], st[4]
                if not (0 <= p and p + 2 < n and loop[p] == a and loop[p + 1] == b and loop[p + 2] == c):
                    raise IllegalStep(key, idx, f"TR at {p}: loop does not read ({a};{b};{c}) there")
                if not self.tri(a, b, c):
                    raise IllegalStep(key, idx, f"TR at {p}: ({a},{b},{c}) is not a triangle")
                del loop[p + 1]
                count += 1
            elif op == "TR+":
                a, b, c = st[2], st[3], st[4]
                if not (0 <= p and p + 1 < n and loop[p] == a and loop[p + 1] == c):
                    raise IllegalStep(key, idx, f"TR+ at {p}: loop does not read ({a};{c}) there")
                if not self.tri(a, b, c):
                    raise IllegalStep(key, idx, f"TR+ at {p}: ({a},{b},{c}) is not a triangle")
                loop.insert(p + 1, b)
                count += 1
            elif op == "REF":
                sub, rev = st[2], st[3]
                if sub not in C.scripts:
                    raise IllegalStep(key, idx, f"reference to unknown script {sub}")
                s0 = C.start_of(sub, rev)
                if tuple(loop[p:p + len(s0)]) != s0:
                    raise IllegalStep(key, idx, f"REF at {p}: sub-loop does not match start of {sub}")
                count += self.run(sub)
                loop[p:p + len(s0)] = [C.apex]
            else:
                raise IllegalStep(key, idx, f"unknown opcode {op}")
        if loop != [C.apex]:
            raise NonTrivialTerminal(key, loop)
        self.active.discard(key)
        self.tr[key] = count
        return count


def validate_cone(X: PartiteComplex, C: ConeCertificate, require_scripts: bool | None = None) -> ConeReport:
    """Check every path edge by edge and replay every contraction script.

    Raises on the first defect; returns the radii actually achieved."""
    chk = _Checker(X, C)
    n = X.n_vertices
    if not (0 <= C.apex < n):
        raise BrokenPath(C.apex, "apex is not a vertex")
    for u in range(n):
        P = C.paths.get(u)
        if P is None:
            raise BrokenPath(u, "missing")
        if P[0] != C.apex or P[-1] != u:
            raise BrokenPath(u, f"runs from {P[0]} to {P[-1]}")
        for i in range(len(P) - 1):
            if not chk.edge(P[i], P[i + 1]):
                raise BrokenPath(u, f"({P[i]},{P[i + 1]}) is not an edge")
    if tuple(C.paths[C.apex]) != (C.apex,):
        raise BrokenPath(C.apex, "apex path is not trivial")
    rad0 = C.rad0()
    rad1 = None
    need = C.kind == 1 if require_scripts is None else require_scripts
    if need:
        rad1 = 0
        for e in sorted(chk.edges):
            key, _ = C.edge_key(*e)
            if key is None:
                raise MissingEdgeScript(e)
            rad1 = max(rad1, chk.run(key))
        for key in C.scripts:
            chk.run(key)
    nac = X.dim <= 0 or (X.dim == 1 and C.kind >= 0) or (X.dim >= 2 and C.kind == 1)
    return ConeReport(True, C.kind, rad0, rad1, n, len(chk.edges), nac, C.apex, X.canonical_hash())


def script_tr_counts(X: PartiteComplex, C: ConeCertificate) -> dict:
    chk = _Checker(X, C)
    return {k: chk.run(k) for k in C.scripts}


# --------------------------------------------------------------------------
# file format
# --------------------------------------------------------------------------

CONE_FORMAT_VERSION = 1


def _key_str(key) -> str:
    if isinstance(key, tuple) and len(key) == 2 and all(isinstance(x, int) for x in key):
        return f"E:{key[0]},{key[1]}"
    return "A:" + "|".join(str(x) for x in key)


def _parse_key(s: str):
    kind, body = s.split(":", 1)
    if kind == "E":
        a, b = body.split(",")
        return (int(a), int(b))
    parts = []
    for tok in body.split("|"):
        try:
            parts.append(int(tok))
        except ValueError:
            parts.append(tok)
    return tuple(parts)


def export_cone(C: ConeCertificate, fh, complex_hash: str = "") -> None:
    """Line format: header, one path per vertex, one script per stored key.
    The opposite orientation of an edge script is its mirror and is not
    written."""
    fh.write(f"hdx-cone {CONE_FORMAT_VERSION}\n")
    fh.write(f"complex {complex_hash or '-'}\n")
    fh.write(f"apex {C.apex}\nkind {C.kind}\n")
    fh.write(f"paths {len(C.paths)}\n")
    for u in sorted(C.paths):
        fh.write(f"{u}: " + " ".join(str(x) for x in C.paths[u]) + "\n")
    fh.write(f"scripts {len(C.scripts)}\n")
    for key in sorted(C.scripts, key=_key_str):
        s = C.scripts[key]
        ops = []
        for st in s.steps:
            if st[0] == "REF":
                ops.append(f"REF {st[1]} {_key_str(st[2])} {'R' if st[3] else 'F'}")
            else:
                ops.append(" ".join(str(x) for x in st))
        start = "" if s.start is None else " start " + " ".join(str(x) for x in s.start)
        fh.write(f"S {_key_str(key)}{start} : " + " ; ".join(ops) + "\n")
    fh.write("end\n")


def export_cone_string(C: ConeCertificate, complex_hash: str = "") -> str:
    buf = io.StringIO()
    export_cone(C, buf, complex_hash)
    return buf.getvalue()


def import_cone(fh):
    """Returns (certificate, complex hash recorded in the header)."""
    lines = [ln.rstrip("\n") for ln in fh]
    it = iter(lines)
    head = next(it).split()
    if head[:1] != ["hdx-cone"] or int(head[1]) != CONE_FORMAT_VERSION:
        raise ConeError("not a cone certificate")
    chash = next(it).split()[1]
    apex = int(next(it).split()[1])
    kind = int(next(it).split()[1])
    n_paths = int(next(it).split()[1])
    paths = {}
    for _ in range(n_paths):
        u, rest = next(it).split(":", 1)
        paths[int(u)] = tuple(int(x) for x in rest.split())
    n_scripts = int(next(it).split()[1])
    C = ConeCertificate(apex, paths, kind)
    for _ in range(n_scripts):
        ln = next(it)
        head, body = ln.split(" : ", 1) if " : " in ln else (ln.rstrip(" :"), "")
        toks = head.split()
        key = _parse_key(toks[1])
        start = tuple(int(x) for x in toks[3:]) if len(toks) > 2 and toks[2] == "start" else None
        steps = []
        for op in body.split(" ; "):
            op = op.strip()
            if not op:
                continue
            t = op.split()
            if t[0] == "REF":
                steps.append(("REF", int(t[1]), _parse_key(t[2]), t[3] == "R"))
            elif t[0] == "BT":
                steps.append(("BT", int(t[1])))
            elif t[0] == "BT+":
                steps.append(("BT+", int(t[1]), int(t[2])))
            else:
                steps.append((t[0], int(t[1]), int(t[2]), int(t[3]), int(t[4])))
        C.scripts[key] = Script(steps, start)
    if next(it).strip() != "end":
        raise ConeError("missing end marker")
    return C, (None if chash == "-" else chash)


def import_cone_string(s: str):
    return import_cone(io.StringIO(s))


def certificate_hash(C: ConeCertificate) -> str:
    return hashlib.sha256(export_cone_string(C).encode()).hexdigest()[:16]

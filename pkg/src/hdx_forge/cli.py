"""hdx-forge: build complexes, certify cones, analyse expansion.

Every command writes plain key=value reports into --out.  Timing lines go to
a separate timing.txt so the other outputs are byte-identical across runs of
the same configuration.

Exit codes: 0 success, 2 config error, 3 construction error, 4 certification
failure, 5 budget exhaustion.
"""
from __future__ import annotations

import dataclasses
import logging
import os
import platform
import sys
import time
import warnings
from dataclasses import dataclass
from pathlib import Path

import click
import numpy as np

from . import __version__
from .algebra import AlgebraError
from .complexes.core import ComplexError, export_complex, import_complex
from .complexes.small import octahedron_symmetries
from .cones import (BudgetExhausted, ConeError, ProviderContractViolated, export_cone,
                    generic_cone_search, import_cone, induction_engine, provider_A, provider_C,
                    provider_D, subdivision_transfer, validate_cone)
from .expansion import (BudgetExceeded, NoSymmetryWitness, SearchSpaceTooLarge, SymmetryWitness,
                        cosystolic_bound, h0_cb_exact, h1_cb_exhaustive, h1_lower_bound_from_cone,
                        h1_triviality_pi1, local_spectral_report, parse_group, random_walk_lambda2,
                        trickling_down)
from .expansion.bounds import flag_unipotent_witness
from .groups import BudgetExceeded as ClosureBudgetExceeded
from .groups import GroupError
from .pipelines import UnknownInput, build, build_opposite, congruence_link_report

log = logging.getLogger("hdx_forge")

EXIT_OK, EXIT_CONFIG, EXIT_BUILD, EXIT_CERT, EXIT_BUDGET = 0, 2, 3, 4, 5

TIERS = {"tiny": 10 ** 4, "standard": 10 ** 6, "large": 5 * 10 ** 7}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    """All knobs of a run.  Defaults: tier standard, search budget 10^6,
    memory advisory 8192 MB, output directory ./hdx-out."""
    command: str = ""
    input: str = ""
    type_label: str = ""
    opposite: str = ""
    model: str = "opp"
    p: int = 0
    m: int = 1
    modulus: str = ""
    f: str = ""
    group: str = "Z2"
    provider: str = "search"
    kind: int = 1
    cone: str = ""
    lambda_target: float | None = None
    beta: float | None = None
    exhaustive: bool = False
    h1_pi1: bool = False
    tier: str = "standard"
    budget_elements: int | None = None
    budget_memory_mb: int = 8192
    budget_search: int = 10 ** 6
    out: str = "hdx-out"

    def __post_init__(self):
        if self.tier not in TIERS:
            raise ConfigError(f"unknown tier {self.tier!r}")
        if self.budget_elements is None:
            self.budget_elements = TIERS[self.tier]

    @property
    def rank(self) -> int:
        lab = self.type_label or self.opposite
        return int(lab[1:]) if lab[1:].isdigit() else 0

    def to_text(self) -> str:
        lines = []
        for f_ in dataclasses.fields(self):
            v = getattr(self, f_.name)
            lines.append(f"{f_.name}={'' if v is None else v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, **overrides) -> "RunConfig":
        types = {f_.name: f_.type for f_ in dataclasses.fields(cls)}
        kw = {}
        for ln in text.splitlines():
            ln = ln.split("#", 1)[0].strip()
            if not ln:
                continue
            if "=" not in ln:
                raise ConfigError(f"config line without '=': {ln!r}")
            k, v = (s.strip() for s in ln.split("=", 1))
            k = k.replace("-", "_")
            if k not in types:
                raise ConfigError(f"unknown config key {k!r}")
            kw[k] = _coerce(types[k], v, k)
        kw.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kw)


def _coerce(typ: str, v: str, key: str):
    try:
        if typ == "bool":
            if v.lower() not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(v)
            return v.lower() in ("true", "1", "yes")
        if typ == "int":
            return int(v)
        if typ == "int | None":
            return int(v) if v else None
        if typ == "float | None":
            return float(v) if v else None
        return v
    except ValueError as exc:
        raise ConfigError(f"bad value {v!r} for {key}") from exc


# --------------------------------------------------------------------------
# shared helpers
# --------------------------------------------------------------------------

class Report:
    def __init__(self):
        self.lines: list[str] = []
        self.timing: list[str] = []

    def add(self, key: str, value) -> None:
        self.lines.append(f"{key}={value}")
        click.echo(f"{key}={value}")

    def time(self, key: str, seconds: float) -> None:
        self.timing.append(f"{key}={seconds:.2f}")

    def write(self, out: Path, name: str) -> None:
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text("\n".join(self.lines) + "\n")
        if self.timing:
            (out / "timing.txt").write_text("\n".join(self.timing) + "\n")


def _recipe_from(cfg: RunConfig) -> str:
    if cfg.input:
        return cfg.input
    if cfg.type_label and cfg.f:
        if not cfg.type_label.startswith("A") or cfg.p == 0:
            raise ConfigError("congruence builds need --type A<n> and --q <prime>")
        return f"cong-{cfg.type_label}-F{cfg.p}-{cfg.f}"
    if cfg.opposite:
        if cfg.p == 0:
            raise ConfigError("--opposite needs --q")
        suffix = f"^{cfg.m}" if cfg.m > 1 else ""
        return f"{cfg.model}-{cfg.opposite}-F{cfg.p}{suffix}"
    raise ConfigError("give --input, --opposite, or --type with --f")


def _load_input(cfg: RunConfig):
    """Build (or rebuild) the input.  A directory from `build` is rebuilt from
    its recipe and refused if the hash differs from its export."""
    src = Path(cfg.input) if cfg.input else None
    if src is not None and src.is_dir():
        man = _read_kv(src / "manifest.txt")
        b = build(man["recipe"], budget=cfg.budget_elements)
        with open(src / "complex.txt") as fh:
            Y = import_complex(fh)
        if Y.canonical_hash() != b.X.canonical_hash():
            raise CertificationMismatch("exported complex does not match its recipe")
        return b
    return build(_recipe_from(cfg), budget=cfg.budget_elements)


class CertificationMismatch(ConeError):
    pass


def _read_kv(path: Path) -> dict:
    out = {}
    for ln in Path(path).read_text().splitlines():
        if "=" in ln:
            k, v = ln.split("=", 1)
            out[k] = v
    return out


def _witness(b) -> SymmetryWitness | None:
    if b.witness_kind:
        return SymmetryWitness(b.witness_kind)
    if b.recipe in ("K222", "octahedron"):
        return SymmetryWitness("automorphisms", tuple(octahedron_symmetries()), "octahedral")
    if b.subspaces is not None and b.form is None:
        try:
            return flag_unipotent_witness(b.subspaces)
        except NoSymmetryWitness:
            return None
    if b.subspaces is not None:
        return SymmetryWitness("assumed", note="flag model without an attached group")
    return None


def _manifest(cfg: RunConfig, b, rep: Report) -> None:
    rep.add("version", __version__)
    rep.add("python", platform.python_version())
    rep.add("numpy", np.__version__)
    rep.add("recipe", b.recipe)
    rep.add("complex_hash", b.X.canonical_hash())
    rep.add("tier", cfg.tier)
    rep.add("budget_elements", cfg.budget_elements)
    rep.add("budget_search", cfg.budget_search)
    rep.add("budget_memory_mb", cfg.budget_memory_mb)
    rep.add("seed", "derived from complex_hash")


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_build(cfg: RunConfig) -> int:
    out = Path(cfg.out)
    rep = Report()
    t = time.time()
    b = _load_input(cfg)
    rep.time("build_seconds", time.time() - t)
    X = b.X
    _manifest(cfg, b, rep)
    rep.add("n_vertices", X.n_vertices)
    rep.add("dimension", X.dim)
    rep.add("f_vector", " ".join(map(str, X.f_vector())))
    counts = np.bincount(X.vtype, minlength=X.n_types)
    rep.add("per_type_counts", " ".join(map(str, counts)))
    rep.add("pure", X.is_pure)
    rep.add("connected", X.is_connected())
    for k, v in sorted(b.info.items()):
        if k == "closure_seconds":
            rep.time(k, v)
            continue
        if k == "injectivity":
            for row in v:
                rep.add(f"injective.H{row['index']}",
                        f"{row['injective']} preimage={row['preimage_order']} image={row['image_order']}")
            continue
        rep.add(k, v if not isinstance(v, list) else " ".join(map(str, v)))
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "complex.txt", "w") as fh:
        export_complex(X, fh)
    rep.write(out, "manifest.txt")
    (out / "config.txt").write_text(cfg.to_text())
    return EXIT_OK


def _make_cone(cfg: RunConfig, b):
    """Returns (certificate, report lines as (key, value))."""
    prov = cfg.provider
    lines = []
    if prov == "search":
        C = generic_cone_search(b.X, kind=cfg.kind, step_cap=cfg.budget_search)
        return C, lines
    if b.subspaces is None and prov != "transfer":
        raise ConfigError(f"provider {prov} needs a subspace model input")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if prov in ("A", "C", "D"):
            F = {"A": provider_A, "C": provider_C, "D": provider_D}[prov](b.subspaces)
            C, er = induction_engine(F)
            lines += [("engine", ln) for ln in er.lines()]
            lines.append(("budget_radius", er.budget))
            lines.append(("within_budget", er.within_budget))
            return C, lines
        if prov == "transfer":
            if b.form is None or b.form.kind != "hyperbolic":
                raise ConfigError("transfer needs an oriflamme input such as opp-D3-F3")
            weak = build_opposite("weak", "D", b.form.n, b.form.K.p, b.form.K.m)
            C0, er = induction_engine(provider_D(weak.subspaces))
            C, tr = subdivision_transfer(weak.subspaces, C0, b.subspaces)
            lines += [("engine", ln) for ln in er.lines()]
            lines += [("transfer_input_radii", f"{tr.rad0_in} {tr.rad1_in}"),
                      ("transfer_bound_c", tr.c), ("within_bounds", tr.within_bounds),
                      ("case_counts", " ".join(f"{k}:{v}" for k, v in sorted(tr.case_counts.items())))]
            return C, lines
    raise ConfigError(f"unknown provider {prov!r}")


def cmd_cone(cfg: RunConfig) -> int:
    out = Path(cfg.out)
    rep = Report()
    b = _load_input(cfg)
    rep.add("recipe", b.recipe)
    rep.add("complex_hash", b.X.canonical_hash())
    rep.add("provider", cfg.provider)
    t = time.time()
    try:
        C, lines = _make_cone(cfg, b)
    except BudgetExhausted as exc:
        rep.add("status", f"failed: {exc}")
        if exc.partial is not None:
            rep.add("partial_rad0", exc.partial.rad0())
        rep.write(out, "cone_report.txt")
        raise
    for k, v in lines:
        rep.add(k, v)
    r = validate_cone(b.X, C)
    rep.time("cone_seconds", time.time() - t)
    rep.add("validated", True)
    rep.add("kind", C.kind)
    rep.add("rad0", r.rad0)
    rep.add("rad1", r.rad1)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "cone.txt", "w") as fh:
        export_cone(C, fh, b.X.canonical_hash())
    rep.add("status", "ok")
    rep.write(out, "cone_report.txt")
    return EXIT_OK


def cmd_analyze(cfg: RunConfig) -> int:
    out = Path(cfg.out)
    rep = Report()
    b = _load_input(cfg)
    X = b.X
    G = parse_group(cfg.group)
    rep.add("recipe", b.recipe)
    rep.add("complex_hash", X.canonical_hash())
    rep.add("group", G.name)
    skipped = []
    large = X.n_vertices > TIERS[cfg.tier] or X.n_vertices > 10 ** 6

    if b.local_groups is not None:
        for k in ("group_order", "expected_order", "subgroup_orders"):
            rep.add(f"build.{k}", b.info[k])
        rep.add("build.injective", all(r["injective"] for r in b.info["injectivity"]))
        for k, v in congruence_link_report(b):
            if k == "check_seconds":
                rep.time("congruence_check_seconds", v)
            else:
                rep.add(f"congruence.{k}", v)

    t = time.time()
    if large:
        skipped.append(("lambda2", "global walk on this tier is out of scope; see local table"))
    else:
        try:
            sr = random_walk_lambda2(X)
            rep.add("lambda2", f"{sr.lambda2:.10f}")
            rep.add("lambda2.method", sr.method)
            rep.add("lambda2.residual", f"{sr.residual:.1e}")
        except ConeError as exc:
            skipped.append(("lambda2", str(exc)))
    rep.time("lambda2_seconds", time.time() - t)

    local_worst = None
    if X.dim >= 1 and X.is_pure:
        target = cfg.lambda_target if cfg.lambda_target is not None else 1.0
        lr = local_spectral_report(X, target, per_type=large, include_global=not large)
        for i, ln in enumerate(lr.lines()):
            rep.add(f"local.{i}", ln)
        vertex_rows = [r_ for r_ in lr.rows if len(r_.face_type) == 1]
        if vertex_rows and all(r_.connected for r_ in vertex_rows):
            local_worst = max(r_.lambda2 for r_ in vertex_rows)
            td = trickling_down(local_worst)
            rep.add("trickling_down_bound", f"{td['bound']:.6f}")
            rep.add("trickling_down_vacuous", td["vacuous"])
        if cfg.lambda_target is not None:
            rep.add("lambda_target", cfg.lambda_target)
            rep.add("local_spectral", "pass" if lr.passed else "fail")

    if not large:
        try:
            h0 = h0_cb_exact(X, G, budget=cfg.budget_search)
            rep.add("h0_cb", h0.value)
        except SearchSpaceTooLarge as exc:
            skipped.append(("h0_cb", f"SearchSpaceTooLarge: {exc}"))
    else:
        skipped.append(("h0_cb", "tier too large for exhaustive search"))

    beta = None
    if cfg.cone:
        with open(cfg.cone) as fh:
            C, chash = import_cone(fh)
        if chash is not None and chash != X.canonical_hash():
            raise CertificationMismatch("certificate was made for a different complex")
        try:
            bound = h1_lower_bound_from_cone(X, C, _witness(b))
            for ln in bound.lines():
                k, v = ln.split("=", 1)
                rep.add(k, v.split()[0] if k != "dimension" else v)
            if bound.certified:
                beta = bound.value
        except NoSymmetryWitness as exc:
            skipped.append(("h1_cb_lower_bound", str(exc)))
    else:
        skipped.append(("h1_cb_lower_bound", "no --cone certificate given"))

    if cfg.exhaustive:
        try:
            r = h1_cb_exhaustive(X, G, budget=cfg.budget_search)
            rep.add("h1_cb", r.value)
            rep.add("h1_cb.method", r.method)
        except SearchSpaceTooLarge as exc:
            skipped.append(("h1_cb", f"SearchSpaceTooLarge: {exc}"))
    else:
        skipped.append(("h1_cb", "exhaustive search not requested"))

    if cfg.beta is not None:
        beta = cfg.beta
    if local_worst is not None and beta is not None and 0 <= local_worst < 1:
        v = cosystolic_bound(local_worst, beta)
        rep.add("cosystolic_bound", f"{float(v):.6e}")
        rep.add("cosystolic_bound_vacuous", v <= 0)
        rep.add("cosystolic_bound_applies", X.dim >= 3)
    else:
        skipped.append(("cosystolic_bound", "needs a local lambda in [0,1) and a beta"))

    if cfg.h1_pi1:
        try:
            pr = h1_triviality_pi1(X, G, budget=cfg.budget_search * 10)
            rep.add("h1_pi1", pr.summary())
            rep.add("h1_pi1.homomorphisms", pr.n_homs)
            rep.add("h1_pi1.rank", pr.rank)
        except BudgetExceeded as exc:
            skipped.append(("h1_pi1", f"BudgetExceeded: {exc}"))
    for k, why in skipped:
        rep.add(f"skipped.{k}", why)
    rep.write(out, "analysis.txt")
    return EXIT_OK


# --------------------------------------------------------------------------
# click wiring
# --------------------------------------------------------------------------

def _run(fn, cfg: RunConfig) -> None:
    threads = os.environ.get("HDX_FORGE_THREADS")
    if threads:
        log.debug("HDX_FORGE_THREADS=%s (advisory)", threads)
    try:
        code = fn(cfg)
    except (ConfigError, UnknownInput) as exc:
        click.echo(f"config error: {exc}", err=True)
        code = EXIT_CONFIG
    except (BudgetExhausted, BudgetExceeded, ClosureBudgetExceeded, SearchSpaceTooLarge) as exc:
        click.echo(f"budget exhausted: {exc}", err=True)
        code = EXIT_BUDGET
    except (ProviderContractViolated, ConeError, NoSymmetryWitness) as exc:
        click.echo(f"certification failure: {exc}", err=True)
        code = EXIT_CERT
    except (AlgebraError, GroupError, ComplexError, ValueError) as exc:
        click.echo(f"construction error: {exc}", err=True)
        code = EXIT_BUILD
    sys.exit(code)


def _config(ctx_params: dict, command: str) -> RunConfig:
    path = ctx_params.pop("config", None)
    params = {k: v for k, v in ctx_params.items() if v is not None}
    if "q" in params:
        params["p"] = params.pop("q")
    if "type" in params:
        params["type_label"] = params.pop("type")
    params["command"] = command
    try:
        if path:
            return RunConfig.from_text(Path(path).read_text(), **params)
        return RunConfig(**params)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)


_common = [
    click.option("--config", type=click.Path(exists=True, dir_okay=False), help="key=value config file"),
    click.option("--input", help="recipe name or build directory"),
    click.option("--out", help="output directory"),
    click.option("--tier", type=click.Choice(list(TIERS)), help="budget tier"),
    click.option("--budget-search", type=int, help="exhaustive search budget"),
    click.option("--budget-elements", type=int, help="group element budget"),
]


def common(f):
    for opt in reversed(_common):
        f = opt(f)
    return f


@click.group()
@click.version_option(__version__)
@click.option("-v", "--verbose", is_flag=True)
def main(verbose):
    """Congruence complexes, cone certificates, and expansion analysis."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")


@main.command("build")
@common
@click.option("--type", help="Cartan type for congruence builds, e.g. A2")
@click.option("--opposite", help="opposite complex type, e.g. A3, C2, D3")
@click.option("--model", type=click.Choice(["opp", "weak", "group"]), help="model for --opposite")
@click.option("--q", type=int, help="field characteristic")
@click.option("--m", type=int, help="extension degree for --opposite")
@click.option("--f", help="irreducible polynomial for congruence builds")
def build_cmd(**kw):
    """Build a complex and write complex.txt and manifest.txt."""
    _run(cmd_build, _config(kw, "build"))


@main.command("cone")
@common
@click.option("--provider", type=click.Choice(["A", "C", "D", "transfer", "search"]))
@click.option("--kind", type=click.IntRange(0, 1))
def cone_cmd(**kw):
    """Construct and validate a cone certificate."""
    _run(cmd_cone, _config(kw, "cone"))


@main.command("analyze")
@common
@click.option("--group", help="coefficient group: Z2, Z/3, S3, table:<file>")
@click.option("--cone", help="certificate file from `cone`")
@click.option("--lambda-target", type=float)
@click.option("--beta", type=float, help="local h1 lower bound for the cosystolic evaluator")
@click.option("--exhaustive", is_flag=True, default=None)
@click.option("--h1-pi1", "h1_pi1", is_flag=True, default=None)
def analyze_cmd(**kw):
    """Spectral, coboundary and cohomology report."""
    _run(cmd_analyze, _config(kw, "analyze"))


if __name__ == "__main__":
    main()

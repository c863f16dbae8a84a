"""Command-line front end.

    conewalk enumerate --steps N,S,E,W --cone 3 --start 1,1 --N 12
    conewalk classify --steps N,S,E,W --cone 3 --start 1,1
    conewalk periods --steps N,S,E,W --t 1/10 [--grid omega.csv]
    conewalk verify-integral --steps N,S,E,W --t 1/10 --p 1 --q 1 --N 30
    conewalk verify-axis --steps N,S,E,W --N 12 --pmax 3
    conewalk verify-all [--only 3,4]
    conewalk catalog [--name table1 | --path file.csv] [--classify]

JSON goes to standard output (or ``--out``); exit code 0 when every check in
the invoked command passes, 1 on a failed check, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from .stepset import StepSet, StepSetError, load_catalog, parse_stepset

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    steps: str | None = None
    catalog: str | None = None
    catalog_path: str | None = None
    cone: int = 3
    L: int | None = None
    start: tuple[int, int] = (1, 1)
    N: int = 12
    t: Fraction | None = None
    p: int = 1
    q: int = 1
    pmax: int = 3
    points: int = 5
    seed: int = 0
    jobs: int = 1
    group_bound: int = 200
    decoupling_bound: int = 12
    dps: int = 30
    out: str | None = None
    grid: str | None = None
    only: list[int] = field(default_factory=list)
    classify: bool = False

    @property
    def K(self) -> int:
        return self.cone - 1 - self.L_value

    @property
    def L_value(self) -> int:
        return (self.cone - 1) // 2 if self.L is None else self.L

    def validate(self) -> None:
        if self.N < 0:
            raise UsageError(f"--N must be >= 0, got {self.N}")
        if self.cone < 1:
            raise UsageError("--cone must be >= 1")
        if not 0 <= self.L_value < self.cone:
            raise UsageError(f"--L must satisfy 0 <= L < M (L + K + 1 = M), got L={self.L_value}, M={self.cone}")
        if self.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        if self.t is not None:
            s = self.stepset()
            if not 0 < self.t < 1 / s.total_weight():
                raise UsageError(f"--t must lie in (0, 1/P(1,1)) = (0, {1 / s.total_weight()})")

    def stepset(self) -> StepSet:
        if not self.steps:
            raise UsageError("--steps is required")
        try:
            return parse_stepset(self.steps)
        except StepSetError as exc:
            raise UsageError(str(exc)) from exc

    def cone_spec(self):
        from .enumerate import ConeError, ConeSpec

        try:
            return ConeSpec.make(self.cone, self.L_value, self.start)
        except ConeError as exc:
            raise UsageError(str(exc)) from exc

    def to_json(self) -> dict:
        d = asdict(self)
        d["t"] = None if self.t is None else str(self.t)
        d["start"] = list(self.start)
        return d


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected 'a,b', got {text!r}") from exc
    return a, b


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad number {text!r}") from exc


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v]


_INT_KEYS = ("cone", "L", "N", "p", "q", "pmax", "points", "seed", "jobs", "group_bound", "decoupling_bound", "dps")
_STR_KEYS = ("steps", "catalog", "catalog_path", "out", "grid")

_CONVERT: dict[str, Callable] = {
    **{k: int for k in _INT_KEYS},
    **{k: str for k in _STR_KEYS},
    "start": _pair,
    "t": _fraction,
    "only": _int_list,
    "classify": lambda v: v.lower() in ("1", "true", "yes"),
}


def read_config_file(path: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment."""
    out: dict = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONVERT:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = _CONVERT[key](val)
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise UsageError(f"{path}:{lineno}: {exc}") from exc
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="conewalk", description="Walks with small steps in M-quadrant cones.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="key = value file; flags win on conflict")
        p.add_argument("--out", help="write JSON here instead of standard output")
        p.add_argument("--seed", type=int)
        p.add_argument("--jobs", type=int)

    def model(p: argparse.ArgumentParser) -> None:
        p.add_argument("--steps", help="step list, e.g. N,S,E,W or E:2,W,N,S")

    def cone(p: argparse.ArgumentParser) -> None:
        p.add_argument("--cone", type=int, help="number of quadrants M")
        p.add_argument("--L", type=int, help="quadrants clockwise of the start quadrant")
        p.add_argument("--start", type=_pair, help="start point p,q")

    p = sub.add_parser("enumerate", help="count walks and check the kernel equations exactly")
    common(p), model(p), cone(p)
    p.add_argument("--N", type=int)

    p = sub.add_parser("classify", help="nature of the generating function")
    common(p), model(p), cone(p)
    p.add_argument("--group-bound", dest="group_bound", type=int)
    p.add_argument("--decoupling-bound", dest="decoupling_bound", type=int)

    p = sub.add_parser("periods", help="branch points, periods, tau, gamma at fixed t")
    common(p), model(p)
    p.add_argument("--t", type=_fraction)
    p.add_argument("--dps", type=int)
    p.add_argument("--grid", help="also dump |X|, |Y| on a grid to this CSV")

    p = sub.add_parser("verify-integral", help="contour integrals against enumeration")
    common(p), model(p)
    p.add_argument("--t", type=_fraction)
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--points", type=int, help="sampled u per region")

    p = sub.add_parser("verify-axis", help="axis-start series and the 2:1 identity")
    common(p), model(p)
    p.add_argument("--N", type=int)
    p.add_argument("--pmax", type=int)

    p = sub.add_parser("verify-all", help="run the acceptance criteria")
    common(p)
    p.add_argument("--only", type=_int_list, help="comma list of criterion numbers")

    p = sub.add_parser("catalog", help="list a catalog, optionally classified")
    common(p)
    p.add_argument("--name", dest="catalog", help="bundled catalog: table1 or nonsingular")
    p.add_argument("--path", dest="catalog_path", help="catalog CSV file")
    p.add_argument("--classify", action="store_true", default=None)
    cone(p)
    return ap


def make_config(argv: Sequence[str]) -> RunConfig:
    ns = build_parser().parse_args(argv)
    vals = {k: v for k, v in vars(ns).items() if v is not None and k != "config"}
    base = read_config_file(ns.config) if getattr(ns, "config", None) else {}
    merged = {**base, **vals}
    cfg = RunConfig(**merged)
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# commands


def cmd_enumerate(cfg: RunConfig) -> tuple[dict, bool]:
    from .enumerate import count_cone, verify_functional_equation

    ts = count_cone(cfg.stepset(), cfg.cone_spec(), cfg.N)
    reps = verify_functional_equation(ts)
    out = ts.summary()
    out["residuals"] = {r.name: ("0" if r.ok else str(r.first_nonzero())) for r in reps}
    ok = all(r.ok for r in reps)
    out["pass"] = ok
    return out, ok


def cmd_classify(cfg: RunConfig) -> tuple[dict, bool]:
    from .classify import INCONCLUSIVE, classify

    c = classify(cfg.stepset(), cfg.cone_spec(), _classify_cfg(cfg))
    return c.to_json(), c.verdict != INCONCLUSIVE


def _classify_cfg(cfg: RunConfig):
    from .classify import ClassifyConfig

    return ClassifyConfig(group_bound=cfg.group_bound, decoupling_bound=cfg.decoupling_bound, seed=cfg.seed)


def cmd_periods(cfg: RunConfig) -> tuple[dict, bool]:
    from .kernelnum import Rational, kernel_numerics, ratio_detect

    if cfg.t is None:
        raise UsageError("--t is required")
    kn = kernel_numerics(cfg.stepset(), cfg.t, cfg.dps)
    out = kn.to_json()
    r = ratio_detect(kn.ratio)
    out["ratio_guess"] = {"rational": isinstance(r, Rational), "value": str(r.value if isinstance(r, Rational) else r.best)}
    if cfg.grid:
        from .elliptic import build_context

        ctx = build_context(kn)
        ctx.dump_grid(cfg.grid)
        out["grid"] = cfg.grid
    return out, True


def cmd_verify_integral(cfg: RunConfig) -> tuple[dict, bool]:
    from .contour import characterization_checks, verify_integral
    from .elliptic import build_context
    from .kernelnum import kernel_numerics

    if cfg.t is None:
        raise UsageError("--t is required")
    ctx = build_context(kernel_numerics(cfg.stepset(), cfg.t, cfg.dps))
    rep = verify_integral(ctx, cfg.p, cfg.q, cfg.N, n_points=cfg.points, seed=cfg.seed)
    ch = characterization_checks(ctx, cfg.p, cfg.q, cfg.N, n_points=2 * cfg.points, seed=cfg.seed, spec=rep.spec)
    out = rep.to_json()
    out["characterization"] = ch.to_json()
    out["characterization"]["pass"] = ch.ok()
    ok = rep.ok and ch.ok()
    out["pass"] = ok
    return out, ok


def cmd_verify_axis(cfg: RunConfig) -> tuple[dict, bool]:
    from .axisstart import combi_check, verify_axis

    s = cfg.stepset()
    rep = verify_axis(s, cfg.N, cfg.pmax)
    n_brute = min(8, cfg.N)
    while len(s.weights) ** n_brute > 10**7 and n_brute > 0:
        n_brute -= 1
    comb = combi_check(s, n_brute, cfg.N)
    out = {"axis": rep.to_json(), "combi": comb.to_json()}
    ok = rep.ok and comb.ok
    out["pass"] = ok
    return out, ok


def _criterion(k: int) -> dict:
    from .acceptance import run_criterion

    r = run_criterion(k)
    return {"number": r.number, "title": r.title, "pass": r.ok, "seconds": r.seconds, "line": r.line(), "detail": r.detail}


def _pmap(fn, items, jobs: int) -> list:
    if jobs <= 1:
        return [fn(i) for i in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def cmd_verify_all(cfg: RunConfig) -> tuple[dict, bool]:
    from .acceptance import CRITERIA

    ks = cfg.only or sorted(CRITERIA)
    bad = [k for k in ks if k not in CRITERIA]
    if bad:
        raise UsageError(f"unknown criteria {bad}")
    res = _pmap(_criterion, ks, cfg.jobs)
    for r in res:
        print(r["line"], file=sys.stderr)
    ok = all(r["pass"] for r in res)
    return {"criteria": res, "pass": ok}, ok


def _classify_entry(args) -> dict:
    from .classify import classify

    entry, cone, ccfg = args
    c = classify(entry.steps, cone, ccfg)
    return {"id": entry.model_id, "steps": str(entry.steps), "expected": entry.expected_nature, "verdict": c.label,
            "match": None if entry.expected_nature is None else entry.expected_nature == c.verdict}


def cmd_catalog(cfg: RunConfig) -> tuple[dict, bool]:
    if cfg.catalog_path:
        cat = load_catalog(cfg.catalog_path)
    else:
        cat = load_catalog(name=cfg.catalog or "nonsingular")
    if not cfg.classify:
        rows = [{"id": e.model_id, "steps": str(e.steps), "expected": e.expected_nature, "note": e.source_note} for e in cat]
        return {"models": rows, "count": len(rows)}, True
    cone = cfg.cone_spec()
    rows = _pmap(_classify_entry, [(e, cone, _classify_cfg(cfg)) for e in cat], cfg.jobs)
    for r in rows:
        print(f"{r['id']:>3}  {r['steps']:<24} {r['expected'] or '-':<24} {r['verdict']}", file=sys.stderr)
    mism = [r["id"] for r in rows if r["match"] is False]
    return {"models": rows, "count": len(rows), "mismatches": mism}, not mism


COMMANDS = {
    "enumerate": cmd_enumerate,
    "classify": cmd_classify,
    "periods": cmd_periods,
    "verify-integral": cmd_verify_integral,
    "verify-axis": cmd_verify_axis,
    "verify-all": cmd_verify_all,
    "catalog": cmd_catalog,
}


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg = make_config(argv)
        out, ok = COMMANDS[cfg.command](cfg)
    except SystemExit as exc:  # argparse usage errors
        return EXIT_USAGE if exc.code else EXIT_OK
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = {"command": cfg.command, "config": cfg.to_json(), **out}
    text = json.dumps(out, indent=2, default=str)
    if cfg.out:
        Path(cfg.out).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK if ok else EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

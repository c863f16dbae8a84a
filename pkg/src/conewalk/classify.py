"""Nature of Q_j(x, y; t) in x (equivalently y) for walks in an M-quadrant cone.

Decision tree
  singular step set         -> Algebraic
  M even                    -> Algebraic if the start lies on the boundary axis, else DFiniteNotAlgebraic
  M odd, finite group       -> Algebraic if the orbit sum vanishes, else DFiniteNotAlgebraic
  M odd, no finite group    -> DAlgebraicNotDFinite if x^p y^q decouples,
                               else NotDAlgebraicUpToBound(d)

Only the last verdict is conditional: the group search and the decoupling
search are bounded, and the bounds travel with the verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .enumerate import ConeSpec
from .groupalg import (
    DecouplingCertificate,
    GroupReport,
    NotFoundUpTo,
    SwellError,
    decoupling_search,
    default_t_samples,
    group_order,
    mqc_orbit_objects,
)
from .stepset import CatalogEntry, StepSet, is_nonsingular

ALGEBRAIC = "Algebraic"
DFINITE = "DFiniteNotAlgebraic"
DALGEBRAIC = "DAlgebraicNotDFinite"
NOT_DALG = "NotDAlgebraicUpToBound"
INCONCLUSIVE = "Inconclusive"

VERDICTS = (ALGEBRAIC, DFINITE, DALGEBRAIC, NOT_DALG)


@dataclass(frozen=True)
class ClassifyConfig:
    group_bound: int = 200
    decoupling_bound: int = 12
    t_samples: int = 3
    seed: int = 0
    swell_cap: int = 10_000
    cross_validate: bool = True


@dataclass
class Classification:
    verdict: str
    bound: int | None = None
    evidence: dict = field(default_factory=dict)

    @property
    def label(self) -> str:
        return f"{self.verdict}({self.bound})" if self.verdict == NOT_DALG else self.verdict

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "label": self.label, "bound": self.bound, "evidence": self.evidence}


def _group(s: StepSet, cfg: ClassifyConfig) -> GroupReport:
    return group_order(s, cfg.group_bound, seed=cfg.seed, swell_cap=cfg.swell_cap)


def _decouple(s: StepSet, p: int, q: int, cfg: ClassifyConfig) -> DecouplingCertificate | NotFoundUpTo:
    ts = default_t_samples(s, cfg.t_samples, cfg.seed)
    return decoupling_search(s, p, q, cfg.decoupling_bound, ts)


def classify(s: StepSet, cone: ConeSpec, cfg: ClassifyConfig | None = None) -> Classification:
    cfg = cfg or ClassifyConfig()
    p, q = cone.start
    ev: dict = {"M": cone.M, "L": cone.L, "K": cone.K, "p": p, "q": q, "steps": str(s), "caveats": []}
    if not is_nonsingular(s):
        ev["singular"] = True
        ev["reason"] = "singular step set: the walks reduce to a half-plane problem"
        return Classification(ALGEBRAIC, None, ev)
    ev["singular"] = False
    if cone.M == 1:
        ev["caveats"].append("for M = 1 the function may become rational in x at isolated t; not examined")

    if cone.M % 2 == 0:
        orb = mqc_orbit_objects(s, cone)
        ev["parity"] = orb.to_json()
        return Classification(ALGEBRAIC if orb.parity_zero else DFINITE, None, ev)

    try:
        rep = _group(s, cfg)
    except SwellError as exc:
        ev["group"] = {"status": "Inconclusive", "error": str(exc)}
        return Classification(INCONCLUSIVE, None, ev)
    ev["group"] = rep.to_json()

    if rep.is_finite:
        orb = mqc_orbit_objects(s, cone, rep)
        zero = bool(orb.parity_zero)
        ev["orbit_sum"] = str(orb.delegated_orbit_sum)
        ev["orbit_sum_zero"] = zero
        if cfg.cross_validate:
            dec = _decouple(s, p, q, cfg)
            ev["decoupling"] = dec.to_json()
            found = isinstance(dec, DecouplingCertificate)
            # a zero orbit sum forces a decoupling; the search may still miss it past its degree bound
            ev["cross_validation"] = "consistent" if found == zero else ("search bound too small" if zero else "MISMATCH")
        return Classification(ALGEBRAIC if zero else DFINITE, None, ev)

    dec = _decouple(s, p, q, cfg)
    ev["decoupling"] = dec.to_json()
    if isinstance(dec, DecouplingCertificate):
        if dec.t_dependent:
            ev["caveats"].append("decoupling functions depend on t; nature in t is not addressed")
        return Classification(DALGEBRAIC, None, ev)
    ev["bounds"] = {"group": cfg.group_bound, "decoupling_degree": cfg.decoupling_bound}
    return Classification(NOT_DALG, cfg.decoupling_bound, ev)


@dataclass
class CatalogRow:
    model_id: int
    steps: str
    expected: str | None
    got: Classification

    @property
    def match(self) -> bool | None:
        return None if self.expected is None else self.expected == self.got.verdict


@dataclass
class CatalogClassification:
    rows: list[CatalogRow]

    @property
    def mismatches(self) -> list[CatalogRow]:
        return [r for r in self.rows if r.match is False]

    def to_json(self) -> dict:
        return {
            "rows": [
                {"id": r.model_id, "steps": r.steps, "expected": r.expected, "verdict": r.got.label, "match": r.match}
                for r in self.rows
            ],
            "mismatches": [r.model_id for r in self.mismatches],
        }

    def table(self) -> str:
        lines = [f"{'id':>3}  {'steps':<24} {'expected':<24} {'verdict':<28} ok"]
        for r in self.rows:
            mark = "-" if r.match is None else ("yes" if r.match else "NO")
            lines.append(f"{r.model_id:>3}  {r.steps:<24} {r.expected or '-':<24} {r.got.label:<28} {mark}")
        return "\n".join(lines)


def classify_catalog(
    catalog: list[CatalogEntry], cone: ConeSpec | None = None, cfg: ClassifyConfig | None = None
) -> CatalogClassification:
    cone = cone or ConeSpec.three_quadrant((1, 1))
    rows = [CatalogRow(e.model_id, str(e.steps), e.expected_nature, classify(e.steps, cone, cfg)) for e in catalog]
    return CatalogClassification(rows)

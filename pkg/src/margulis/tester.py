"""Margulis-number testing for matrix groups and the certified proof chains.

The tester is evidence-grade: it enumerates a word ball, samples points,
and looks for non-commuting pairs that both move a point less than the
candidate number.  Absence of violations is meaningful only at the
examined depth and points, and no discreteness is verified; reports say so
explicitly.  The pipeline functions are proof-grade: they run the two
certified scalar chains behind the 0.286 and 0.292 bounds in interval
arithmetic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

from . import growth
from .certnum import Interval, Verdict, as_interval, g_func, phi_ival
from .errors import BudgetExceeded, DomainError, InvalidGroupFile
from .hyp3 import BASE_POINT, Isometry, PointH3, displacement


# ---------------------------------------------------------------------------
# group files
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupFile:
    """Named generator list with declared (unverified) properties."""

    name: str
    generators: tuple[Isometry, ...]
    claims_discrete: bool = False
    claims_torsion_free: bool = False
    det_tol: float = 1e-12
    dedup_eps: float = 1e-9
    commute_tol: float = 1e-8

    def __post_init__(self):
        if not self.generators:
            raise InvalidGroupFile("a group file needs at least one generator")

    @classmethod
    def from_json_dict(cls, data: dict) -> "GroupFile":
        try:
            name = data["name"]
            gens_raw = data["generators"]
            claims_discrete = bool(data["claims_discrete"])
            claims_torsion_free = bool(data["claims_torsion_free"])
        except (KeyError, TypeError) as exc:
            raise InvalidGroupFile(f"missing or malformed field: {exc}") from exc
        tol = data.get("tolerances", {})
        det_tol = float(tol.get("det_tol", 1e-12))
        gens = []
        for idx, g in enumerate(gens_raw):
            try:
                entries = [complex(g[k][0], g[k][1]) for k in ("a", "b", "c", "d")]
            except (KeyError, TypeError, IndexError) as exc:
                raise InvalidGroupFile(
                    f"generator {idx}: entries must be two-element [re, im] arrays"
                ) from exc
            try:
                gens.append(Isometry(*entries, det_tol=det_tol))
            except DomainError as exc:
                raise InvalidGroupFile(f"generator {idx}: {exc}") from exc
        return cls(name=str(name), generators=tuple(gens),
                   claims_discrete=claims_discrete,
                   claims_torsion_free=claims_torsion_free,
                   det_tol=det_tol,
                   dedup_eps=float(tol.get("dedup_eps", 1e-9)),
                   commute_tol=float(tol.get("commute_tol", 1e-8)))

    def to_json_dict(self) -> dict:
        def pair(w: complex) -> list[float]:
            return [w.real, w.imag]

        return {
            "name": self.name,
            "generators": [
                {"a": pair(g.a), "b": pair(g.b), "c": pair(g.c), "d": pair(g.d)}
                for g in self.generators
            ],
            "claims_discrete": self.claims_discrete,
            "claims_torsion_free": self.claims_torsion_free,
            "tolerances": {
                "det_tol": self.det_tol,
                "dedup_eps": self.dedup_eps,
                "commute_tol": self.commute_tol,
            },
        }

    @classmethod
    def load(cls, path: str) -> "GroupFile":
        with open(path) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InvalidGroupFile(f"not valid JSON: {exc}") from exc
        return cls.from_json_dict(data)

    def save(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, indent=2)
            fh.write("\n")


# ---------------------------------------------------------------------------
# commutation
# ---------------------------------------------------------------------------

def commutes(x: Isometry, y: Isometry, tol: float = 1e-8) -> tuple[bool, float]:
    """(commutes?, deviation): deviation is the projective distance of the
    commutator x y x^-1 y^-1 from the identity."""
    k = x * y * x.inverse() * y.inverse()
    deviation = k.max_entry_dist(Isometry.identity())
    return deviation <= tol, deviation


# ---------------------------------------------------------------------------
# point sampling
# ---------------------------------------------------------------------------

def sample_points(count: int, radius: float, seed: int = 0) -> list[PointH3]:
    """Low-discrepancy points in the hyperbolic ball of the given radius
    around the base point (a Euclidean ball centered at height cosh radius).
    """
    from scipy.stats import qmc

    if count < 1:
        raise DomainError("need at least one sample point", offending=count)
    center = math.cosh(radius)
    euclid_r = math.sinh(radius)
    halton = qmc.Halton(d=3, scramble=True, seed=seed)
    out = []
    for u1, u2, u3 in halton.random(count):
        z = 2.0 * u1 - 1.0
        phi_ang = 2.0 * math.pi * u2
        s = math.sqrt(max(0.0, 1.0 - z * z))
        rad = euclid_r * u3 ** (1.0 / 3.0)
        out.append(PointH3(rad * s * math.cos(phi_ang),
                           rad * s * math.sin(phi_ang),
                           center + rad * z))
    return out


# ---------------------------------------------------------------------------
# the depth-bounded tester
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    word_x: str
    word_y: str
    point: PointH3
    d_x: float
    d_y: float
    deviation: float

    def to_json_dict(self) -> dict:
        return {
            "word_x": self.word_x,
            "word_y": self.word_y,
            "point": [self.point.z_re, self.point.z_im, self.point.t],
            "d_x": self.d_x,
            "d_y": self.d_y,
            "deviation": self.deviation,
        }


@dataclass(frozen=True)
class MargulisReport:
    mu: float
    depth: int
    sample_points: int
    violations: tuple[Violation, ...]
    empirical_min: float
    flags: dict
    counts: dict

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        return {
            "mu": self.mu,
            "depth": self.depth,
            "sample_points": self.sample_points,
            "violations": [v.to_json_dict() for v in self.violations],
            "empirical_min": None if math.isinf(self.empirical_min) else self.empirical_min,
            "flags": self.flags,
            "counts": self.counts,
        }

    def to_text(self) -> str:
        lines = [
            f"candidate mu           {self.mu}",
            f"word-ball depth        {self.depth}",
            f"sampled points         {self.sample_points}",
            f"elements examined      {self.counts['n_elements']}",
            f"empirical min          "
            f"{'none found' if math.isinf(self.empirical_min) else f'{self.empirical_min:.9f}'}",
            f"violations             {len(self.violations)}",
        ]
        for v in self.violations[:20]:
            lines.append(
                f"  x = {v.word_x:<12} y = {v.word_y:<12} "
                f"d_x = {v.d_x:.6f} d_y = {v.d_y:.6f} dev = {v.deviation:.3e} "
                f"at ({v.point.z_re:.4f}, {v.point.z_im:.4f}, {v.point.t:.4f})")
        if len(self.violations) > 20:
            lines.append(f"  ... {len(self.violations) - 20} more")
        lines.append("note: no-violation results are evidence at this depth and")
        lines.append("      point sample only; discreteness is not verified.")
        return "\n".join(lines)


def margulis_test(group: GroupFile, mu: float, depth: int, *,
                  points: int = 100, radius: float = 2.0, seed: int = 0,
                  explicit_points: Optional[Sequence[PointH3]] = None,
                  budget: int = 10_000_000) -> MargulisReport:
    """Depth-bounded search for violations of a candidate Margulis number.

    A violation is a pair of enumerated nontrivial elements, both moving a
    sampled point less than mu, whose commutator deviates from the identity
    by more than the group's commute tolerance.
    """
    if not mu > 0.0:
        raise DomainError("mu must be positive", offending=mu)
    if depth < 1:
        raise DomainError("depth must be at least 1", offending=depth)

    ball = growth.ball_sizes(group.generators, depth, include_inverses=True,
                             dedup_eps=group.dedup_eps, budget=budget)
    elements = sorted(ball.nontrivial(), key=lambda e: (e.length, e.word))
    if explicit_points is not None:
        pts = list(explicit_points)
    else:
        pts = sample_points(points, radius, seed)

    work = 0
    commute_cache: dict[tuple[str, str], tuple[bool, float]] = {}

    def commute_pair(i: int, j: int) -> tuple[bool, float]:
        nonlocal work
        key = (elements[i].word, elements[j].word)
        hit = commute_cache.get(key)
        if hit is not None:
            return hit
        work += 1
        if work > budget:
            raise BudgetExceeded(f"evaluation budget {budget} exhausted")
        out = commutes(elements[i].matrix, elements[j].matrix, group.commute_tol)
        commute_cache[key] = out
        return out

    violations: list[Violation] = []
    empirical_min = math.inf
    disp_evals = 0
    for p in pts:
        disp = []
        for e in elements:
            disp_evals += 1
            work += 1
            if work > budget:
                raise BudgetExceeded(f"evaluation budget {budget} exhausted")
            disp.append(displacement(e.matrix, p))
        order = sorted(range(len(elements)), key=lambda i: disp[i])

        # smallest max-displacement over a non-commuting pair at this point
        found = False
        for jj in range(1, len(order)):
            for ii in range(jj):
                ok, _ = commute_pair(min(order[ii], order[jj]),
                                     max(order[ii], order[jj]))
                if not ok:
                    empirical_min = min(empirical_min, disp[order[jj]])
                    found = True
                    break
            if found:
                break

        candidates = [i for i in order if disp[i] < mu]
        for a in range(len(candidates)):
            for b in range(a + 1, len(candidates)):
                i, j = candidates[a], candidates[b]
                ok, deviation = commute_pair(min(i, j), max(i, j))
                if not ok:
                    violations.append(Violation(
                        elements[min(i, j)].word, elements[max(i, j)].word, p,
                        disp[min(i, j)], disp[max(i, j)], deviation))

    violations.sort(key=lambda v: (len(v.word_x), v.word_x,
                                   len(v.word_y), v.word_y))
    flags = {
        "claims_discrete": group.claims_discrete,
        "claims_torsion_free": group.claims_torsion_free,
        "depth_bounded_evidence_only": True,
        "discreteness_not_verified": True,
    }
    counts = {
        "n_elements": len(elements),
        "n_points": len(pts),
        "displacement_evaluations": disp_evals,
        "commute_tests": len(commute_cache),
    }
    return MargulisReport(mu, depth, len(pts), tuple(violations),
                          empirical_min, flags, counts)


def revalidate_report(group: GroupFile, report: MargulisReport,
                      tol: float = 1e-9) -> bool:
    """Recompute every violation from scratch; True when all numbers agree."""
    names = growth._DEFAULT_NAMES[: len(group.generators)]
    for v in report.violations:
        gx = growth.parse_ball_word(v.word_x, group.generators, names)
        gy = growth.parse_ball_word(v.word_y, group.generators, names)
        dx = displacement(gx, v.point)
        dy = displacement(gy, v.point)
        _, deviation = commutes(gx, gy, group.commute_tol)
        if abs(dx - v.d_x) > tol or abs(dy - v.d_y) > tol:
            return False
        if abs(deviation - v.deviation) > tol:
            return False
        if not (max(dx, dy) < report.mu and deviation > group.commute_tol):
            return False
    return True


# ---------------------------------------------------------------------------
# the certified proof chains
# ---------------------------------------------------------------------------

class ChainVerdict(Enum):
    CONTRADICTION = "Contradiction"
    NO_CONTRADICTION = "NoContradiction"
    VERIFIED = "Verified"
    REFUTED = "Refuted"
    UNDECIDED = "Undecided"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class PipelineTrace:
    label: str
    steps: tuple[tuple[str, Interval], ...]
    verdict: ChainVerdict

    def step(self, name: str) -> Interval:
        for n, v in self.steps:
            if n == name:
                return v
        raise KeyError(name)

    def to_text(self) -> str:
        lines = [f"{self.label}"]
        for name, ival in self.steps:
            lines.append(f"  {name:<28} {ival}")
        lines.append(f"  verdict: {self.verdict}")
        return "\n".join(lines)

    def to_json_dict(self) -> dict:
        return {
            "label": self.label,
            "steps": [{"name": n, "lo": v.lo, "hi": v.hi} for n, v in self.steps],
            "verdict": str(self.verdict),
        }


def pipeline_286(nu) -> PipelineTrace:
    """The displacement chain behind the 0.286 bound.

    From a short pair one gets a conjugate moved at most phi(nu)/2 + nu, so
    the squared-exponential displacements satisfy D1 < exp(2 nu) and
    D2 < exp(2(phi(nu)/2 + nu)); a certified g(D1) + g(D2) > 2 contradicts
    the mass bound and rules the configuration out.  At nu = 0.286 the
    verdict is Contradiction.
    """
    nu_i = as_interval(nu)
    if nu_i.lo <= 0.0:
        raise DomainError("nu must be positive", offending=nu_i.lo)
    phi_nu = phi_ival(nu_i)
    half_chain = phi_nu * Interval.point(0.5) + nu_i
    d1 = (nu_i * 2.0).exp()
    d2 = (half_chain * 2.0).exp()
    g1 = g_func(d1)
    g2 = g_func(d2)
    total = g1 + g2
    if total.lo > 2.0:
        verdict = ChainVerdict.CONTRADICTION
    elif total.hi <= 2.0:
        verdict = ChainVerdict.NO_CONTRADICTION
    else:
        verdict = ChainVerdict.UNDECIDED
    steps = (
        ("nu", nu_i),
        ("phi(nu)", phi_nu),
        ("phi(nu)/2 + nu", half_chain),
        ("D1 = exp(2 nu)", d1),
        ("D2 = exp(2(phi/2 + nu))", d2),
        ("g(D1)", g1),
        ("g(D2)", g2),
        ("g(D1) + g(D2)", total),
    )
    return PipelineTrace("displacement chain (0.286 route)", steps, verdict)


def pipeline_292(mu="0.292") -> PipelineTrace:
    """The two strict inequalities behind the 0.292 bound.

    Both commutator-displacement sums must certifiably exceed 1/2:
    2/(1 + exp phi(mu)) and 1/(1 + exp(2 mu)) + 1/(1 + exp(4 mu)), the
    latter from the power bookkeeping d_P(x^2) <= 2 mu and
    d_P(y x^2 y^-1) <= 4 mu.
    """
    mu_i = as_interval(mu)
    if mu_i.lo <= 0.0:
        raise DomainError("mu must be positive", offending=mu_i.lo)
    phi_mu = phi_ival(mu_i)
    commutator_sum = 2.0 / (phi_mu.exp() + 1.0)
    two_mu = mu_i * 2.0
    four_mu = mu_i * 4.0
    power_sum = 1.0 / (two_mu.exp() + 1.0) + 1.0 / (four_mu.exp() + 1.0)
    if commutator_sum.lo > 0.5 and power_sum.lo > 0.5:
        verdict = ChainVerdict.VERIFIED
    elif commutator_sum.hi <= 0.5 or power_sum.hi <= 0.5:
        verdict = ChainVerdict.REFUTED
    else:
        verdict = ChainVerdict.UNDECIDED
    steps = (
        ("mu", mu_i),
        ("phi(mu)", phi_mu),
        ("2/(1 + exp phi(mu))", commutator_sum),
        ("d_P(x^2) bound = 2 mu", two_mu),
        ("d_P(y x^2 y^-1) bound = 4 mu", four_mu),
        ("1/(1+e^{2mu}) + 1/(1+e^{4mu})", power_sum),
    )
    return PipelineTrace("commutator chain (0.292 route)", steps, verdict)

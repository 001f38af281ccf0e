"""Upper-half-space model of hyperbolic 3-space.

Points are (z, t) with z complex and t > 0; orientation-preserving
isometries are unit-determinant 2x2 complex matrices acting by the
quaternionic Mobius action, identified projectively (M and -M are the same
isometry).  Fast double-precision throughout; the scalar functions used by
the certified pipelines (phi, the alhambra bound) accept certnum Intervals
as well and then compute with outward rounding.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from . import certnum
from .certnum import Interval
from .errors import (
    AmbiguousClass,
    DegenerateHeight,
    DegenerateVertex,
    DomainError,
    HypothesisViolated,
)


@dataclass(frozen=True)
class PointH3:
    """A point z + t j of upper half-space, t > 0."""

    z_re: float
    z_im: float
    t: float

    def __post_init__(self):
        if not (math.isfinite(self.t) and self.t > 0.0):
            raise DomainError("height must be positive and finite", offending=self.t)
        if not (math.isfinite(self.z_re) and math.isfinite(self.z_im)):
            raise DomainError("horizontal coordinate must be finite")

    @property
    def z(self) -> complex:
        return complex(self.z_re, self.z_im)

    @classmethod
    def of(cls, z: complex, t: float) -> "PointH3":
        z = complex(z)
        return cls(z.real, z.imag, float(t))


BASE_POINT = PointH3(0.0, 0.0, 1.0)


class Isometry:
    """Unit-determinant 2x2 complex matrix up to sign.

    The stored entries are sign-normalized: the first nonzero entry in the
    order (a, b, c, d) has positive real part, with ties broken by
    imaginary part, so M and -M compare equal.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: complex, b: complex, c: complex, d: complex,
                 det_tol: float = 1e-12):
        a, b, c, d = complex(a), complex(b), complex(c), complex(d)
        det = a * d - b * c
        if abs(det - 1.0) > det_tol:
            raise DomainError(f"determinant {det} is not 1 within {det_tol}",
                              offending=det)
        for w in (a, b, c, d):
            if w != 0:
                if w.real < 0.0 or (w.real == 0.0 and w.imag < 0.0):
                    a, b, c, d = -a, -b, -c, -d
                break
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Isometry is immutable")

    # -- algebra --------------------------------------------------------

    @classmethod
    def identity(cls) -> "Isometry":
        return cls(1, 0, 0, 1)

    @classmethod
    def diagonal(cls, lam: complex) -> "Isometry":
        """diag(lam, 1/lam); loxodromic for |lam| != 1."""
        lam = complex(lam)
        if lam == 0:
            raise DomainError("diagonal entry must be nonzero")
        return cls(lam, 0, 0, 1.0 / lam)

    @classmethod
    def parabolic(cls, shear: complex = 1.0) -> "Isometry":
        return cls(1, shear, 0, 1)

    @classmethod
    def rotation_about_axis(cls, theta: float) -> "Isometry":
        """Rotation by theta about the vertical axis through the base point."""
        half = cmath.exp(0.5j * theta)
        return cls(half, 0, 0, 1.0 / half)

    @classmethod
    def rotation_about_horizontal(cls, theta: float) -> "Isometry":
        """Rotation by theta about the horizontal geodesic with endpoints +-i.

        Fixes the base point; conjugating a vertical-axis loxodromic by it
        tilts the axis while keeping it through the base point.
        """
        c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
        return cls(c, -s, s, c)

    def entries(self) -> tuple[complex, complex, complex, complex]:
        return self.a, self.b, self.c, self.d

    def __mul__(self, other: "Isometry") -> "Isometry":
        if not isinstance(other, Isometry):
            return NotImplemented
        return Isometry(self.a * other.a + self.b * other.c,
                        self.a * other.b + self.b * other.d,
                        self.c * other.a + self.d * other.c,
                        self.c * other.b + self.d * other.d,
                        det_tol=math.inf)

    def inverse(self) -> "Isometry":
        return Isometry(self.d, -self.b, -self.c, self.a, det_tol=math.inf)

    def __pow__(self, n: int) -> "Isometry":
        if n < 0:
            return self.inverse() ** (-n)
        out = Isometry.identity()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    @property
    def trace(self) -> complex:
        return self.a + self.d

    def max_entry_dist(self, other: "Isometry") -> float:
        """Projective distance: min over sign of the max entry difference."""
        direct = max(abs(x - y) for x, y in zip(self.entries(), other.entries()))
        flipped = max(abs(x + y) for x, y in zip(self.entries(), other.entries()))
        return min(direct, flipped)

    def is_identity(self, tol: float = 1e-12) -> bool:
        return self.max_entry_dist(Isometry.identity()) <= tol

    def __eq__(self, other) -> bool:
        if not isinstance(other, Isometry):
            return NotImplemented
        return self.entries() == other.entries()

    def __hash__(self) -> int:
        return hash(self.entries())

    def __repr__(self) -> str:
        return f"Isometry({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"


class IsomType(Enum):
    IDENTITY = "Identity"
    ELLIPTIC = "Elliptic"
    PARABOLIC = "Parabolic"
    LOXODROMIC = "Loxodromic"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class IsomClass:
    tag: IsomType
    translation_length: float = 0.0

    def __post_init__(self):
        if self.tag is IsomType.LOXODROMIC and not self.translation_length > 0.0:
            raise DomainError("loxodromic class needs positive translation length")


# ---------------------------------------------------------------------------
# the action, distances and displacements
# ---------------------------------------------------------------------------

def apply(g: Isometry, p: PointH3) -> PointH3:
    """Quaternionic Mobius action: (a P + b)(c P + d)^{-1} with P = z + t j."""
    z, t = p.z, p.t
    w = g.c * z + g.d
    den = abs(w) ** 2 + abs(g.c) ** 2 * t * t
    if den == 0.0 or not math.isfinite(den):
        raise DegenerateHeight(f"image denominator degenerate: {den}")
    z2 = ((g.a * z + g.b) * w.conjugate() + g.a * g.c.conjugate() * t * t) / den
    t2 = t / den
    if not (t2 > 0.0 and math.isfinite(t2)):
        raise DegenerateHeight(f"image height degenerate: {t2}")
    return PointH3(z2.real, z2.imag, t2)


def dist(p: PointH3, q: PointH3) -> float:
    """Hyperbolic distance arccosh(1 + (|z_p - z_q|^2 + (t_p - t_q)^2)/(2 t_p t_q))."""
    dz2 = (p.z_re - q.z_re) ** 2 + (p.z_im - q.z_im) ** 2
    arg = 1.0 + (dz2 + (p.t - q.t) ** 2) / (2.0 * p.t * q.t)
    return math.acosh(max(arg, 1.0))


def dist_ival(zp: Interval, wp: Interval, tp: Interval,
              zq: Interval, wq: Interval, tq: Interval) -> Interval:
    """Certified distance between points with interval coordinates."""
    dz2 = (zp - zq) ** 2 + (wp - wq) ** 2
    arg = (dz2 + (tp - tq) ** 2) / (tp * tq * 2.0) + 1.0
    arg = Interval(max(arg.lo, 1.0), max(arg.hi, 1.0))
    return arg.arccosh()


def displacement(g: Isometry, p: PointH3) -> float:
    """d_P(g) = dist(P, g P)."""
    return dist(p, apply(g, p))


def displacement_origin(g: Isometry) -> float:
    """Displacement at the base point: arccosh of half the squared Frobenius norm."""
    n2 = abs(g.a) ** 2 + abs(g.b) ** 2 + abs(g.c) ** 2 + abs(g.d) ** 2
    return math.acosh(max(n2 / 2.0, 1.0))


def displacement_origin_ival(g: Isometry) -> Interval:
    """Certified enclosure of displacement_origin for exact matrix entries."""
    total = Interval.point(0.0)
    for w in g.entries():
        total = total + Interval.point(w.real) ** 2 + Interval.point(w.imag) ** 2
    half = total * Interval.point(0.5)
    return Interval(max(half.lo, 1.0), max(half.hi, 1.0)).arccosh()


def classify(g: Isometry, tol: float = 1e-10, ambiguous_band: float = 1e-7) -> IsomClass:
    """Classify by trace, with an explicit refusal band near boundaries.

    Traces within ``tol`` of a special set are snapped onto it; traces in
    the annulus (tol, ambiguous_band] around a boundary raise
    AmbiguousClass instead of being silently misfiled.
    """
    if g.is_identity(tol):
        return IsomClass(IsomType.IDENTITY)
    tr = g.trace
    d2 = min(abs(tr - 2.0), abs(tr + 2.0))
    if d2 <= tol:
        return IsomClass(IsomType.PARABOLIC)
    if d2 <= ambiguous_band:
        raise AmbiguousClass(f"trace {tr} within {ambiguous_band} of +-2")
    if abs(tr.imag) <= tol:
        if abs(tr.real) < 2.0:
            return IsomClass(IsomType.ELLIPTIC)
        ell = 2.0 * cmath.acosh(tr / 2.0).real
        return IsomClass(IsomType.LOXODROMIC, ell)
    if abs(tr.imag) <= ambiguous_band and abs(tr.real) < 2.0:
        raise AmbiguousClass(f"trace {tr} too close to the real elliptic segment")
    ell = 2.0 * cmath.acosh(tr / 2.0).real
    return IsomClass(IsomType.LOXODROMIC, ell)


# ---------------------------------------------------------------------------
# angles and the trigonometric bounds
# ---------------------------------------------------------------------------

def cos_angle(q: PointH3, p: PointH3, r: PointH3) -> float:
    """Cosine of the vertex angle at p, by the hyperbolic law of cosines."""
    b = dist(p, q)
    c = dist(p, r)
    if b == 0.0 or c == 0.0:
        raise DegenerateVertex("angle vertex coincides with an endpoint")
    a = dist(q, r)
    val = (math.cosh(b) * math.cosh(c) - math.cosh(a)) / (math.sinh(b) * math.sinh(c))
    return min(1.0, max(-1.0, val))


def angle(q: PointH3, p: PointH3, r: PointH3) -> float:
    """Angle at p in [0, pi]."""
    return math.acos(cos_angle(q, p, r))


def cos_angle_sum(p: PointH3, qs: Sequence[PointH3]) -> float:
    """Sum over pairs of cos angle(Q_i, P, Q_j); bounded below by -n/2."""
    n = len(qs)
    if n < 2:
        raise DomainError("need at least two directions", offending=n)
    bs = [dist(p, q) for q in qs]
    if any(b == 0.0 for b in bs):
        raise DegenerateVertex("a direction point coincides with the vertex")
    ch = [math.cosh(b) for b in bs]
    sh = [math.sinh(b) for b in bs]
    total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            a = dist(qs[i], qs[j])
            val = (ch[i] * ch[j] - math.cosh(a)) / (sh[i] * sh[j])
            total += min(1.0, max(-1.0, val))
    return total


def alhambra_bound(nu, theta):
    """max(nu, arccosh(cosh^2 nu - cos theta sinh^2 nu)).

    Upper bound for the distance between two points at distance <= nu from
    a common vertex with angle theta there.  Accepts floats or Intervals.
    """
    if isinstance(nu, Interval) or isinstance(theta, Interval):
        nu = certnum.as_interval(nu)
        theta = certnum.as_interval(theta)
        if nu.lo <= 0.0:
            raise DomainError("nu must be positive", offending=nu.lo)
        arg = nu.cosh() ** 2 - theta._cos_on_0_pi() * nu.sinh() ** 2
        arg = Interval(max(arg.lo, 1.0), max(arg.hi, 1.0))
        branch = arg.arccosh()
        return Interval(max(nu.lo, branch.lo), max(nu.hi, branch.hi))
    if not nu > 0.0:
        raise DomainError("nu must be positive", offending=nu)
    if not -1e-9 <= theta <= math.pi + 1e-9:
        raise DomainError("theta must lie in [0, pi]", offending=theta)
    arg = math.cosh(nu) ** 2 - math.cos(theta) * math.sinh(nu) ** 2
    return max(nu, math.acosh(max(arg, 1.0)))


def phi(t):
    """max(3t, 2 arccosh(2 cosh^2 t - cosh(t)/2 - 1/2)), strictly increasing.

    Floats evaluate in double precision; Intervals route through the
    certified twin in certnum.
    """
    if isinstance(t, Interval):
        return certnum.phi_ival(t)
    if not t > 0.0:
        raise DomainError("phi is defined for t > 0", offending=t)
    c = math.cosh(t)
    arg = 2.0 * c * c - 0.5 * c - 0.5
    return max(3.0 * t, 2.0 * math.acosh(max(arg, 1.0)))


def _check_short_pair_hypotheses(x: Isometry, y: Isometry, p: PointH3, nu: float):
    if not nu > 0.0:
        raise DomainError("nu must be positive", offending=nu)
    dx = displacement(x, p)
    dy = displacement(y, p)
    dxx = displacement(x * x, p)
    dyy = displacement(y * y, p)
    if dx > nu:
        raise HypothesisViolated(f"d_P(x) = {dx} > nu = {nu}")
    if dxx <= nu:
        raise HypothesisViolated(f"d_P(x^2) = {dxx} <= nu = {nu}")
    if dy > nu:
        raise HypothesisViolated(f"d_P(y) = {dy} > nu = {nu}")
    if dyy <= nu:
        raise HypothesisViolated(f"d_P(y^2) = {dyy} <= nu = {nu}")
    return dx, dy


@dataclass(frozen=True)
class DalembertResult:
    cosine_sum: float
    lower_bound: float

    @property
    def holds(self) -> bool:
        return self.cosine_sum > self.lower_bound


def dalembert_cosine_sum(x: Isometry, y: Isometry, p: PointH3, nu: float) -> DalembertResult:
    """Four-cosine sum over x^{+-1} P, y^{+-1} P against -2 - 2A.

    A = (cosh^2 nu - cosh nu)/sinh^2 nu; the hypotheses
    d_P(.) <= nu < d_P(.^2) for both elements are checked.
    """
    _check_short_pair_hypotheses(x, y, p, nu)
    xs = {+1: apply(x, p), -1: apply(x.inverse(), p)}
    ys = {+1: apply(y, p), -1: apply(y.inverse(), p)}
    total = 0.0
    for u in (+1, -1):
        for v in (+1, -1):
            total += cos_angle(xs[u], p, ys[v])
    a_const = (math.cosh(nu) ** 2 - math.cosh(nu)) / math.sinh(nu) ** 2
    return DalembertResult(total, -2.0 - 2.0 * a_const)


@dataclass(frozen=True)
class MlleHusResult:
    value: float
    phi_bound: float
    slack: float
    via_inverse: bool  # True when the E' = d(xy^{-1}) + d(y^{-1}x) branch is the min


def mlle_hus_gap(x: Isometry, y: Isometry, p: PointH3, nu: float) -> MlleHusResult:
    """min(d_P(xy) + d_P(yx), d_P(xy^{-1}) + d_P(y^{-1}x)), certified <= phi(nu).

    Raises HypothesisViolated when the short-pair hypotheses fail; the
    returned slack phi(nu) - value is nonnegative up to roundoff whenever
    they hold.
    """
    _check_short_pair_hypotheses(x, y, p, nu)
    yinv = y.inverse()
    e_plain = displacement(x * y, p) + displacement(y * x, p)
    e_inv = displacement(x * yinv, p) + displacement(yinv * x, p)
    value = min(e_plain, e_inv)
    bound = phi(nu)
    return MlleHusResult(value, bound, bound - value, e_inv < e_plain)

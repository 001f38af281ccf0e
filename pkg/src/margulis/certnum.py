"""Certified interval arithmetic and the scalar constants pipeline.

The interval layer is the carrier for every verified inequality in the
package.  Rational operations (+, -, *, /, sqrt) use error-free
transformations to round outward only when the floating result is inexact,
so dyadic computations such as g(3) = (sqrt(25)-3)/(3-1) stay exact.
Transcendental endpoints are inflated by two ulps per side, which covers a
faithfully rounded libm with margin (width inflation <= 4 ulps per call).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Sequence

from .errors import ConsistencyError, DegenerateNu, DomainError, NoSignChange

_INF = math.inf
_MAX = 1.7976931348623157e308
_SPLITTER = 134217729.0  # 2**27 + 1, Veltkamp splitting constant
_SPLIT_GUARD = 1e292     # |x| above this would overflow the splitter product
_TINY_GUARD = 1e-290     # products below this may have inexact error terms


# ---------------------------------------------------------------------------
# error-free transformations and directed rounding
# ---------------------------------------------------------------------------

def _two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    c = _SPLITTER * a
    ah = c - (c - a)
    al = a - ah
    c = _SPLITTER * b
    bh = c - (c - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _prev(x: float) -> float:
    return math.nextafter(x, -_INF)


def _next(x: float) -> float:
    return math.nextafter(x, _INF)


def _down2(x: float) -> float:
    return _prev(_prev(x))


def _up2(x: float) -> float:
    return _next(_next(x))


def _add_down(a: float, b: float) -> float:
    s, e = _two_sum(a, b)
    if not math.isfinite(s):
        return _MAX if s > 0 else -_INF
    return _prev(s) if e < 0 else s


def _add_up(a: float, b: float) -> float:
    s, e = _two_sum(a, b)
    if not math.isfinite(s):
        return _INF if s > 0 else -_MAX
    return _next(s) if e > 0 else s


def _mul_down(a: float, b: float) -> float:
    p = a * b
    if not math.isfinite(p):
        return _MAX if p > 0 else -_INF
    if abs(a) > _SPLIT_GUARD or abs(b) > _SPLIT_GUARD or (p != 0.0 and abs(p) < _TINY_GUARD):
        return _prev(p)
    _, e = _two_prod(a, b)
    return _prev(p) if e < 0 else p


def _mul_up(a: float, b: float) -> float:
    p = a * b
    if not math.isfinite(p):
        return _INF if p > 0 else -_MAX
    if abs(a) > _SPLIT_GUARD or abs(b) > _SPLIT_GUARD or (p != 0.0 and abs(p) < _TINY_GUARD):
        return _next(p)
    _, e = _two_prod(a, b)
    return _next(p) if e > 0 else p


def _quotient_side(a: float, b: float, q: float) -> int:
    """Sign of a/b - q, decided exactly via sign of (a - q*b) and sign of b."""
    if abs(q) > _SPLIT_GUARD or abs(b) > _SPLIT_GUARD:
        return 2  # undecidable cheaply; caller widens both ways
    p, e = _two_prod(q, b)
    if not math.isfinite(p) or (p != 0.0 and abs(p) < _TINY_GUARD):
        return 2
    s = math.fsum((a, -p, -e))  # exact sign: doubles live on a common dyadic grid
    if s == 0.0:
        return 0
    above = (s > 0.0) == (b > 0.0)
    return 1 if above else -1


def _div_down(a: float, b: float) -> float:
    q = a / b
    if not math.isfinite(q):
        return _MAX if q > 0 else -_INF
    side = _quotient_side(a, b, q)
    if side == 2:
        return _prev(q)
    return q if side >= 0 else _prev(q)


def _div_up(a: float, b: float) -> float:
    q = a / b
    if not math.isfinite(q):
        return _INF if q > 0 else -_MAX
    side = _quotient_side(a, b, q)
    if side == 2:
        return _next(q)
    return q if side <= 0 else _next(q)


def _sqrt_down(x: float) -> float:
    r = math.sqrt(x)
    if r == 0.0 or not math.isfinite(r):
        return r
    if x < _TINY_GUARD:
        return _prev(r)
    p, e = _two_prod(r, r)
    s = math.fsum((x, -p, -e))  # sign of x - r*r
    if s == 0.0:
        return r
    return r if s > 0 else _prev(r)


def _sqrt_up(x: float) -> float:
    r = math.sqrt(x)
    if r == 0.0 or not math.isfinite(r):
        return r
    if x < _TINY_GUARD:
        return _next(r)
    p, e = _two_prod(r, r)
    s = math.fsum((x, -p, -e))
    if s == 0.0:
        return r
    return r if s < 0 else _next(r)


def _safe_pos(fn: Callable[[float], float], x: float) -> float:
    """Evaluate an eventually-overflowing positive function, mapping overflow to inf."""
    try:
        return fn(x)
    except OverflowError:
        return _INF


def _safe_odd(fn: Callable[[float], float], x: float) -> float:
    try:
        return fn(x)
    except OverflowError:
        return math.copysign(_INF, x)


# ---------------------------------------------------------------------------
# intervals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    """Closed real interval [lo, hi] with outward-rounded arithmetic.

    Every operation returns an interval containing the exact image of its
    operands.  Endpoints are ordinary doubles; lo may be -inf and hi may be
    +inf for half-unbounded results (for example log of an interval whose
    lower endpoint is 0).
    """

    lo: float
    hi: float

    def __post_init__(self):
        lo = float(self.lo)
        hi = float(self.hi)
        if math.isnan(lo) or math.isnan(hi):
            raise DomainError("interval endpoint is NaN")
        if lo > hi:
            raise DomainError(f"interval endpoints out of order: [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    # -- construction -------------------------------------------------------

    @classmethod
    def point(cls, x: float) -> "Interval":
        return cls(x, x)

    @classmethod
    def from_decimal(cls, text: str) -> "Interval":
        """Tightest interval containing the exact decimal value of ``text``."""
        exact = Fraction(text)
        x = float(exact)
        fx = Fraction(x)
        if fx == exact:
            return cls(x, x)
        if fx < exact:
            return cls(x, _next(x))
        return cls(_prev(x), x)

    @classmethod
    def hull(cls, *values: float) -> "Interval":
        return cls(min(values), max(values))

    # -- queries ------------------------------------------------------------

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return self.lo + (self.hi - self.lo) / 2.0

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersection(self, other: "Interval") -> "Interval":
        if not self.intersects(other):
            raise ConsistencyError(f"empty intersection of {self} and {other}")
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def strictly_less(self, x: float) -> bool:
        """Certified: every point of the interval is < x."""
        return self.hi < x

    def strictly_greater(self, x: float) -> bool:
        return self.lo > x

    def __repr__(self) -> str:
        return f"[{self.lo!r}, {self.hi!r}]"

    def __str__(self) -> str:
        return f"[{self.lo:.17g}, {self.hi:.17g}]"

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "Interval":
        if isinstance(x, Interval):
            return x
        if isinstance(x, (int, float)):
            return Interval(float(x), float(x))
        return NotImplemented

    def __add__(self, other) -> "Interval":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Interval(_add_down(self.lo, o.lo), _add_up(self.hi, o.hi))

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other) -> "Interval":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Interval(_add_down(self.lo, -o.hi), _add_up(self.hi, -o.lo))

    def __rsub__(self, other) -> "Interval":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Interval":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        lo = min(_mul_down(self.lo, o.lo), _mul_down(self.lo, o.hi),
                 _mul_down(self.hi, o.lo), _mul_down(self.hi, o.hi))
        hi = max(_mul_up(self.lo, o.lo), _mul_up(self.lo, o.hi),
                 _mul_up(self.hi, o.lo), _mul_up(self.hi, o.hi))
        return Interval(lo, hi)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Interval":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.lo <= 0.0 <= o.hi:
            raise DomainError("division by interval containing zero", offending=o)
        lo = min(_div_down(self.lo, o.lo), _div_down(self.lo, o.hi),
                 _div_down(self.hi, o.lo), _div_down(self.hi, o.hi))
        hi = max(_div_up(self.lo, o.lo), _div_up(self.lo, o.hi),
                 _div_up(self.hi, o.lo), _div_up(self.hi, o.hi))
        return Interval(lo, hi)

    def __rtruediv__(self, other) -> "Interval":
        return self._coerce(other) / self

    def __pow__(self, n: int) -> "Interval":
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        if n == 0:
            return Interval(1.0, 1.0)
        if n % 2 == 0:
            mag_lo, mag_hi = self._abs_bounds()
            lo = mag_lo
            hi = mag_hi
            rlo, rhi = 1.0, 1.0
            for _ in range(n):
                rlo = _mul_down(rlo, lo)
                rhi = _mul_up(rhi, hi)
            return Interval(rlo, rhi)
        rlo, rhi = self.lo, self.hi
        for _ in range(n - 1):
            nlo = min(_mul_down(rlo, self.lo), _mul_down(rhi, self.lo),
                      _mul_down(rlo, self.hi), _mul_down(rhi, self.hi))
            nhi = max(_mul_up(rlo, self.lo), _mul_up(rhi, self.lo),
                      _mul_up(rlo, self.hi), _mul_up(rhi, self.hi))
            rlo, rhi = nlo, nhi
        return Interval(rlo, rhi)

    def _abs_bounds(self) -> tuple[float, float]:
        if self.lo >= 0.0:
            return self.lo, self.hi
        if self.hi <= 0.0:
            return -self.hi, -self.lo
        return 0.0, max(-self.lo, self.hi)

    # -- elementary functions -----------------------------------------------

    def sqrt(self) -> "Interval":
        if self.lo < 0.0:
            raise DomainError("sqrt of negative endpoint", offending=self.lo)
        return Interval(_sqrt_down(self.lo), _sqrt_up(self.hi))

    def exp(self) -> "Interval":
        # x = 0 is mathematically exact, so no inflation there
        if self.lo == -_INF:
            lo = 0.0
        else:
            lo = 1.0 if self.lo == 0.0 else max(0.0, _down2(_safe_pos(math.exp, self.lo)))
        hi = 1.0 if self.hi == 0.0 else _up2(_safe_pos(math.exp, self.hi))
        return Interval(lo, hi)

    def log(self) -> "Interval":
        if self.lo < 0.0:
            raise DomainError("log of negative endpoint", offending=self.lo)
        if self.lo == 0.0:
            lo = -_INF
        else:
            lo = 0.0 if self.lo == 1.0 else _down2(math.log(self.lo))
        if self.hi <= 0.0:
            hi = -_INF
        else:
            hi = 0.0 if self.hi == 1.0 else _up2(math.log(self.hi))
        return Interval(lo, hi)

    def cosh(self) -> "Interval":
        a, b = self._abs_bounds()
        lo = 1.0 if a == 0.0 else max(1.0, _down2(_safe_pos(math.cosh, a)))
        hi = 1.0 if b == 0.0 else _up2(_safe_pos(math.cosh, b))
        return Interval(lo, hi)

    def sinh(self) -> "Interval":
        lo = 0.0 if self.lo == 0.0 else _down2(_safe_odd(math.sinh, self.lo))
        hi = 0.0 if self.hi == 0.0 else _up2(_safe_odd(math.sinh, self.hi))
        return Interval(lo, hi)

    def arccosh(self) -> "Interval":
        if self.lo < 1.0:
            raise DomainError("arccosh of endpoint below 1", offending=self.lo)
        lo = 0.0 if self.lo == 1.0 else max(0.0, _down2(math.acosh(self.lo)))
        hi = 0.0 if self.hi == 1.0 else _up2(math.acosh(self.hi))
        return Interval(lo, hi)

    def arccos(self) -> "Interval":
        if self.lo < -1.0 or self.hi > 1.0:
            bad = self.lo if self.lo < -1.0 else self.hi
            raise DomainError("arccos of endpoint outside [-1, 1]", offending=bad)
        lo = 0.0 if self.hi == 1.0 else max(0.0, _down2(math.acos(self.hi)))
        hi = 0.0 if self.lo == 1.0 else _up2(math.acos(self.lo))
        return Interval(lo, hi)

    def _cos_on_0_pi(self) -> "Interval":
        # cos is monotone decreasing on [0, pi]; used by the cap-bound cross check
        if self.lo < 0.0 or self.hi > math.pi + 1e-12:
            raise DomainError("cos restricted to [0, pi]", offending=self.lo)
        lo = max(-1.0, _down2(math.cos(self.hi)))
        hi = min(1.0, _up2(math.cos(self.lo)))
        return Interval(lo, hi)


_IVAL_FUNCTIONS: dict[str, Callable[[Interval], Interval]] = {
    "exp": Interval.exp,
    "log": Interval.log,
    "cosh": Interval.cosh,
    "sinh": Interval.sinh,
    "arccosh": Interval.arccosh,
    "arccos": Interval.arccos,
    "sqrt": Interval.sqrt,
}


def ival_fn(name: str, x: Interval) -> Interval:
    """Apply a named monotone elementary function to an interval."""
    try:
        fn = _IVAL_FUNCTIONS[name]
    except KeyError:
        raise DomainError(f"unknown interval function {name!r}") from None
    return fn(x)


def as_interval(x) -> Interval:
    """Coerce a float, decimal string or interval to an Interval.

    Strings are treated as exact decimals and enclosed outward, so
    ``as_interval("0.286")`` brackets the real number 0.286 even though it
    is not a binary float.
    """
    if isinstance(x, Interval):
        return x
    if isinstance(x, str):
        return Interval.from_decimal(x)
    return Interval.point(float(x))


# ---------------------------------------------------------------------------
# scalar operations from the displacement and decomposition bounds
# ---------------------------------------------------------------------------

def cap_angle(a: Interval) -> Interval:
    """Polar angle arccos(1 - 2a) of the spherical cap of normalized area a."""
    if a.lo < 0.0 or a.hi > 1.0:
        raise DomainError("cap area must lie in [0, 1]", offending=a)
    return (1.0 - a * 2.0).arccos()


def cap_integral_bound(nu: Interval, a: Interval) -> Interval:
    """Upper bound a / ((c-s)(c-s+2as)) for the squared-expansion cap integral.

    c = cosh(nu), s = sinh(nu).  Computed twice: once in the displayed form
    with c - s evaluated as exp(-nu), and once through the antiderivative
    form (1/2s)(1/(c-s) - 1/(c - s cos phi0)) with phi0 = cap_angle(a).  The
    two enclosures must overlap; their intersection is returned.
    """
    if nu.lo <= 0.0:
        raise DomainError("nu must be positive", offending=nu.lo)
    if a.lo <= 0.0 or a.hi > 1.0:
        raise DomainError("cap area must lie in (0, 1]", offending=a)
    s = nu.sinh()
    if s.lo <= 0.0:
        raise DegenerateNu("sinh(nu) interval touches zero", offending=s)
    cms = (-nu).exp()  # c - s = e^{-nu}, avoids cancellation
    form1 = a / (cms * (cms + a * s * 2.0))

    c = nu.cosh()
    phi0 = cap_angle(a)
    denom = c - s * phi0._cos_on_0_pi()
    if denom.lo <= 0.0:
        raise DegenerateNu("cap denominator interval touches zero", offending=denom)
    form2 = (1.0 / (s * 2.0)) * (1.0 / cms - 1.0 / denom)
    return form1.intersection(form2)


def lemma_bound(a: Interval, b: Interval) -> Interval:
    """Displacement lower bound (1/2) log(b(1-a) / (a(1-b))).

    May be negative (a vacuous bound); an interval with lo = -inf results
    when b touches 0.
    """
    if a.lo <= 0.0 or a.hi > 1.0:
        raise DomainError("a must lie in (0, 1]", offending=a)
    if b.lo < 0.0 or b.hi >= 1.0:
        raise DomainError("b must lie in [0, 1)", offending=b)
    ratio = (b * (1.0 - a)) / (a * (1.0 - b))
    return ratio.log() * Interval.point(0.5)


def g_func(d: Interval) -> Interval:
    """(sqrt(8D+1) - 3)/(D - 1), the inverse mass of a long-squares bound."""
    if d.lo <= 1.0:
        raise DomainError("g is defined on (1, inf)", offending=d.lo)
    return ((d * 8.0 + 1.0).sqrt() - 3.0) / (d - 1.0)


def alpha_from_dbar(dbar: Interval) -> Interval:
    """Solve (1-alpha)(2-alpha)/alpha^2 = Dbar for the mass alpha = g(Dbar)/2.

    The round trip through the defining quadratic is recomputed and must
    intersect the input; ConsistencyError otherwise.
    """
    alpha = g_func(dbar) * Interval.point(0.5)
    back = ((1.0 - alpha) * (2.0 - alpha)) / (alpha ** 2)
    if not back.intersects(dbar):
        raise ConsistencyError(f"round trip {back} misses input {dbar}")
    return alpha


class Verdict(Enum):
    VERIFIED = "Verified"
    REFUTED = "Refuted"
    ERRATUM_SUSPECTED = "ErratumSuspected"
    UNDECIDED = "Undecided"

    def __str__(self) -> str:
        return self.value


def _le_verdict(lhs: Interval, rhs: Interval) -> Verdict:
    """Certified verdict for lhs <= rhs."""
    if lhs.hi <= rhs.lo:
        return Verdict.VERIFIED
    if lhs.lo > rhs.hi:
        return Verdict.REFUTED
    return Verdict.UNDECIDED


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    verdict: Verdict
    lhs: Interval | None = None
    rhs: Interval | None = None
    note: str = ""


@dataclass(frozen=True)
class DoubleTroubleReport:
    checks: tuple[InequalityCheck, ...]

    @property
    def overall(self) -> Verdict:
        verdicts = {c.verdict for c in self.checks}
        if Verdict.REFUTED in verdicts:
            return Verdict.REFUTED
        if Verdict.UNDECIDED in verdicts:
            return Verdict.UNDECIDED
        return Verdict.VERIFIED


def double_trouble_check(alpha: Interval, beta: Interval,
                         alpha_p: Interval, alpha_m: Interval,
                         beta_p: Interval, beta_m: Interval,
                         dx: Interval, dy: Interval) -> DoubleTroubleReport:
    """Check the mass identities and four displacement inequalities.

    Masses must satisfy alpha + beta = 1 (interval-consistent), the split
    masses must not exceed their totals, and each ratio of the form
    beta(1-alpha^+)/(alpha^+(1-beta)) must be bounded by the matching
    squared-exponential displacement.
    """
    for name, m in (("alpha", alpha), ("beta", beta), ("alpha+", alpha_p),
                    ("alpha-", alpha_m), ("beta+", beta_p), ("beta-", beta_m)):
        if m.lo < 0.0 or m.hi > 1.0:
            raise DomainError(f"mass {name} outside [0, 1]", offending=m)
    checks: list[InequalityCheck] = []

    total = alpha + beta
    checks.append(InequalityCheck(
        "alpha + beta = 1",
        Verdict.VERIFIED if total.contains(1.0) else Verdict.REFUTED,
        lhs=total, rhs=Interval.point(1.0)))
    checks.append(InequalityCheck("alpha+ + alpha- <= alpha",
                                  _le_verdict(alpha_p + alpha_m, alpha),
                                  lhs=alpha_p + alpha_m, rhs=alpha))
    checks.append(InequalityCheck("beta+ + beta- <= beta",
                                  _le_verdict(beta_p + beta_m, beta),
                                  lhs=beta_p + beta_m, rhs=beta))

    ratios = (
        ("beta(1-alpha+)/(alpha+(1-beta)) <= Dx", beta, alpha_p, dx),
        ("beta(1-alpha-)/(alpha-(1-beta)) <= Dx", beta, alpha_m, dx),
        ("alpha(1-beta+)/(beta+(1-alpha)) <= Dy", alpha, beta_p, dy),
        ("alpha(1-beta-)/(beta-(1-alpha)) <= Dy", alpha, beta_m, dy),
    )
    for name, big, small, bound in ratios:
        try:
            lhs = (big * (1.0 - small)) / (small * (1.0 - big))
        except DomainError:
            checks.append(InequalityCheck(name, Verdict.UNDECIDED,
                                          note="denominator interval contains zero"))
            continue
        checks.append(InequalityCheck(name, _le_verdict(lhs, bound),
                                      lhs=lhs, rhs=bound))
    return DoubleTroubleReport(tuple(checks))


@dataclass(frozen=True)
class LongSquaresResult:
    verdict: Verdict
    total: Interval
    slack: float

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.VERIFIED


def long_squares_check(dx: Interval, dy: Interval) -> LongSquaresResult:
    """Certify g(Dx) + g(Dy) <= 2 or refute it.

    A Refuted verdict (total certainly above 2) is the contradiction that
    the 0.286 chain relies on.
    """
    total = g_func(dx) + g_func(dy)
    if total.hi <= 2.0:
        return LongSquaresResult(Verdict.VERIFIED, total, 2.0 - total.hi)
    if total.lo > 2.0:
        return LongSquaresResult(Verdict.REFUTED, total, total.lo - 2.0)
    return LongSquaresResult(Verdict.UNDECIDED, total, -total.width)


def poly_root(coeffs: Sequence, bracket: Interval, width: float = 1e-10) -> Interval:
    """Isolate a root by bisection with exact rational sign evaluation.

    ``coeffs`` are descending-power polynomial coefficients (ints,
    Fractions, decimal strings, or floats taken at their exact binary
    value).  Endpoints are floats, so P(endpoint) is a rational number and
    its sign is computed exactly; no rounding can flip a bisection step.
    """
    if width <= 0.0:
        raise DomainError("width must be positive", offending=width)
    cs = [Fraction(c) for c in coeffs]

    def sign_at(x: float) -> int:
        acc = Fraction(0)
        fx = Fraction(x)
        for c in cs:
            acc = acc * fx + c
        return (acc > 0) - (acc < 0)

    lo, hi = bracket.lo, bracket.hi
    s_lo, s_hi = sign_at(lo), sign_at(hi)
    if s_lo == 0:
        return Interval.point(lo)
    if s_hi == 0:
        return Interval.point(hi)
    if s_lo == s_hi:
        raise NoSignChange(f"no sign change on [{lo}, {hi}]")
    for _ in range(200):
        if hi - lo <= width:
            break
        mid = lo + (hi - lo) / 2.0
        if mid <= lo or mid >= hi:
            break  # bracket narrowed to adjacent floats
        s_mid = sign_at(mid)
        if s_mid == 0:
            return Interval.point(mid)
        if s_mid == s_lo:
            lo = mid
        else:
            hi = mid
    return Interval(lo, hi)


# ---------------------------------------------------------------------------
# the displacement gap function phi and the constants report
# ---------------------------------------------------------------------------

def phi_ival(t: Interval) -> Interval:
    """Certified phi(t) = max(3t, 2 arccosh(2 cosh^2 t - cosh(t)/2 - 1/2))."""
    if t.lo <= 0.0:
        raise DomainError("phi is defined for t > 0", offending=t.lo)
    c = t.cosh()
    arg = c * c * 2.0 - c * Interval.point(0.5) - 0.5
    # 2c^2 - c/2 - 1/2 >= 1 for c >= 1; clamp roundoff below the true floor
    arg = Interval(max(arg.lo, 1.0), max(arg.hi, 1.0))
    branch = arg.arccosh() * 2.0
    linear = t * 3.0
    return Interval(max(linear.lo, branch.lo), max(linear.hi, branch.hi))


@dataclass(frozen=True)
class CheckResult:
    name: str
    claimed: str
    verdict: Verdict
    computed: Interval | None = None
    slack: float | None = None
    note: str = ""

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "claimed": self.claimed,
            "verdict": str(self.verdict),
            "computed": None if self.computed is None else
                        {"lo": self.computed.lo, "hi": self.computed.hi},
            "slack": self.slack,
            "note": self.note,
        }


@dataclass(frozen=True)
class ConstantsReport:
    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.verdict is not Verdict.REFUTED for c in self.checks)

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_text(self) -> str:
        lines = [f"{'check':<34} {'verdict':<18} {'certified interval':<46} slack"]
        lines.append("-" * 110)
        for c in self.checks:
            ival = "-" if c.computed is None else str(c.computed)
            slack = "-" if c.slack is None else f"{c.slack:.3e}"
            lines.append(f"{c.name:<34} {str(c.verdict):<18} {ival:<46} {slack}")
            if c.note:
                lines.append(f"{'':<34} note: {c.note}")
        return "\n".join(lines)

    def to_json_dict(self) -> dict:
        return {"checks": [c.to_json_dict() for c in self.checks], "ok": self.ok}


def _band_check(name: str, claimed: str, value: Interval,
                lo_dec: str, hi_dec: str, extra: str = "") -> CheckResult:
    """Verify value lies strictly inside the open decimal band (lo, hi)."""
    band_lo = Fraction(lo_dec)
    band_hi = Fraction(hi_dec)
    inside = band_lo < Fraction(value.lo) and Fraction(value.hi) < band_hi
    slack = min(float(Fraction(value.lo) - band_lo), float(band_hi - Fraction(value.hi)))
    return CheckResult(name, claimed,
                       Verdict.VERIFIED if inside else Verdict.REFUTED,
                       computed=value, slack=slack, note=extra)


def verify_constants() -> ConstantsReport:
    """Run the full certified constants suite, including erratum detection.

    All intervals come out with width far below the 1e-6 requirement.  The
    two erratum checks report ErratumSuspected with both the printed and
    the certified values; nothing is silently corrected.
    """
    checks: list[CheckResult] = []
    half = Interval.point(0.5)

    # (a) half-log constants
    half_log2 = Interval.point(2.0).log() * half
    checks.append(_band_check("half_log_2", "0.346...", half_log2,
                              "0.34656", "0.34658"))
    half_log3 = Interval.point(3.0).log() * half
    checks.append(_band_check("half_log_3", "(1/2) log 3", half_log3,
                              "0.54930", "0.54932"))

    # (b) quartic root and its log
    r_root = poly_root([1, -1, 0, -1, -3], Interval(1.0, 2.0), width=1e-9)
    checks.append(_band_check("quartic_root", "1.8105...", r_root,
                              "1.8104", "1.8106"))
    log_root = r_root.log()
    checks.append(_band_check("log_quartic_root", "0.593...", log_root,
                              "0.5926", "0.5946"))

    # (c) phi chain at 0.286 stays below 0.8227
    nu286 = Interval.from_decimal("0.286")
    chain = phi_ival(nu286) * half + nu286
    strict = Fraction(chain.hi) < Fraction("0.8227")
    checks.append(CheckResult(
        "phi_chain_286", "phi(0.286)/2 + 0.286 < 0.8227",
        Verdict.VERIFIED if strict else Verdict.REFUTED,
        computed=chain, slack=float(Fraction("0.8227") - Fraction(chain.hi))))

    # (d) long-squares refutation at the printed roundings
    d1 = (nu286 * 2.0).exp()
    d1_ok = Fraction(d1.hi) < Fraction("1.772")
    d2 = (Interval.from_decimal("0.8227") * 2.0).exp()
    d2_ok = Fraction(d2.hi) < Fraction("5.1831")
    gsum = g_func(Interval.from_decimal("1.772")) + g_func(Interval.from_decimal("5.1831"))
    band = _band_check("long_squares_sum", "2.0007...", gsum, "2.0006", "2.0009")
    above_two = gsum.lo > 2.0
    verdict = Verdict.VERIFIED if (band.verdict is Verdict.VERIFIED and above_two
                                   and d1_ok and d2_ok) else Verdict.REFUTED
    checks.append(CheckResult(
        "long_squares_sum", "g(1.772) + g(5.1831) = 2.0007... > 2",
        verdict, computed=gsum, slack=gsum.lo - 2.0,
        note="with exp(2*0.286) < 1.772 and exp(2*0.8227) < 5.1831 certified"))

    # (e) commutator displacement bound at 0.292
    nu292 = Interval.from_decimal("0.292")
    val_e = 2.0 / (phi_ival(nu292).exp() + 1.0)
    band_e = _band_check("commutator_bound_292", "0.5009...", val_e,
                         "0.5008", "0.5011")
    verdict_e = band_e.verdict if val_e.lo > 0.5 else Verdict.REFUTED
    checks.append(CheckResult("commutator_bound_292",
                              "2/(1 + exp phi(0.292)) = 0.5009... > 1/2",
                              verdict_e, computed=val_e, slack=val_e.lo - 0.5))

    # (f) power displacement bound at 0.292
    val_f = (1.0 / ((nu292 * 2.0).exp() + 1.0)
             + 1.0 / ((nu292 * 4.0).exp() + 1.0))
    band_f = _band_check("power_bound_292", "0.595...", val_f, "0.594", "0.596")
    verdict_f = band_f.verdict if val_f.lo > 0.5 else Verdict.REFUTED
    checks.append(CheckResult("power_bound_292",
                              "1/(1+e^0.584) + 1/(1+e^1.168) = 0.595... > 1/2",
                              verdict_f, computed=val_f, slack=val_f.lo - 0.5))

    # (g) cubic-root erratum: the printed alpha is not a root of t^3-t^2-t-3
    q_root = poly_root([1, -1, -1, -3], Interval(1.0, 3.0), width=1e-9)
    q_half_log = q_root.log() * half
    alt_root = poly_root([1, -1, -1, -1], Interval(1.0, 2.0), width=1e-9)
    alt_half_log = alt_root.log() * half
    checks.append(CheckResult(
        "cubic_root_erratum",
        "alpha = 1.839... root of t^3 - t^2 - t - 3, (1/2) log alpha = 0.304...",
        Verdict.ERRATUM_SUSPECTED, computed=q_root, slack=None,
        note=(f"certified root of t^3-t^2-t-3 is {q_root} with half-log "
              f"{q_half_log}, not 1.839/0.304; t^3-t^2-t-1 has root {alt_root} "
              f"with half-log {alt_half_log}, matching the printed digits; "
              f"which polynomial was intended is reported, not guessed")))

    # (h) corollary direction erratum: g decreasing forces D_x >= 3
    g3 = g_func(Interval.point(3.0))
    g_below = g_func(Interval.from_decimal("2.999"))
    g_above = g_func(Interval.from_decimal("3.001"))
    direction_ok = (g3.lo == 1.0 == g3.hi and g_below.lo > 1.0 and g_above.hi < 1.0)
    checks.append(CheckResult(
        "corollary_direction_erratum",
        "'we find D_x <= 3' in the half-log-3 corollary",
        Verdict.ERRATUM_SUSPECTED if direction_ok else Verdict.REFUTED,
        computed=g3, slack=None,
        note=(f"g(3) = {g3} exactly and g is decreasing "
              f"(g(2.999) = {g_below} > 1 > g(3.001) = {g_above}), so "
              f"g(D_x) <= 1 forces D_x >= 3; the printed direction is reversed")))

    return ConstantsReport(tuple(checks))

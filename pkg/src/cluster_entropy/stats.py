"""Pearson correlation and its two-sided Student-t significance test.

The t distribution is evaluated through the regularized incomplete beta
function, computed with a modified-Lentz continued fraction, so nothing
beyond the standard library is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DegenerateSeries, InvalidR, LengthMismatch, InsufficientData, ValidationError

_TINY = 1e-300
_CF_EPS = 1e-16
_CF_MAX_ITER = 10_000


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for I_x(a, b), modified Lentz's method."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def _ibeta(a: float, b: float, x: float, y: float) -> float:
    # y == 1 - x, passed separately so callers can supply it without cancellation
    if x <= 0.0:
        return 0.0
    if y <= 0.0:
        return 1.0
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log(y)
    )
    front = math.exp(log_front)
    # the fraction converges fast only on this side of the mean
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, y) / b


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and 0 <= x <= 1."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x!r}")
    return _ibeta(a, b, x, 1.0 - x)


def _t_tail(t: float, df: float) -> float:
    """P(T > |t|) for T ~ t(df)."""
    if math.isinf(t):
        return 0.0
    t2 = t * t
    x = df / (df + t2)
    y = t2 / (df + t2)
    return 0.5 * _ibeta(0.5 * df, 0.5, x, y)


def student_t_cdf(t: float, df: float) -> float:
    if not df > 0:
        raise ValueError(f"degrees of freedom must be positive, got {df!r}")
    if math.isnan(t):
        raise ValueError("t is NaN")
    if t == 0:
        return 0.5
    tail = _t_tail(t, df)
    return 1.0 - tail if t > 0 else tail


def student_t_sf(t: float, df: float) -> float:
    return student_t_cdf(-t, df)


def t_statistic(r: float, n: int) -> float:
    if abs(r) >= 1:
        return math.copysign(math.inf, r)
    return r * math.sqrt((n - 2) / (1.0 - r * r))


def p_value_two_sided(r: float, n: int) -> float:
    """Two-sided p-value for a sample correlation ``r`` over ``n`` pairs (df = n - 2)."""
    if math.isnan(r) or abs(r) > 1:
        raise InvalidR(f"correlation must lie in [-1, 1], got {r!r}")
    if n < 3:
        raise InsufficientData(f"need at least 3 pairs for a t-test, got {n}")
    if abs(r) == 1:
        return 0.0
    t = t_statistic(r, n)
    p = 2.0 * student_t_sf(abs(t), n - 2)
    return min(1.0, max(0.0, p))


def _as_floats(values: Sequence[float], label: str) -> list[float]:
    out = [float(v) for v in values]
    if any(not math.isfinite(v) for v in out):
        raise ValidationError(f"series {label!r} contains non-finite values")
    return out


@dataclass(frozen=True)
class SampleSeries:
    label: str
    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(_as_floats(self.values, self.label)))

    def __len__(self) -> int:
        return len(self.values)


def pearson_r(x: SampleSeries | Sequence[float], y: SampleSeries | Sequence[float]) -> float:
    """Sample Pearson correlation, two-pass with correctly rounded sums."""
    xs = list(x.values) if isinstance(x, SampleSeries) else _as_floats(x, "x")
    ys = list(y.values) if isinstance(y, SampleSeries) else _as_floats(y, "y")
    if len(xs) != len(ys):
        raise LengthMismatch(f"series lengths differ: {len(xs)} vs {len(ys)}")
    n = len(xs)
    if n < 3:
        raise InsufficientData(f"need at least 3 pairs, got {n}")
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    dx = [v - mx for v in xs]
    dy = [v - my for v in ys]
    sxx = math.fsum(v * v for v in dx)
    syy = math.fsum(v * v for v in dy)
    if sxx == 0:
        raise DegenerateSeries(f"series {getattr(x, 'label', 'x')!r} is constant")
    if syy == 0:
        raise DegenerateSeries(f"series {getattr(y, 'label', 'y')!r} is constant")
    sxy = math.fsum(a * b for a, b in zip(dx, dy))
    prod = sxx * syy
    if prod == 0 or math.isinf(prod):
        # the product under/overflowed; separate roots cost an ulp but stay finite
        denom = math.sqrt(sxx) * math.sqrt(syy)
    else:
        denom = math.sqrt(prod)
    r = sxy / denom
    return max(-1.0, min(1.0, r))


def interpret(r: float, p: float, alpha: float = 0.05) -> str:
    """Human-readable strength/direction label, e.g. "Weak positive, not significant"."""
    significant = p < alpha
    if r == 0:
        return "No correlation" if significant else "No correlation, not significant"
    size = abs(r)
    if size >= 0.7:
        strength = "Strong"
    elif size >= 0.4:
        strength = "Moderate"
    else:
        strength = "Weak"
    direction = "positive" if r > 0 else "negative"
    if significant:
        return f"{strength} {direction} correlation"
    return f"{strength} {direction}, not significant"


@dataclass(frozen=True)
class CorrelationResult:
    benchmark: str
    r: float
    t_statistic: float | None
    p_value: float
    n: int
    label: str

    def to_dict(self) -> dict:
        return {
            "benchmark": self.benchmark,
            "r": self.r,
            "t_statistic": self.t_statistic,
            "p_value": self.p_value,
            "n": self.n,
            "label": self.label,
        }


def correlate(x: SampleSeries, y: SampleSeries, alpha: float = 0.05) -> CorrelationResult:
    r = pearson_r(x, y)
    n = len(x)
    p = p_value_two_sided(r, n)
    t = None if abs(r) == 1 else t_statistic(r, n)
    return CorrelationResult(y.label, r, t, p, n, interpret(r, p, alpha))

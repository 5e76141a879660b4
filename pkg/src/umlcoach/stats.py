"""Plain-Python statistics used by the instructor analytics.

The two-tailed p-value comes from the t-distribution survival function,
evaluated through the regularized incomplete beta function.  That function is
computed with the standard continued-fraction expansion (modified Lentz),
iterated until the running estimate moves by less than one part in 1e15,
comfortably inside the 1e-10 absolute tolerance this package promises.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

WELCH = "welch"
STUDENT = "student"

_CF_EPS = 1e-15
_CF_TINY = 1e-300
_CF_MAX_ITER = 500


class DegenerateSampleError(ValueError):
    """Too few observations or zero variance; the statistic is undefined."""


def _mean(xs: Sequence[float]) -> float:
    return sum(xs) / len(xs)


def _sample_variance(xs: Sequence[float]) -> float:
    m = _mean(xs)
    return sum((x - m) ** 2 for x in xs) / (len(xs) - 1)


def _beta_cf(x: float, a: float, b: float) -> float:
    """Continued fraction for the incomplete beta; converges fast for
    x < (a + 1) / (a + b + 2)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta did not converge for x={x}, a={a}, b={b}")


def regularized_incomplete_beta(x: float, a: float, b: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0 or b <= 0:
        raise ValueError("shape parameters must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(x, a, b) / a
    return 1.0 - front * _beta_cf(1.0 - x, b, a) / b


def t_two_tailed_p(t: float, df: float) -> float:
    """P(|T| >= |t|) for a t-distributed T with ``df`` degrees of freedom."""
    if df <= 0:
        raise ValueError(f"degrees of freedom must be positive, got {df}")
    if t == 0.0:
        return 1.0
    return regularized_incomplete_beta(df / (df + t * t), df / 2.0, 0.5)


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Sample correlation coefficient in [-1, 1].

    Errors on mismatched lengths, fewer than two points, or a constant
    series, where the coefficient is undefined rather than zero.
    """
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise DegenerateSampleError("need at least two points")
    mx = _mean(xs)
    my = _mean(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateSampleError("zero variance makes the correlation undefined")
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    r = sxy / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


@dataclass(frozen=True)
class GroupComparison:
    mean_a: float
    mean_b: float
    t: float
    df: float
    p_two_tailed: float
    n_a: int
    n_b: int

    def to_doc(self) -> dict:
        return {
            "meanA": self.mean_a,
            "meanB": self.mean_b,
            "t": self.t,
            "df": self.df,
            "pTwoTailed": self.p_two_tailed,
            "nA": self.n_a,
            "nB": self.n_b,
        }


def t_test_two_tailed(
    a: Sequence[float], b: Sequence[float], variant: str = WELCH
) -> GroupComparison:
    """Two-tailed two-sample t-test.

    Welch (the default) does not assume equal variances and uses the
    Welch-Satterthwaite degrees of freedom; ``student`` pools the variance
    with ``n_a + n_b - 2`` degrees of freedom.  Both require two or more
    observations per group and nonzero variance in each.
    """
    if variant not in (WELCH, STUDENT):
        raise ValueError(f"variant must be '{WELCH}' or '{STUDENT}', got {variant!r}")
    if len(a) < 2 or len(b) < 2:
        raise DegenerateSampleError("need at least two observations per group")
    var_a = _sample_variance(a)
    var_b = _sample_variance(b)
    if var_a == 0.0 or var_b == 0.0:
        raise DegenerateSampleError("zero variance in a group makes the test undefined")
    n_a, n_b = len(a), len(b)
    mean_a, mean_b = _mean(a), _mean(b)

    if variant == WELCH:
        se_a = var_a / n_a
        se_b = var_b / n_b
        t = (mean_a - mean_b) / math.sqrt(se_a + se_b)
        df = (se_a + se_b) ** 2 / (se_a**2 / (n_a - 1) + se_b**2 / (n_b - 1))
    else:
        pooled = ((n_a - 1) * var_a + (n_b - 1) * var_b) / (n_a + n_b - 2)
        t = (mean_a - mean_b) / math.sqrt(pooled * (1.0 / n_a + 1.0 / n_b))
        df = n_a + n_b - 2

    return GroupComparison(
        mean_a=mean_a,
        mean_b=mean_b,
        t=t,
        df=df,
        p_two_tailed=t_two_tailed_p(t, df),
        n_a=n_a,
        n_b=n_b,
    )

"""Goodness-of-fit distances against fully specified target laws.

Only two classical distances are needed here: the Kolmogorov-Smirnov
sup-distance and the Anderson-Darling quadratic statistic, both against a
known continuous CDF (no parameter estimation, so no small-sample
corrections apply).
"""

from __future__ import annotations

import numpy as np

_AD_EPS = 1e-12


def _prepare(sample, target_cdf):
    x = np.sort(np.asarray(sample, dtype=np.float64))
    if x.size == 0:
        raise ValueError("sample must be nonempty")
    if not np.all(np.isfinite(x)):
        raise ValueError("sample contains non-finite values")
    try:
        f = np.asarray(target_cdf(x), dtype=np.float64)
    except TypeError:
        f = None          # scalar-only callable
    if f is None or f.shape != x.shape:
        f = np.array([float(target_cdf(v)) for v in x])
    if np.any(f < -1e-9) or np.any(f > 1.0 + 1e-9):
        raise ValueError("target_cdf returned values outside [0, 1]")
    return x, np.clip(f, 0.0, 1.0)


def ks_distance(sample, target_cdf) -> float:
    """sup_x |F_R(x) - F(x)| via both one-sided envelopes at sample points.

    The empirical CDF jumps from (i-1)/R to i/R at the i-th sorted point,
    so the sup distance is attained on one of the two envelopes there.
    """
    x, f = _prepare(sample, target_cdf)
    r = x.size
    i = np.arange(1, r + 1, dtype=np.float64)
    d_plus = np.max(i / r - f)
    d_minus = np.max(f - (i - 1.0) / r)
    return float(max(d_plus, d_minus, 0.0))


def anderson_darling(sample, target_cdf) -> float:
    """A-squared statistic against a fully specified continuous target.

    CDF values are clamped away from {0, 1} by 1e-12 before taking logs;
    a sample point far outside the target support then contributes a huge
    but finite penalty instead of an infinity.
    """
    x, f = _prepare(sample, target_cdf)
    r = x.size
    f = np.clip(f, _AD_EPS, 1.0 - _AD_EPS)
    i = np.arange(1, r + 1, dtype=np.float64)
    # The reversed term uses 1 - F at the mirror-ordered points.
    terms = (2.0 * i - 1.0) * (np.log(f) + np.log1p(-f[::-1]))
    return float(-r - np.mean(terms))

"""Tail functionals of a quantile function.

For a model with quantile Q and tail mass s in (0, 1) the package works
with four quantities:

    c(s, beta) = s^{-beta} int_{1-s}^{1} (1-u)^beta dQ(u)      (tail scale)
    sigma2(s)  = int int_{(1-s,1]^2} (min(u,v) - uv) dQ dQ     (variance driver)
    mu(s)      = int_{1-s}^{1} Q(u) du                         (mean mass)
    rho(s)     = int_0^s r(u) du                               (rate integral)

c(s) is shorthand for c(s, 1).  Each functional prefers an exact closed
form when the model provides one and otherwise falls back to adaptive
quadrature in logarithmic tail coordinates.  Two independent quadrature
routes exist for the scale functional and are kept separate on purpose:

* ``method="ibp"`` uses the integrated-by-parts representation, written
  in the cancellation-free form
  c = beta s^{-beta} int_0^s t^{beta-1} (Q(1-t) - Q(1-s)) dt,
  which touches only the quantile function;
* ``method="stieltjes"`` integrates t^beta against the tail density of
  dQ directly and serves as the cross-check route.

The variance driver is evaluated through the exact reduction

    sigma2(s) = 2 int_0^s y q(y) (Q(1-y) - Q(1-s)) dy - rho(s)^2,

obtained from the symmetric double integral by two integrations by
parts; q is the density of dQ in the tail coordinate and rho(s) equals
mu(s) - s Q(1-s) for any differentiable model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import QuadratureError, UnsupportedModelError
from .models import GUMBEL_DOMAIN, TailModel
from .quadrature import DEFAULT_REL_TOL, log_interval_quad, semiinf_quad

__all__ = [
    "SGrid",
    "tail_scale",
    "tail_mean",
    "rate_integral",
    "tail_variance",
    "spacing_log_ratio",
    "scale_beta_ratio",
    "variance_scale_ratio",
    "representation_residual",
    "sequence_slowvar_ratio",
    "FunctionalTable",
    "build_functional_table",
]


@dataclass(frozen=True)
class SGrid:
    """A strictly decreasing geometric grid of tail masses in (0, 1/2].

    ``geometry`` remembers the (start, ratio, count) a geometric grid was
    built from, so configs serialize back to exactly the numbers they
    were parsed from; hand-built grids leave it unset.
    """

    points: tuple
    geometry: tuple = field(default=None, compare=False)

    def __post_init__(self):
        pts = tuple(float(p) for p in self.points)
        if not pts:
            raise ValueError("grid must contain at least one point")
        if any(not 0.0 < p <= 0.5 for p in pts):
            raise ValueError("grid points must lie in (0, 1/2]")
        if any(b >= a for a, b in zip(pts, pts[1:])):
            raise ValueError("grid points must be strictly decreasing")
        object.__setattr__(self, "points", pts)

    @classmethod
    def geometric(cls, start: float, ratio: float, count: int) -> "SGrid":
        if not 0.0 < ratio < 1.0:
            raise ValueError("ratio must lie in (0, 1)")
        if count < 1:
            raise ValueError("count must be at least 1")
        return cls(
            tuple(start * ratio**i for i in range(count)),
            geometry=(float(start), float(ratio), int(count)),
        )

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


def _check_s(s):
    s = float(s)
    if not 0.0 < s < 1.0:
        raise ValueError("tail mass s must lie strictly inside (0, 1)")
    return s


def _scale_ibp(model, s, beta, rel_tol):
    qs = model.tail_quantile(s)

    def g(w):
        t = s * math.exp(-w)
        if t <= 0.0:
            return 0.0
        return math.exp(-beta * w) * (model.tail_quantile(t) - qs)

    val, err = semiinf_quad(g, rel_tol, what=f"c({s:g},{beta:g}) ibp")
    return beta * val, beta * err


def _scale_stieltjes(model, s, beta, rel_tol):
    def g(w):
        t = s * math.exp(-w)
        if t <= 0.0:
            return 0.0
        with np.errstate(over="ignore"):
            d = float(model.tail_density(t))
        if not math.isfinite(d):
            # q(t) can exceed double range once t is astronomically small
            # (heavy-tailed controls); the e^{-beta w} factor has crushed
            # the true integrand long before that point.
            return 0.0
        return math.exp(-beta * w) * t * d

    return semiinf_quad(g, rel_tol, what=f"c({s:g},{beta:g}) stieltjes")


def tail_scale(model: TailModel, s, beta: float = 1.0, method: str = "auto",
               rel_tol: float = DEFAULT_REL_TOL, with_error: bool = False):
    """Tail scale c(s, beta); c(s) is the beta = 1 case.

    ``method`` selects the evaluation route: "auto" prefers a closed
    form and falls back to "ibp"; "ibp" and "stieltjes" force the two
    quadrature routes described in the module docstring.
    """
    s = _check_s(s)
    beta = float(beta)
    if not beta > 0.0:
        raise ValueError("beta must be strictly positive")
    if method not in ("auto", "ibp", "stieltjes"):
        raise ValueError(f"unknown method {method!r}")

    val = err = None
    if method == "auto":
        closed = model.closed_scale(s, beta)
        if closed is not None:
            val, err = float(closed), 0.0
            if not math.isfinite(val):
                raise QuadratureError(
                    f"c({s:g},{beta:g}) diverges for {model.describe()}",
                    estimate=val,
                )
    if val is None:
        if method == "stieltjes":
            val, err = _scale_stieltjes(model, s, beta, rel_tol)
        else:
            val, err = _scale_ibp(model, s, beta, rel_tol)
    return (val, err) if with_error else val


def tail_mean(model: TailModel, s, method: str = "auto",
              rel_tol: float = DEFAULT_REL_TOL, with_error: bool = False):
    """Mean mass mu(s) = int_{1-s}^1 Q(u) du of the top s fraction."""
    s = _check_s(s)
    if method not in ("auto", "quadrature"):
        raise ValueError(f"unknown method {method!r}")

    val = err = None
    if method == "auto":
        closed = model.closed_mean_mass(s)
        if closed is not None:
            val, err = float(closed), 0.0
            if not math.isfinite(val):
                raise QuadratureError(
                    f"mu({s:g}) diverges for {model.describe()}", estimate=val
                )
    if val is None:
        def g(w):
            t = s * math.exp(-w)
            if t <= 0.0:
                return 0.0
            return t * model.tail_quantile(t)

        val, err = semiinf_quad(g, rel_tol, what=f"mu({s:g})")
    return (val, err) if with_error else val


def rate_integral(model: TailModel, s, extended: bool = False,
                  method: str = "auto", rel_tol: float = DEFAULT_REL_TOL,
                  with_error: bool = False):
    """Rate integral rho(s) = int_0^s r(u) du.

    Models without an analytic slowly varying rate raise unless
    ``extended`` is set, in which case the identity
    rho(s) = mu(s) - s Q(1-s) supplies the value.
    """
    s = _check_s(s)
    if not model.has_tail_rate:
        if not extended:
            raise UnsupportedModelError(
                f"{model.describe()} has no analytic tail rate; "
                "pass extended=True for the mean-mass identity"
            )
        mu, mu_err = tail_mean(model, s, rel_tol=rel_tol, with_error=True)
        val = mu - s * model.tail_quantile(s)
        return (val, mu_err) if with_error else val

    if method == "auto":
        closed = model.closed_rate_integral(s)
        if closed is not None:
            return (float(closed), 0.0) if with_error else float(closed)

    def g(w):
        u = s * math.exp(-w)
        if u <= 0.0:
            return 0.0
        return u * float(model.tail_rate(u))

    val, err = semiinf_quad(g, rel_tol, what=f"rho({s:g})")
    return (val, err) if with_error else val


def tail_variance(model: TailModel, s, method: str = "auto",
                  rel_tol: float = DEFAULT_REL_TOL, with_error: bool = False):
    """Variance driver sigma2(s) of the extreme-sum limit theorem."""
    s = _check_s(s)
    if method not in ("auto", "quadrature"):
        raise ValueError(f"unknown method {method!r}")

    if method == "auto":
        closed = model.closed_variance(s)
        if closed is not None:
            return (float(closed), 0.0) if with_error else float(closed)

    rho, rho_err = rate_integral(model, s, extended=True, rel_tol=rel_tol,
                                 with_error=True)
    qs = model.tail_quantile(s)

    def g(w):
        y = s * math.exp(-w)
        if y <= 0.0:
            return 0.0
        # an inf here is the honest divergence signal (heavy tails), so
        # only the overflow warning is silenced, never the value
        with np.errstate(over="ignore"):
            d = float(model.tail_density(y))
        return y * (y * d) * (model.tail_quantile(y) - qs)

    j2, j2_err = semiinf_quad(g, rel_tol, what=f"sigma2({s:g})")
    val = 2.0 * j2 - rho * rho
    err = 2.0 * j2_err + 2.0 * abs(rho) * rho_err
    if not math.isfinite(val):
        raise QuadratureError(f"sigma2({s:g}) diverges for {model.describe()}",
                              estimate=val, error_bound=err)
    return (val, err) if with_error else val


# -- limit ratios -------------------------------------------------------


def spacing_log_ratio(model: TailModel, s, x: float) -> float:
    """(Q(1-xs) - Q(1-s)) / c(s); tends to -ln x in the Gumbel domain."""
    s = _check_s(s)
    x = float(x)
    if not x > 0.0:
        raise ValueError("x must be strictly positive")
    _check_s(x * s)
    num = model.tail_quantile(x * s) - model.tail_quantile(s)
    return num / tail_scale(model, s)


def scale_beta_ratio(model: TailModel, s, beta: float) -> float:
    """c(s, beta) / c(s); tends to 1/beta in the Gumbel domain."""
    return tail_scale(model, s, beta) / tail_scale(model, s)


def variance_scale_ratio(model: TailModel, s) -> float:
    """sigma2(s) / (2 s c(s)^2); tends to 1 in the Gumbel domain."""
    s = _check_s(s)
    c = tail_scale(model, s)
    return tail_variance(model, s) / (2.0 * s * c * c)


def representation_residual(model: TailModel, s, anchor: float = 0.25,
                            rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Defect of the exact scale representation of the tail quantile.

    The representation Q(1-s) = b - c(s) + int_s^1 u^{-1} c(u) du holds
    with a single constant b; fitting b at ``anchor`` and subtracting
    leaves the anchored residual

        | Q(1-s) - Q(1-anchor) + c(s) - c(anchor) - int_s^anchor c(u)/u du |

    which is pure quadrature noise for any differentiable model.
    """
    s = _check_s(s)
    anchor = _check_s(anchor)
    if not s < anchor:
        raise ValueError("need s < anchor")

    integral, _ = log_interval_quad(
        lambda u: tail_scale(model, u, rel_tol=rel_tol) / u,
        s, anchor, rel_tol=max(rel_tol, 1e-10),
        what=f"int c(u)/u over ({s:g},{anchor:g})",
    )
    lhs = model.tail_quantile(s) - model.tail_quantile(anchor)
    rhs = -tail_scale(model, s, rel_tol=rel_tol) + tail_scale(model, anchor, rel_tol=rel_tol) + integral
    return abs(lhs - rhs)


def sequence_slowvar_ratio(slowvar, beta: float, a_of_n, n) -> float:
    """n^{-beta} L(1/n) / (a_n^beta L(a_n)) for a slowly varying L.

    ``slowvar`` maps a tail mass to L; ``a_of_n`` maps n to the sequence
    a_n with a_n -> 0 and n a_n -> infinity.  The ratio tends to zero,
    which is what makes n^{-beta}-sized remainders negligible against
    a_n-sized tail blocks.
    """
    n = float(n)
    a_n = float(a_of_n(n))
    if not 0.0 < a_n < 1.0:
        raise ValueError("a_n must fall in (0, 1)")
    return n ** (-beta) * slowvar(1.0 / n) / (a_n**beta * slowvar(a_n))


# -- tabulation ---------------------------------------------------------


def _fmt17(x: float) -> str:
    return format(float(x), ".17g")


@dataclass
class FunctionalTable:
    """Functionals evaluated on a grid, with per-entry error estimates."""

    model: TailModel
    grid: SGrid
    betas: tuple
    columns: dict          # name -> list of floats (nan where flagged)
    errors: dict           # name -> list of error bounds (inf where flagged)
    notes: list            # human-readable flags for failed entries

    @property
    def column_order(self):
        order = ["s", "c"]
        order += [f"c_beta_{format(b, 'g')}" for b in self.betas]
        order += ["sigma2", "mu"]
        if "rho" in self.columns:
            order.append("rho")
        order.append("err_max")
        return order

    def err_max(self, i: int) -> float:
        errs = [self.errors[name][i] for name in self.errors]
        return max(errs) if errs else 0.0

    def to_csv(self, fh) -> None:
        """Write the table; deterministic order and 17 significant digits."""
        if self.model.domain_label != GUMBEL_DOMAIN:
            fh.write(
                f"# warning: {self.model.describe()} has domain label "
                f"{self.model.domain_label}; tail functionals target Gumbel-domain models\n"
            )
        names = self.column_order
        fh.write(",".join(names) + "\n")
        for i, s in enumerate(self.grid.points):
            row = []
            for name in names:
                if name == "s":
                    row.append(_fmt17(s))
                elif name == "err_max":
                    row.append(_fmt17(self.err_max(i)))
                else:
                    row.append(_fmt17(self.columns[name][i]))
            fh.write(",".join(row) + "\n")


def build_functional_table(model: TailModel, grid: SGrid, betas=(),
                           rel_tol: float = DEFAULT_REL_TOL) -> FunctionalTable:
    """Evaluate c, c(., beta), sigma2, mu (and rho when analytic) on a grid.

    Entries whose quadrature fails or diverges are flagged with NaN and
    an infinite error bound; the build itself never aborts.
    """
    betas = tuple(sorted(float(b) for b in betas))
    columns: dict = {"c": []}
    errors: dict = {"c": []}
    for b in betas:
        columns[f"c_beta_{format(b, 'g')}"] = []
        errors[f"c_beta_{format(b, 'g')}"] = []
    for name in ("sigma2", "mu"):
        columns[name] = []
        errors[name] = []
    if model.has_tail_rate:
        columns["rho"] = []
        errors["rho"] = []
    notes: list = []

    def entry(name, s, fn):
        try:
            val, err = fn()
        except (QuadratureError, UnsupportedModelError) as exc:
            notes.append(f"{name} at s={format(s, 'g')}: {exc}")
            val, err = math.nan, math.inf
        columns[name].append(val)
        errors[name].append(err)

    for s in grid.points:
        entry("c", s, lambda: tail_scale(model, s, rel_tol=rel_tol, with_error=True))
        for b in betas:
            entry(f"c_beta_{format(b, 'g')}", s,
                  lambda b=b: tail_scale(model, s, b, rel_tol=rel_tol, with_error=True))
        entry("sigma2", s, lambda: tail_variance(model, s, rel_tol=rel_tol, with_error=True))
        entry("mu", s, lambda: tail_mean(model, s, rel_tol=rel_tol, with_error=True))
        if model.has_tail_rate:
            entry("rho", s, lambda: rate_integral(model, s, rel_tol=rel_tol, with_error=True))

    return FunctionalTable(model=model, grid=grid, betas=betas,
                           columns=columns, errors=errors, notes=notes)

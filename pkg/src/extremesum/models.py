"""Distribution catalog presented through quantile functions.

Every model exposes the quantile Q, the CDF where available, and the
tail-side quantities the functional layer needs: the tail quantile
Q(1-t) evaluated stably for tiny t, and the density q(t) of the
Stieltjes measure dQ expressed in the tail coordinate t = 1-u.

Models in the representation subclass of the Gumbel domain additionally
expose the slowly varying rate r(u) with

    Q(1-s) = a + int_s^1 u^{-1} r(u) du,      r(u) = u * Q'(1-u).

Only models whose r has an elementary closed form carry the flag; the
remaining Gumbel-domain members (normal, lognormal, gamma) are served by
the extended identity rho(s) = mu(s) - s Q(1-s) further up the stack.
"""

from __future__ import annotations

import math
import re

import numpy as np
from scipy import special

from .errors import UnsupportedModelError

__all__ = [
    "GUMBEL_DOMAIN",
    "FRECHET_DOMAIN",
    "WEIBULL_DOMAIN",
    "UNKNOWN_DOMAIN",
    "TailModel",
    "Exponential",
    "Gumbel",
    "Weibull",
    "Normal",
    "LogNormal",
    "Gamma",
    "Pareto",
    "Uniform",
    "AffineModel",
    "CatalogEntry",
    "catalog",
    "parse_model",
]

GUMBEL_DOMAIN = "Gumbel"
FRECHET_DOMAIN = "Frechet"
WEIBULL_DOMAIN = "Weibull-domain"
UNKNOWN_DOMAIN = "unknown"

_EULER_GAMMA = 0.5772156649015328606

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _norm_pdf(x):
    return np.exp(-0.5 * np.asarray(x, dtype=float) ** 2 - _HALF_LOG_2PI)


def _check_prob(s, name="s"):
    arr = np.asarray(s, dtype=float)
    if np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise ValueError(f"{name} must lie strictly inside (0, 1)")
    return arr


class TailModel:
    """Base class: a distribution seen through its quantile function."""

    name: str = "model"
    params: tuple = ()
    domain_label: str = UNKNOWN_DOMAIN
    has_tail_rate: bool = False

    # -- quantile surface ------------------------------------------------

    def quantile(self, s):
        """Q(s) for s in (0,1); scalar or array.

        Delegates to the stable tail branch for s > 1/2 so that the tail
        mass 1-s is never formed from a rounded upper probability.
        """
        arr = _check_prob(s)
        lower = arr <= 0.5
        out = np.empty_like(arr)
        if np.any(lower):
            out[lower] = self._quantile_lower(arr[lower])
        if np.any(~lower):
            out[~lower] = self._tail_quantile_small(1.0 - arr[~lower])
        return out if out.ndim else float(out)

    def tail_quantile(self, t):
        """Q(1-t) for tail mass t in (0,1), stable as t -> 0."""
        arr = _check_prob(t, "t")
        small = arr <= 0.5
        out = np.empty_like(arr)
        if np.any(small):
            out[small] = self._tail_quantile_small(arr[small])
        if np.any(~small):
            out[~small] = self._quantile_lower(1.0 - arr[~small])
        return out if out.ndim else float(out)

    def _quantile_lower(self, s):
        raise NotImplementedError

    def _tail_quantile_small(self, t):
        raise NotImplementedError

    def cdf(self, x):
        raise NotImplementedError

    # -- tail measure ----------------------------------------------------

    def tail_density(self, t):
        """Density q(t) = -d/dt Q(1-t) of dQ in the tail coordinate."""
        raise NotImplementedError

    def tail_rate(self, u):
        """Slowly varying rate r(u) = u * Q'(1-u) of the representation class."""
        raise UnsupportedModelError(
            f"{self.describe()} carries no analytic slowly varying tail rate"
        )

    # -- optional closed forms; None means "use quadrature" -------------

    def closed_mean_mass(self, s):
        """mu(s) = int_{1-s}^1 Q(u) du, when an exact form is known."""
        return None

    def closed_scale(self, s, beta):
        """c(s, beta), when an exact form is known."""
        return None

    def closed_variance(self, s):
        """sigma^2(s), when an exact form is known."""
        return None

    def closed_rate_integral(self, s):
        """rho(s) = int_0^s r(u) du, when an exact form is known."""
        return None

    # -- bookkeeping -----------------------------------------------------

    def describe(self) -> str:
        inner = ",".join(format(p, "g") for p in self.params)
        return f"{self.name}({inner})"

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.describe()}>"


class Exponential(TailModel):
    """Exponential(rate); Q(1-t) = -ln(t)/rate, r(u) = 1/rate."""

    name = "exponential"
    domain_label = GUMBEL_DOMAIN
    has_tail_rate = True

    def __init__(self, rate: float = 1.0):
        if not rate > 0.0:
            raise ValueError("rate must be strictly positive")
        self.rate = float(rate)
        self.params = (self.rate,)

    def _quantile_lower(self, s):
        return -np.log1p(-s) / self.rate

    def _tail_quantile_small(self, t):
        return -np.log(t) / self.rate

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x <= 0.0, 0.0, -np.expm1(-self.rate * x))

    def tail_density(self, t):
        return 1.0 / (self.rate * np.asarray(t, dtype=float))

    def tail_rate(self, u):
        return np.full_like(np.asarray(u, dtype=float), 1.0 / self.rate)

    def closed_mean_mass(self, s):
        return s * (1.0 - math.log(s)) / self.rate

    def closed_scale(self, s, beta):
        return 1.0 / (self.rate * beta)

    def closed_variance(self, s):
        return (2.0 * s - s * s) / self.rate**2

    def closed_rate_integral(self, s):
        return s / self.rate


class Gumbel(TailModel):
    """Gumbel(loc, scale); Q(s) = loc - scale*ln(-ln s)."""

    name = "gumbel"
    domain_label = GUMBEL_DOMAIN
    has_tail_rate = True

    def __init__(self, loc: float = 0.0, scale: float = 1.0):
        if not scale > 0.0:
            raise ValueError("scale must be strictly positive")
        self.loc = float(loc)
        self.scale = float(scale)
        self.params = (self.loc, self.scale)

    def _quantile_lower(self, s):
        return self.loc - self.scale * np.log(-np.log(s))

    def _tail_quantile_small(self, t):
        return self.loc - self.scale * np.log(-np.log1p(-t))

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(-np.exp(-(x - self.loc) / self.scale))

    def tail_density(self, t):
        t = np.asarray(t, dtype=float)
        return self.scale / ((1.0 - t) * (-np.log1p(-t)))

    def tail_rate(self, u):
        u = np.asarray(u, dtype=float)
        return self.scale * u / ((1.0 - u) * (-np.log1p(-u)))

    def closed_rate_integral(self, s):
        # int_0^s r = scale * int_0^G (1-e^{-g})/g dg, G = -ln(1-s),
        # and the integral is gamma + ln G + E1(G).
        big_g = -math.log1p(-s)
        return self.scale * (_EULER_GAMMA + math.log(big_g) + float(special.exp1(big_g)))

    def closed_mean_mass(self, s):
        # exact via mu = rho + s Q(1-s)
        return self.closed_rate_integral(s) + s * self.tail_quantile(s)

    def closed_scale(self, s, beta):
        if beta == 1.0:
            return self.closed_rate_integral(s) / s
        return None


class Weibull(TailModel):
    """Weibull(shape) with unit scale; Q(1-t) = (ln(1/t))^{1/shape}."""

    name = "weibull"
    domain_label = GUMBEL_DOMAIN
    has_tail_rate = True

    def __init__(self, shape: float = 1.0):
        if not shape > 0.0:
            raise ValueError("shape must be strictly positive")
        self.shape = float(shape)
        self.params = (self.shape,)

    def _quantile_lower(self, s):
        return (-np.log1p(-s)) ** (1.0 / self.shape)

    def _tail_quantile_small(self, t):
        return (-np.log(t)) ** (1.0 / self.shape)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x <= 0.0, 0.0, -np.expm1(-(np.maximum(x, 0.0) ** self.shape)))

    def tail_density(self, t):
        t = np.asarray(t, dtype=float)
        k = self.shape
        return (-np.log(t)) ** (1.0 / k - 1.0) / (k * t)

    def tail_rate(self, u):
        u = np.asarray(u, dtype=float)
        k = self.shape
        return (-np.log(u)) ** (1.0 / k - 1.0) / k

    def closed_rate_integral(self, s):
        k = self.shape
        big_l = -math.log(s)
        return float(special.gamma(1.0 / k) / k * special.gammaincc(1.0 / k, big_l))

    def closed_mean_mass(self, s):
        k = self.shape
        big_l = -math.log(s)
        return float(special.gamma(1.0 + 1.0 / k) * special.gammaincc(1.0 + 1.0 / k, big_l))

    def closed_scale(self, s, beta):
        if beta == 1.0:
            return self.closed_rate_integral(s) / s
        return None


class Normal(TailModel):
    """Standard normal; quantile via the library inverse CDF."""

    name = "normal"
    domain_label = GUMBEL_DOMAIN

    def __init__(self):
        self.params = ()

    def _quantile_lower(self, s):
        return special.ndtri(s)

    def _tail_quantile_small(self, t):
        return -special.ndtri(t)

    def cdf(self, x):
        return special.ndtr(np.asarray(x, dtype=float))

    def tail_density(self, t):
        return 1.0 / _norm_pdf(special.ndtri(np.asarray(t, dtype=float)))

    def closed_mean_mass(self, s):
        # int_z^inf x phi(x) dx = phi(z)
        return float(_norm_pdf(self.tail_quantile(s)))


class LogNormal(TailModel):
    """Lognormal(0, 1); Q(s) = exp(Phi^{-1}(s))."""

    name = "lognormal"
    domain_label = GUMBEL_DOMAIN

    def __init__(self):
        self.params = ()

    def _quantile_lower(self, s):
        return np.exp(special.ndtri(s))

    def _tail_quantile_small(self, t):
        return np.exp(-special.ndtri(t))

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        pos = x > 0.0
        out[pos] = special.ndtr(np.log(x[pos]))
        return out if out.ndim else float(out)

    def tail_density(self, t):
        z = -special.ndtri(np.asarray(t, dtype=float))
        return np.exp(z) / _norm_pdf(z)

    def closed_mean_mass(self, s):
        # int_z^inf e^x phi(x) dx = sqrt(e) * Phi(1 - z), z the normal tail quantile
        z = -float(special.ndtri(s)) if s <= 0.5 else float(special.ndtri(1.0 - s))
        return float(math.sqrt(math.e) * special.ndtr(1.0 - z))


class Gamma(TailModel):
    """Gamma(shape) with unit rate."""

    name = "gamma"
    domain_label = GUMBEL_DOMAIN

    def __init__(self, shape: float):
        if not shape > 0.0:
            raise ValueError("shape must be strictly positive")
        self.shape = float(shape)
        self.params = (self.shape,)

    def _quantile_lower(self, s):
        return special.gammaincinv(self.shape, s)

    def _tail_quantile_small(self, t):
        return special.gammainccinv(self.shape, t)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x <= 0.0, 0.0, special.gammainc(self.shape, np.maximum(x, 0.0)))

    def _pdf(self, x):
        k = self.shape
        return np.exp((k - 1.0) * np.log(x) - x - special.gammaln(k))

    def tail_density(self, t):
        return 1.0 / self._pdf(self.tail_quantile(t))

    def closed_mean_mass(self, s):
        # int_x^inf u f(u) du = shape * Gammaincc(shape+1, x)
        x = self.tail_quantile(s)
        return float(self.shape * special.gammaincc(self.shape + 1.0, x))


class Pareto(TailModel):
    """Pareto(index a); Q(1-t) = t^{-1/a}.  Frechet domain, negative control."""

    name = "pareto"
    domain_label = FRECHET_DOMAIN

    def __init__(self, index: float):
        if not index > 0.0:
            raise ValueError("index must be strictly positive")
        self.index = float(index)
        self.params = (self.index,)

    def _quantile_lower(self, s):
        return np.exp(-np.log1p(-s) / self.index)

    def _tail_quantile_small(self, t):
        return np.asarray(t, dtype=float) ** (-1.0 / self.index)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x <= 1.0, 0.0, -np.expm1(-self.index * np.log(np.maximum(x, 1.0))))

    def tail_density(self, t):
        t = np.asarray(t, dtype=float)
        a = self.index
        return t ** (-1.0 / a - 1.0) / a

    def closed_mean_mass(self, s):
        a = self.index
        if a <= 1.0:
            return math.inf
        return a * s ** (1.0 - 1.0 / a) / (a - 1.0)

    def closed_scale(self, s, beta):
        a = self.index
        if a * beta <= 1.0:
            return math.inf
        return s ** (-1.0 / a) / (a * beta - 1.0)


class Uniform(TailModel):
    """Uniform(0, 1); short upper tail, negative control."""

    name = "uniform"
    domain_label = WEIBULL_DOMAIN

    def __init__(self):
        self.params = ()

    def _quantile_lower(self, s):
        return np.asarray(s, dtype=float) + 0.0

    def _tail_quantile_small(self, t):
        return 1.0 - np.asarray(t, dtype=float)

    def cdf(self, x):
        return np.clip(np.asarray(x, dtype=float), 0.0, 1.0)

    def tail_density(self, t):
        return np.ones_like(np.asarray(t, dtype=float))

    def closed_mean_mass(self, s):
        return s - 0.5 * s * s

    def closed_scale(self, s, beta):
        return s / (beta + 1.0)

    def closed_variance(self, s):
        return s**3 / 3.0 - s**4 / 4.0


class AffineModel(TailModel):
    """scale * X + shift for a base model X; Q_Y = scale * Q_X + shift."""

    def __init__(self, base: TailModel, scale: float = 1.0, shift: float = 0.0):
        if not scale > 0.0:
            raise ValueError("scale must be strictly positive")
        self.base = base
        self.scale = float(scale)
        self.shift = float(shift)
        self.name = f"affine[{base.name}]"
        self.params = base.params + (self.scale, self.shift)
        self.domain_label = base.domain_label
        self.has_tail_rate = base.has_tail_rate

    def _quantile_lower(self, s):
        return self.scale * self.base._quantile_lower(s) + self.shift

    def _tail_quantile_small(self, t):
        return self.scale * self.base._tail_quantile_small(t) + self.shift

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return self.base.cdf((x - self.shift) / self.scale)

    def tail_density(self, t):
        return self.scale * self.base.tail_density(t)

    def tail_rate(self, u):
        return self.scale * self.base.tail_rate(u)

    def closed_mean_mass(self, s):
        inner = self.base.closed_mean_mass(s)
        if inner is None:
            return None
        return self.scale * inner + s * self.shift

    def closed_scale(self, s, beta):
        inner = self.base.closed_scale(s, beta)
        if inner is None:
            return None
        return self.scale * inner

    def closed_variance(self, s):
        inner = self.base.closed_variance(s)
        if inner is None:
            return None
        return self.scale**2 * inner

    def closed_rate_integral(self, s):
        inner = self.base.closed_rate_integral(s)
        if inner is None:
            return None
        return self.scale * inner


class CatalogEntry:
    """A catalog model plus a note on where its closed forms come from."""

    def __init__(self, model: TailModel, notes: str):
        self.model = model
        self.notes = notes

    def __repr__(self):
        return f"<CatalogEntry {self.model.describe()}>"


def catalog() -> list[CatalogEntry]:
    """Default model catalog used by demos and the limit-check suite."""
    return [
        CatalogEntry(Exponential(1.0), "all tail functionals in elementary closed form"),
        CatalogEntry(Gumbel(0.0, 1.0), "rate integral closed via the exponential integral E1"),
        CatalogEntry(Weibull(2.0), "rate integral and mean mass closed via incomplete gamma"),
        CatalogEntry(Normal(), "mean mass closed: mu(s) = phi(Q(1-s))"),
        CatalogEntry(LogNormal(), "mean mass closed: mu(s) = sqrt(e) Phi(1 - ln Q(1-s))"),
        CatalogEntry(Gamma(2.0), "mean mass closed via incomplete gamma"),
        CatalogEntry(Pareto(2.0), "polynomial tail, scale functional closed for a*beta > 1"),
        CatalogEntry(Uniform(), "bounded support, everything elementary"),
    ]


_MODEL_FACTORIES = {
    # name -> (factory, min arity, max arity)
    "exponential": (Exponential, 0, 1),
    "gumbel": (Gumbel, 0, 2),
    "weibull": (Weibull, 1, 1),
    "normal": (Normal, 0, 0),
    "lognormal": (LogNormal, 0, 0),
    "gamma": (Gamma, 1, 1),
    "pareto": (Pareto, 1, 1),
    "uniform": (Uniform, 0, 0),
}

_DESCRIPTOR_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\((.*)\))?\s*$")


def parse_model(text: str) -> TailModel:
    """Build a model from a descriptor like ``"weibull(2.0)"``.

    The descriptor grammar is ``name(p1,p2,...)``; the parameter list may
    be empty or absent when the model has defaults.
    """
    m = _DESCRIPTOR_RE.match(text)
    if m is None:
        raise ValueError(f"cannot parse model descriptor {text!r}")
    name = m.group(1).lower()
    if name not in _MODEL_FACTORIES:
        known = ", ".join(sorted(_MODEL_FACTORIES))
        raise ValueError(f"unknown model {name!r}; known models: {known}")
    raw = m.group(2)
    params = []
    if raw is not None and raw.strip():
        for piece in raw.split(","):
            try:
                params.append(float(piece))
            except ValueError:
                raise ValueError(
                    f"bad parameter {piece.strip()!r} in descriptor {text!r}"
                ) from None
    factory, lo, hi = _MODEL_FACTORIES[name]
    if not lo <= len(params) <= hi:
        raise ValueError(
            f"model {name!r} takes between {lo} and {hi} parameters, got {len(params)}"
        )
    return factory(*params)

"""Centered and scaled tail-sum statistics and their replicated experiments.

Three statistics are computed from the top k order statistics of a sample
of size n, each normalized by sqrt(k) and the tail scale c(k/n):

    T1 = (S_k - n*mu(k/n)) / (sqrt(k) c(k/n))          limit N(0, 2)
    T2 = sqrt(k) (X_{n-k,n} - Q(1-k/n)) / c(k/n)       limit N(0, 1)
    T3 = (S_k - k X_{n-k,n} - n*rho(k/n)) / (sqrt(k) c(k/n))   limit N(0, 1)

where S_k sums the top k values.  Because rho(s) = mu(s) - s Q(1-s)
exactly, T3 = T1 - T2 holds replicate by replicate up to quadrature noise;
that identity is a strong internal consistency check and is exercised in
the tests.  Two auxiliary statistics ride along: MAX, the normalized
sample maximum against its Gumbel limit, and BDH, the rescaled uniform
tail mass n(1-U_{n-k,n})/k which concentrates at 1.

Experiments run replicates in parallel; every replicate owns a dedicated
counter-based stream and writes into its own slot of a preallocated
array, so results are byte-identical for any thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .errors import NumericError, QuadratureError
from .functionals import rate_integral, tail_mean, tail_scale
from .models import TailModel
from .sampling import (
    ReplicateDraw,
    SeedSpec,
    balkema_dehaan_stat,
    draw_sample_max,
    draw_top_k,
)

STATISTIC_IDS = ("T1", "T2", "T3", "MAX", "BDH")

# Fraction of replicates allowed to produce non-finite statistics before
# the experiment is considered numerically broken.
FAILURE_BUDGET = 0.001


@dataclass(frozen=True)
class KRule:
    """Rule mapping a sample size n to the number of top values k.

    The power rule k = ceil(coeff * n^gamma) with 0 < gamma < 1 keeps
    k -> infinity while k/n -> 0 along any growing n grid, which is the
    regime all the limits here assume.  A fixed rule is provided for
    diagnostics and does not promise that regime.
    """

    kind: str = "power"
    coeff: float = 1.0
    gamma: float = 0.4
    fixed_k: int = 0

    def __post_init__(self):
        if self.kind not in ("power", "fixed"):
            raise ValueError("k rule kind must be 'power' or 'fixed'")
        if self.kind == "power":
            if not self.coeff > 0.0:
                raise ValueError("power rule needs coeff > 0")
            if not 0.0 < self.gamma < 1.0:
                raise ValueError("power rule needs gamma in (0, 1)")
        elif self.fixed_k < 1:
            raise ValueError("fixed rule needs fixed_k >= 1")

    def resolve(self, n: int) -> int:
        n = int(n)
        if self.kind == "power":
            k = math.ceil(self.coeff * n**self.gamma)
        else:
            k = self.fixed_k
        if not 1 <= k < n:
            raise ValueError(f"k rule gives k={k} outside [1, {n - 1}] for n={n}")
        return k


@dataclass(frozen=True)
class CellFunctionals:
    """Model functionals at s = k/n, computed once per experiment cell."""

    n: int
    k: int
    s: float
    scale: float        # c(k/n)
    mean_mass: float    # mu(k/n)
    rate_mass: float    # rho(k/n)
    threshold_q: float  # Q(1 - k/n)


def cell_functionals(model: TailModel, n: int, k: int) -> CellFunctionals:
    n = int(n)
    k = int(k)
    if not 1 <= k < n:
        raise ValueError("need 1 <= k < n")
    s = k / n
    return CellFunctionals(
        n=n,
        k=k,
        s=s,
        scale=tail_scale(model, s),
        mean_mass=tail_mean(model, s),
        rate_mass=rate_integral(model, s, extended=True),
        threshold_q=model.tail_quantile(s),
    )


def _functionals_for(draw: ReplicateDraw, model, cf):
    if cf is None:
        return cell_functionals(model, draw.n, draw.k)
    if (cf.n, cf.k) != (draw.n, draw.k):
        raise ValueError("cell functionals do not match the draw's (n, k)")
    return cf


def statistic_T1(draw: ReplicateDraw, model: TailModel, cf: CellFunctionals | None = None) -> float:
    """Normalized centered sum of the top k values; limit N(0, 2)."""
    cf = _functionals_for(draw, model, cf)
    s_k = math.fsum(draw.top_x)
    return (s_k - draw.n * cf.mean_mass) / (math.sqrt(draw.k) * cf.scale)


def statistic_T2(draw: ReplicateDraw, model: TailModel, cf: CellFunctionals | None = None) -> float:
    """Normalized intermediate order statistic; limit N(0, 1)."""
    cf = _functionals_for(draw, model, cf)
    return math.sqrt(draw.k) * (draw.threshold_x - cf.threshold_q) / cf.scale


def statistic_T3(draw: ReplicateDraw, model: TailModel, cf: CellFunctionals | None = None) -> float:
    """Normalized sum of excesses over the threshold; limit N(0, 1)."""
    cf = _functionals_for(draw, model, cf)
    s_k = math.fsum(draw.top_x)
    num = s_k - draw.k * draw.threshold_x - draw.n * cf.rate_mass
    return num / (math.sqrt(draw.k) * cf.scale)


def mean_excess(draw: ReplicateDraw) -> float:
    """Average exceedance of the top k values over the threshold.

    The ratio mean_excess / c(k/n) tends to 1 in probability, which ties
    the abstract tail scale to a quantity estimable from data.
    """
    return math.fsum(draw.top_x) / draw.k - draw.threshold_x


@dataclass(frozen=True)
class GaussianMoments:
    """Second moments of the two Gaussian pieces behind the sum statistic."""

    varZ: float
    varY: float
    cov: float

    @property
    def varDiff(self) -> float:
        return self.varZ + self.varY - 2.0 * self.cov


def limiting_gaussian_moments(model: TailModel, n: int, k: int) -> GaussianMoments:
    """varZ = (n/k) sigma^2(k/n)/c(k/n)^2 plus the bridge moments 1 - k/n.

    varZ tends to 2 and varDiff = varZ - varY tends to 1 as k/n -> 0,
    matching the N(0,2) and N(0,1) limits of T1 and T3.
    """
    from .functionals import tail_variance

    n = int(n)
    k = int(k)
    if not 1 <= k < n:
        raise ValueError("need 1 <= k < n")
    s = k / n
    c = tail_scale(model, s)
    var_z = tail_variance(model, s) / (s * c * c)
    return GaussianMoments(varZ=var_z, varY=1.0 - s, cov=1.0 - s)


def gumbel_norming(model: TailModel, n: int):
    """(a_n, b_n) with b_n = Q(1 - 1/n) and a_n = c(1/n).

    These norm the sample maximum: (X_{n,n} - b_n)/a_n converges to the
    standard Gumbel law for every model in the catalog's Gumbel class.
    """
    n = int(n)
    if n < 2:
        raise ValueError("need n >= 2")
    return tail_scale(model, 1.0 / n), model.tail_quantile(1.0 / n)


def gumbel_cdf(x):
    return np.exp(-np.exp(-np.asarray(x, dtype=np.float64)))


TARGET_CDFS = {
    "T1": lambda x: special.ndtr(np.asarray(x) / math.sqrt(2.0)),
    "T2": lambda x: special.ndtr(np.asarray(x)),
    "T3": lambda x: special.ndtr(np.asarray(x)),
    "MAX": gumbel_cdf,
}

TARGET_VARIANCES = {
    "T1": 2.0,
    "T2": 1.0,
    "T3": 1.0,
    "MAX": math.pi**2 / 6.0,
}

DEFAULT_TOLERANCES = {
    "T1": {"mean": (-0.1, 0.1), "var": (1.8, 2.2), "ks": 0.05},
    "T2": {"var": (0.85, 1.15), "ks": 0.05},
    "T3": {"var": (0.85, 1.15), "ks": 0.05},
    "MAX": {"ks": 0.05},
    "BDH": {"mean": (0.9, 1.1), "sd_factor": 2.0},
}


@dataclass
class StatSample:
    """Replicate values of one statistic in one (model, n, k) cell."""

    statistic_id: str
    n: int
    k: int
    values: np.ndarray
    seed: SeedSpec
    numeric_failures: int = 0


@dataclass
class StatSummary:
    statistic_id: str
    count: int
    numeric_failures: int
    mean: float
    variance: float
    skewness: float
    excess_kurtosis: float
    ks: float
    ad: float
    target_variance: float
    verdict: str
    failed_bounds: tuple = ()


@dataclass
class NormalityReport:
    """Summary of every configured statistic for one (model, n, k) cell."""

    model: str
    n: int
    k: int
    replicates: int
    master_seed: int
    summaries: list

    @property
    def passed(self) -> bool:
        return all(s.verdict == "pass" for s in self.summaries)


@dataclass
class ExperimentResult:
    reports: list = field(default_factory=list)
    samples: dict = field(default_factory=dict)  # (model, n) -> {stat: array}

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)


def _central_moments(values: np.ndarray):
    mean = float(np.mean(values))
    d = values - mean
    m2 = float(np.mean(d * d))
    m3 = float(np.mean(d**3))
    m4 = float(np.mean(d**4))
    return mean, m2, m3, m4


def summarize_statistic(stat: str, values: np.ndarray, failures: int,
                        tolerances=None) -> StatSummary:
    """Moments, GOF distances and a verdict for one statistic's replicates.

    Fewer than two finite values cannot support a variance, so the verdict
    degrades to "insufficient" rather than guessing.
    """
    from .gof import anderson_darling, ks_distance

    tol = dict(DEFAULT_TOLERANCES.get(stat, {}))
    if tolerances:
        tol.update(tolerances)
    r = int(values.size)
    nan = float("nan")
    # BDH's reference spread depends on k; _verdict_bdh fills it in.
    target_var = TARGET_VARIANCES.get(stat, nan)

    if r < 2:
        mean = float(values[0]) if r else nan
        return StatSummary(
            statistic_id=stat, count=r, numeric_failures=failures,
            mean=mean, variance=nan, skewness=nan, excess_kurtosis=nan,
            ks=nan, ad=nan, target_variance=target_var,
            verdict="insufficient", failed_bounds=("variance undefined",),
        )

    mean, m2, m3, m4 = _central_moments(values)
    variance = float(np.var(values, ddof=1))
    skew = m3 / m2**1.5 if m2 > 0.0 else nan
    kurt = m4 / (m2 * m2) - 3.0 if m2 > 0.0 else nan

    cdf = TARGET_CDFS.get(stat)
    ks = ks_distance(values, cdf) if cdf is not None else nan
    ad = anderson_darling(values, cdf) if cdf is not None else nan

    failed = []
    if "mean" in tol:
        lo, hi = tol["mean"]
        if not lo <= mean <= hi:
            failed.append(f"mean {mean:.4g} outside [{lo:g}, {hi:g}]")
    if "var" in tol:
        lo, hi = tol["var"]
        if not lo <= variance <= hi:
            failed.append(f"var {variance:.4g} outside [{lo:g}, {hi:g}]")
    if "ks" in tol and cdf is not None:
        if not ks <= tol["ks"]:
            failed.append(f"ks {ks:.4g} above {tol['ks']:g}")
    verdict = "pass" if not failed else "fail"
    return StatSummary(
        statistic_id=stat, count=r, numeric_failures=failures,
        mean=mean, variance=variance, skewness=skew, excess_kurtosis=kurt,
        ks=ks, ad=ad, target_variance=target_var,
        verdict=verdict, failed_bounds=tuple(failed),
    )


def _run_cell(model, n, k, replicates, master_seed, stream_base,
              statistics, threads):
    cf = cell_functionals(model, n, k)
    need_draw = any(s in statistics for s in ("T1", "T2", "T3", "BDH"))
    need_max = "MAX" in statistics
    if need_max:
        a_n, b_n = gumbel_norming(model, n)

    arrays = {s: np.full(replicates, np.nan) for s in statistics}

    def work(lo, hi):
        for r in range(lo, hi):
            if need_draw:
                draw = draw_top_k(
                    SeedSpec(master_seed, stream_base + r), n, k, model
                )
                if "T1" in arrays:
                    arrays["T1"][r] = statistic_T1(draw, model, cf)
                if "T2" in arrays:
                    arrays["T2"][r] = statistic_T2(draw, model, cf)
                if "T3" in arrays:
                    arrays["T3"][r] = statistic_T3(draw, model, cf)
                if "BDH" in arrays:
                    arrays["BDH"][r] = balkema_dehaan_stat(draw)
            if need_max:
                x = draw_sample_max(
                    SeedSpec(master_seed, stream_base + replicates + r),
                    n,
                    model,
                )
                arrays["MAX"][r] = (x - b_n) / a_n

    if threads <= 1:
        work(0, replicates)
    else:
        chunk = max(1, -(-replicates // (threads * 4)))
        bounds = [
            (lo, min(lo + chunk, replicates))
            for lo in range(0, replicates, chunk)
        ]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for fut in [pool.submit(work, lo, hi) for lo, hi in bounds]:
                fut.result()
    return arrays, cf


def run_experiment(config, threads: int = 1) -> ExperimentResult:
    """Replicated statistics for every (model, n) cell of the config.

    Stream ids are a pure function of the cell's position and the
    replicate index, never of thread scheduling, so the same config and
    master seed reproduce identical reports at any parallelism level.
    Replicates whose statistics come back non-finite are dropped from the
    summaries and counted; more than 0.1% of them aborts the run.
    """
    from .config import ExperimentConfig

    if not isinstance(config, ExperimentConfig):
        raise TypeError("run_experiment expects an ExperimentConfig")
    config.validate()
    threads = max(1, int(threads))
    result = ExperimentResult()

    cell_ordinal = 0
    for model in config.model_objects():
        for n in config.n_values:
            k = config.k_rule.resolve(n)
            stream_base = cell_ordinal * 2 * config.replicates
            cell_ordinal += 1
            try:
                arrays, _cf = _run_cell(
                    model, n, k, config.replicates, config.master_seed,
                    stream_base, config.statistics, threads,
                )
            except QuadratureError as exc:
                raise NumericError(
                    f"functionals failed for {model.describe()} at n={n}: {exc}"
                ) from exc

            summaries = []
            cell_samples = {}
            for stat in config.statistics:
                raw = arrays[stat]
                finite = np.isfinite(raw)
                failures = int(raw.size - np.count_nonzero(finite))
                if failures > FAILURE_BUDGET * raw.size:
                    raise NumericError(
                        f"{failures} of {raw.size} replicates non-finite for "
                        f"{stat} ({model.describe()}, n={n})"
                    )
                values = raw[finite]
                tol = (config.tolerances or {}).get(stat)
                summary = summarize_statistic(stat, values, failures, tol)
                if stat == "BDH" and summary.verdict != "insufficient":
                    summary = _verdict_bdh(summary, k, tol)
                summaries.append(summary)
                cell_samples[stat] = StatSample(
                    statistic_id=stat, n=n, k=k, values=raw,
                    seed=SeedSpec(config.master_seed, stream_base),
                    numeric_failures=failures,
                )
            result.reports.append(
                NormalityReport(
                    model=model.describe(), n=n, k=k,
                    replicates=config.replicates,
                    master_seed=config.master_seed,
                    summaries=summaries,
                )
            )
            result.samples[(model.describe(), n)] = cell_samples
    return result


def _verdict_bdh(summary: StatSummary, k: int, tolerances=None) -> StatSummary:
    """BDH gets a spread bound relative to 1/sqrt(k) on top of the mean gate."""
    tol = dict(DEFAULT_TOLERANCES["BDH"])
    if tolerances:
        tol.update(tolerances)
    factor = tol.get("sd_factor")
    failed = list(summary.failed_bounds)
    if factor:
        sd = math.sqrt(summary.variance)
        ref = 1.0 / math.sqrt(k)
        if not ref / factor <= sd <= ref * factor:
            failed.append(
                f"sd {sd:.4g} outside factor {factor:g} of {ref:.4g}"
            )
    verdict = "pass" if not failed else "fail"
    return StatSummary(
        statistic_id=summary.statistic_id, count=summary.count,
        numeric_failures=summary.numeric_failures, mean=summary.mean,
        variance=summary.variance, skewness=summary.skewness,
        excess_kurtosis=summary.excess_kurtosis, ks=summary.ks,
        ad=summary.ad, target_variance=1.0 / k,
        verdict=verdict, failed_bounds=tuple(failed),
    )

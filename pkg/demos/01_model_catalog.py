#!/usr/bin/env python3
"""Tour of the model catalog.

Every model exposes the same tail interface: quantile, tail quantile,
tail density where one exists, and the functionals c(s), sigma2(s),
mu(s) computed from it.  The catalog mixes members of the Gumbel
domain (where the limit theory applies) with heavy-tailed and
short-tailed controls (where it must visibly break).
"""

from extremesum import (
    Exponential, Gumbel, Weibull, LogNormal, Normal, Gamma, Pareto, Uniform,
    tail_scale, tail_variance, tail_mean,
)

catalog = [
    Exponential(1.0),
    Gumbel(),
    Weibull(2.0),
    LogNormal(),
    Normal(),
    Gamma(2.0),
    Pareto(1.0),
    Pareto(2.0),
    Uniform(),
]

print(f"{'model':<16} {'domain':<10} {'Q(0.99)':>10} {'Q(0.999)':>10}")
for m in catalog:
    print(f"{m.describe():<16} {m.domain_label:<10} "
          f"{m.quantile(0.99):>10.4f} {m.quantile(0.999):>10.4f}")

print()
print("tail scale c(s) as the tail mass s shrinks")
print(f"{'model':<16}", *(f"{s:>12g}" for s in (0.1, 0.01, 0.001)))
for m in catalog:
    row = []
    for s in (0.1, 0.01, 0.001):
        try:
            row.append(f"{tail_scale(m, s):>12.5f}")
        except Exception as exc:
            row.append(f"{type(exc).__name__:>12}")
    print(f"{m.describe():<16}", *row)

# In the Gumbel domain c(s) flattens out (it is slowly varying at 0);
# for Pareto it blows up like a power of 1/s, and that difference is
# exactly what the limit checks in demo 03 quantify.

print()
exp = Exponential(1.0)
print("Exponential(1) closed forms, the main oracle used in the tests:")
for s in (0.5, 0.1, 0.01):
    print(f"  s={s:<5g} c={tail_scale(exp, s):.6f}"
          f"  sigma2={tail_variance(exp, s):.6f}"
          f"  mu={tail_mean(exp, s):.6f}")
print("  (c = 1, sigma2 = 2s - s^2, mu = s(1 - ln s) exactly)")

print()
print("models carrying an analytic tail rate r (the D* subfamily):")
for m in catalog:
    if m.has_tail_rate:
        print(f"  {m.describe():<16} r(0.01) = {m.tail_rate(0.01):.6f}"
              f"   c(0.01) = {tail_scale(m, 0.01):.6f}")

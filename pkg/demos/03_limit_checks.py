#!/usr/bin/env python3
"""The limit-check suite, including the cases that are supposed to fail.

Each check evaluates a ratio or residual along a shrinking grid of tail
masses and compares the last value against its limit target.  On
Gumbel-domain models with well-behaved tails everything converges; on
the heavy- and short-tailed controls the same checks miss their targets
by design, and for LogNormal the convergence is real but so slow that
desk-scale grids still report failures.  Both kinds of FAIL rows below
are correct output, not bugs.
"""

from extremesum import Exponential, LogNormal, Pareto, run_limit_suite


def show(model, checks=None):
    kwargs = {} if checks is None else {"checks": checks}
    reports = run_limit_suite(model, **kwargs)
    print(f"{model.describe()}:")
    for rep in reports:
        tag = "ok  " if rep.passed else "FAIL"
        label = rep.check_id
        if rep.params:
            label += "(" + ",".join(f"{k}={v:g}" for k, v in rep.params) + ")"
        tail = f"   [{rep.note}]" if rep.note else ""
        print(f"  {tag} {label:<44} final_error={rep.final_error:.3e} "
              f"tol={rep.tolerance:g}{tail}")
    print()


# A clean member of the Gumbel domain: every check converges.
show(Exponential(1.0))

# LogNormal is in the domain too, but its tail functionals vary on a
# log-of-log scale; at s = 1e-6 several ratios are still far from their
# limits.  The suite reports that honestly instead of stretching
# tolerances until everything looks green.
show(LogNormal())

# Pareto(1) is the heavy-tailed control.  The domain ratio settles at
# 1.5 instead of 2, a clear fingerprint of a Frechet-domain tail, and
# the remaining checks are flagged rather than silently skipped.
show(Pareto(1.0), checks=("domain_ratio", "scale_slow_variation"))

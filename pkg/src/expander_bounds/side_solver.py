"""Per-side constraint solver for truncated out-degree profiles.

One side of a bisection with out-degree cap ``cap`` carries the weight family
``beta * gamma^i * C(delta, i)`` on out-degrees ``i in [0, cap]``. Two
constraints pin the two parameters: the weights must sum to 1 (mass) and
their mean must hit the per-vertex crossing budget ``(1 - eta) * delta / 2``.
The map ``gamma -> mean`` is strictly increasing, so a bracketing bisection
finds gamma, after which ``beta = 1 / S0(gamma)`` normalizes the mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .combinatorics import binomial_log_row, log_binomial, truncated_log_moments

__all__ = [
    "BetaUnderflow",
    "InfeasibleTarget",
    "SideSolution",
    "log_F",
    "profile_residuals",
    "solve_side",
    "target_mean",
]

# Bisection stops when the bracket has shrunk to this width relative to its
# upper end.
_REL_WIDTH = 1e-13
_MAX_BRACKET_STEPS = 5000


class InfeasibleTarget(ValueError):
    """No profile supported on {0..cap} can average the requested mean."""


class BetaUnderflow(ValueError):
    """The normalizer 1/S0 is too small for a double.

    Happens when the cap pins the mean (target mean a hair below the cap at
    large delta), which drives gamma and log S0 past what a double can carry
    as a plain beta.  The pair's growth exponent is still finite there, but
    no witness can be reported, so certifier probes treat the eta as failed.
    That is conservative: it can only push the certified eta upward, and the
    rounded eta that ends up in a certificate never lands this close to a
    cap, so final re-verification is unaffected.
    """


def target_mean(delta: int, eta: float) -> float:
    """Required mean out-degree per side, (1 - eta) * delta / 2."""
    return (1.0 - eta) * delta / 2.0


@dataclass(frozen=True)
class SideSolution:
    """Solved (beta, gamma) for one side, with independently recheckable residuals.

    ``log_beta`` carries the normalizer in natural-log form so it survives
    even when ``beta`` itself underflows at very large delta. The residuals
    are produced by the same direct summation an external verifier runs, so
    they measure the artifact numbers, not internal solver state.
    """

    delta: int
    cap: int
    eta: float
    beta: float
    gamma: float
    residual_mass: float
    residual_mean: float
    log_beta: float


def profile_residuals(
    delta: int, cap: int, eta: float, beta: float, gamma: float
) -> tuple[float, float]:
    """Residuals of the two side constraints at the given (beta, gamma).

    Returns ``(|sum_i w_i - 1|, |sum_i i * w_i - target|)`` for
    ``w_i = beta * gamma^i * C(delta, i)``, summed directly over i = 0..cap.
    """
    if not (beta > 0.0 and math.isfinite(beta)):
        raise ValueError("beta must be a finite positive real")
    if not (gamma > 0.0 and math.isfinite(gamma)):
        raise ValueError("gamma must be a finite positive real")
    row = binomial_log_row(delta)
    idx = np.arange(cap + 1)
    weights = np.exp(math.log(beta) + idx * math.log(gamma) + row[: cap + 1])
    mass = float(weights.sum())
    weighted = float(np.dot(idx, weights))
    return abs(mass - 1.0), abs(weighted - target_mean(delta, eta))


def _mean_at(delta: int, cap: int, gamma: float) -> float:
    return truncated_log_moments(delta, cap, gamma)[2]


def solve_side(delta: int, cap: int, eta: float) -> SideSolution:
    """Solve the mass and mean constraints for one side at out-degree cap ``cap``.

    The bracket for gamma is grown by doubling (or halving) from 1 until it
    straddles the target mean, then bisected to relative width 1e-13. The
    whole procedure is deterministic: identical inputs give bit-identical
    outputs.

    Raises
    ------
    InfeasibleTarget
        When the target mean falls outside (0, cap). A profile supported on
        {0..cap} has mean strictly below cap and strictly above 0, so both
        boundary values are rejected.
    """
    if not isinstance(delta, int) or delta < 1:
        raise ValueError("delta must be a positive integer")
    if not isinstance(cap, int) or not 1 <= cap <= delta:
        raise ValueError("cap must be an integer in [1, delta]")
    if not isinstance(eta, (int, float)) or not 0.0 <= eta < 1.0:
        raise ValueError("eta must lie in [0, 1)")
    target = target_mean(delta, eta)
    if not 0.0 < target < cap:
        raise InfeasibleTarget(
            f"target mean {target!r} outside (0, {cap}) for delta={delta}, eta={eta!r}"
        )

    lo = hi = 1.0
    steps = 0
    while _mean_at(delta, cap, hi) <= target:
        hi *= 2.0
        steps += 1
        if steps > _MAX_BRACKET_STEPS:
            raise RuntimeError("gamma bracket failed to grow past the target")
    while _mean_at(delta, cap, lo) >= target:
        lo *= 0.5
        steps += 1
        if steps > _MAX_BRACKET_STEPS:
            raise RuntimeError("gamma bracket failed to shrink below the target")
    while hi - lo > _REL_WIDTH * hi:
        mid = 0.5 * (lo + hi)
        if _mean_at(delta, cap, mid) < target:
            lo = mid
        else:
            hi = mid
    gamma = 0.5 * (lo + hi)

    log_s0 = truncated_log_moments(delta, cap, gamma)[0]
    log_beta = -log_s0
    beta = math.exp(log_beta)
    if beta == 0.0:
        # S0 past the double range: the caller gets a diagnosis instead of a
        # zero-beta witness.
        raise BetaUnderflow(
            f"beta underflows for delta={delta}, cap={cap}, eta={eta}: "
            f"log beta = {log_beta:.1f}"
        )
    residual_mass, residual_mean = profile_residuals(delta, cap, eta, beta, gamma)
    return SideSolution(
        delta=delta,
        cap=cap,
        eta=float(eta),
        beta=beta,
        gamma=gamma,
        residual_mass=residual_mass,
        residual_mean=residual_mean,
        log_beta=log_beta,
    )


def log_F(svec: Sequence[int]) -> float:
    """ln of prod_i C(delta, i)^{s_i} / s_i! for an out-degree count vector.

    The vector length fixes delta = len(svec) - 1. This is the per-side
    factor in the number of point configurations realizing the histogram
    ``svec``; its maximizers over fixed totals are the truncated profiles the
    solver produces.
    """
    counts = list(svec)
    if not counts:
        raise ValueError("svec must be non-empty")
    delta = len(counts) - 1
    terms = []
    for i, s in enumerate(counts):
        if not isinstance(s, int) or s < 0:
            raise ValueError("svec entries must be non-negative integers")
        if s == 0:
            continue
        terms.append(s * log_binomial(delta, i) - math.lgamma(s + 1))
    return math.fsum(terms)

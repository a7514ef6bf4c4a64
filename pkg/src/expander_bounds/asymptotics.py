"""One-sided-cap analysis: binomial reformulation, theta correction, alpha trend.

Capping the out-degree profile on one side only (at d = delta/2, leaving the
other side uncapped) turns the two profile constraints into statements about
binomial probabilities at parameter p = gamma / (gamma + 1):

    beta * (gamma + 1)^delta * P1          = 1
    beta * gamma * (gamma + 1)^(delta-1) * P2 = (1 - eta) / 2

with P1 = Pr[B(delta, p) <= d] and P2 = Pr[B(delta - 1, p) <= d - 1]. The
exact identity P1 = P2 + ((delta - d)/delta) * P3, where P3 is the point mass
at d, eliminates P2 and yields a scalar fixed point for gamma.

Everything here is computed with exact binomial sums; no normal
approximations. The headline quantity is alpha = eta * sqrt(delta), compared
against the classical constant 2*sqrt(ln 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .certifier import DEFAULT_MARGIN, DEFAULT_PRECISION, min_eta
from .combinatorics import binomial_log_row, binomial_pmf, binomial_tail, log_binomial

__all__ = [
    "AsymptoticPoint",
    "TWO_SQRT_LN2",
    "alpha_trend",
    "check_p1p3_identity",
    "solve_one_sided",
]

TWO_SQRT_LN2 = 2.0 * math.sqrt(math.log(2.0))

_FIXED_POINT_TOL = 1e-12
_DAMPED_BUDGET = 400


@dataclass(frozen=True)
class AsymptoticPoint:
    """Solved one-sided-cap state at (delta, eta) with cap d.

    p is the binomial parameter gamma / (gamma + 1); p1, p2, p3 are the
    cumulative, shifted-cumulative, and point binomial probabilities at the
    cap; theta = ((delta - d)/delta) * p3 / p1 is the correction that
    separates the capped system from the closed-form uncapped one; alpha is
    eta * sqrt(delta).
    """

    delta: int
    d: int
    eta: float
    gamma: float
    p: float
    p1: float
    p2: float
    p3: float
    theta: float
    alpha: float


def check_p1p3_identity(delta: int, d: int, gamma: float) -> float:
    """Absolute residual of P1 = P2 + ((delta - d)/delta) * P3.

    The three probabilities are expanded into their binomial terms and the
    whole signed collection is added in one exactly-rounded summation, so the
    returned residual measures only the per-term evaluation error (well below
    1e-12), not cancellation noise.
    """
    if not isinstance(delta, int) or delta < 1:
        raise ValueError("delta must be a positive integer")
    if not isinstance(d, int) or not 1 <= d <= delta:
        raise ValueError("need 1 <= d <= delta")
    if not gamma > 0.0 or not math.isfinite(gamma):
        raise ValueError("gamma must be a positive finite real")
    log_p = math.log(gamma) - math.log1p(gamma)
    log_q = -math.log1p(gamma)

    def term(n: int, k: int) -> float:
        return math.exp(log_binomial(n, k) + k * log_p + (n - k) * log_q)

    signed = [term(delta, i) for i in range(d + 1)]
    signed.extend(-term(delta - 1, i) for i in range(d))
    signed.append(-((delta - d) / delta) * term(delta, d))
    return abs(math.fsum(signed))


def solve_one_sided(
    delta: int, eta: float, d: int | None = None
) -> AsymptoticPoint:
    """Solve the one-sided-cap fixed point gamma = (1 - eta)/(1 + eta - 2*theta).

    The cap is d = delta/2 (delta must be even); d is overridable for
    diagnostics such as the cap-removed limit d = delta, where theta carries
    the factor (delta - d)/delta = 0 and gamma collapses to the closed form
    (1 - eta)/(1 + eta).

    Starts from theta = 0 and iterates with 0.5 damping until the raw
    residual drops below 1e-12. Where the contraction is slow (binomial mean
    pinned against the cap), the solve finishes by bisection on the bracketed
    fixed point instead; both paths land on the same unique root.
    """
    if not isinstance(delta, int) or delta < 2 or delta % 2 != 0:
        raise ValueError("delta must be a positive even integer >= 2")
    if not 0.0 < eta < 1.0:
        raise ValueError("eta must lie in (0, 1)")
    if d is None:
        d = delta // 2
    if not isinstance(d, int) or not 1 <= d <= delta:
        raise ValueError("need 1 <= d <= delta")

    frac = (delta - d) / delta
    row = binomial_log_row(delta)

    def theta_at(g: float) -> float:
        # P3/P1 as 1 / sum_{k<=d} pmf(k)/pmf(d): each summand is an exp of a
        # log difference, so the ratio stays accurate even where P1 itself
        # underflows (far-overshot gamma during bracketing).
        lp = math.log(g) - math.log1p(g)
        lq = -math.log1p(g)
        logterms = [row[k] + k * lp + (delta - k) * lq for k in range(d + 1)]
        peak = max(logterms)
        log_p1 = peak + math.log(math.fsum(math.exp(t - peak) for t in logterms))
        return frac * math.exp(logterms[d] - log_p1)

    def step(g: float) -> float:
        denom = 1.0 + eta - 2.0 * theta_at(g)
        if denom <= 0.0:
            raise ArithmeticError("fixed-point denominator collapsed")
        return (1.0 - eta) / denom

    # The map is increasing in gamma and the start sits below the unique
    # fixed point, so damped iterates climb toward it monotonically.
    gamma = (1.0 - eta) / (1.0 + eta)
    converged = False
    for _ in range(_DAMPED_BUDGET):
        proposal = step(gamma)
        if abs(proposal - gamma) < _FIXED_POINT_TOL:
            gamma = proposal
            converged = True
            break
        gamma += 0.5 * (proposal - gamma)
    if not converged:
        # Slow contraction (binomial mean pinned against the cap at large
        # delta and small eta): finish by bisection on step(g) - g. The
        # current iterate still lies below the fixed point.
        lo = gamma
        hi = max(2.0 * gamma, 1.0)
        for _ in range(200):
            if step(hi) <= hi:
                break
            lo, hi = hi, 2.0 * hi
        else:
            raise ArithmeticError(
                f"one-sided fixed point did not converge for delta={delta}, eta={eta}"
            )
        while hi - lo > 1e-14 * max(1.0, hi):
            mid = 0.5 * (lo + hi)
            if step(mid) > mid:
                lo = mid
            else:
                hi = mid
        gamma = 0.5 * (lo + hi)

    p = gamma / (gamma + 1.0)
    p1 = binomial_tail(delta, p, d)
    p2 = binomial_tail(delta - 1, p, d - 1)
    p3 = binomial_pmf(delta, p, d)
    return AsymptoticPoint(
        delta=delta,
        d=d,
        eta=eta,
        gamma=gamma,
        p=p,
        p1=p1,
        p2=p2,
        p3=p3,
        theta=theta_at(gamma),
        alpha=eta * math.sqrt(delta),
    )


def alpha_trend(
    delta_list: list[int],
    margin: float = DEFAULT_MARGIN,
    precision: int = DEFAULT_PRECISION,
) -> list[AsymptoticPoint]:
    """Certified eta and alpha = eta * sqrt(delta) for each even degree given.

    Each entry runs the full certification search and then solves the
    one-sided system at the certified eta, so the returned points carry the
    binomial diagnostics alongside alpha. Compare alpha against TWO_SQRT_LN2.
    """
    points = []
    for delta in delta_list:
        if not isinstance(delta, int) or delta < 4 or delta % 2 != 0:
            raise ValueError("alpha_trend requires even degrees >= 4")
        cert = min_eta(delta, margin, precision)
        points.append(solve_one_sided(delta, cert.eta))
    return points

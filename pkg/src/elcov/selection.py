"""Automatic constraint selection by matching a reference likelihood ratio.

Each selector tunes one imperfectly known constraint (clutter rank, noise
power, condition-number bound, or diagonal loading) so the likelihood ratio
of the resulting estimate lands as close as possible to the precomputed
invariant median ``lr0``.  Monotonicity of the LR in each constraint makes
the one-dimensional searches globally optimal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .estimators import SampleStats, cncml, rcml
from .exceptions import ConvergenceError, InputError, NoRootError, NumericalError
from .hermitian import EigenDecomposition
from .likelihood import (
    LambertBranch,
    _BRANCH_POINT,
    lambert_w,
    log_lr_rcml,
    log_lr_value,
    log_tail_lr,
)
from .metrics import nmf_statistic

__all__ = [
    "JointSelection",
    "KmaxSelection",
    "NoiseRoots",
    "RankSelection",
    "select_kmax",
    "select_loading",
    "select_rank",
    "select_rank_sigma",
    "sigma_el_roots",
    "sigma_ml",
]


@dataclass
class RankSelection:
    """Outcome of the rank walk: best rank plus the evaluated trail."""

    r_hat: int
    visited: list[tuple[int, float]]
    lr0: float


def select_rank(stats: SampleStats, r_init: int, lr0: float) -> RankSelection:
    """Pick the rank whose constrained-estimate LR is closest to ``lr0``.

    The matching distance is ``|log lr(r) - log lr0|``: the LR changes by
    orders of magnitude per rank step around the effective rank, so the
    ratio to the reference is the meaningful scale (raw differences
    ``|lr - lr0|`` saturate at ``lr0`` on the undershoot side and would
    always prefer it).  Because the LR is non-decreasing in the rank,
    stepping toward the ``lr(r) = lr0`` crossing and comparing its two
    neighbours yields the global optimum.  Ties, including equal-estimate
    plateaus, resolve to the smallest rank.
    """
    if not 0 < lr0 <= 1:
        raise InputError("lr0 must lie in (0, 1]")
    n = stats.n
    if not 0 <= r_init <= n:
        raise InputError(f"initial rank {r_init} outside [0, {n}]")
    log_lr0 = math.log(lr0)
    cache: dict[int, float] = {}

    def loglr(r: int) -> float:
        if r not in cache:
            cache[r] = log_lr_rcml(stats, r)
        return cache[r]

    def err(r: int) -> float:
        return abs(loglr(r) - log_lr0)

    r = r_init
    if loglr(r) < log_lr0:
        # climb while strictly below the target and the LR still grows
        while r < n and loglr(r) < log_lr0 and loglr(r + 1) > loglr(r):
            r += 1
        if loglr(r) < log_lr0:
            # topped out on the terminal plateau; slide to its smallest rank
            while r > 0 and loglr(r - 1) == loglr(r):
                r -= 1
            r_hat = r
        else:
            r_hat = min((r - 1, r), key=lambda rr: (err(rr), rr))
    elif loglr(r) > log_lr0:
        while r > 0 and loglr(r) > log_lr0:
            r -= 1
        if loglr(r) > log_lr0:
            r_hat = 0
        else:
            r_hat = min((r, r + 1), key=lambda rr: (err(rr), rr))
    else:
        r_hat = r
    visited = [(rank, math.exp(cache[rank])) for rank in sorted(cache)]
    return RankSelection(r_hat=r_hat, visited=visited, lr0=lr0)


def sigma_ml(sample_lambdas, r: int) -> float:
    """ML noise power for rank ``r``: mean of the ``N - r`` trailing eigenvalues."""
    d = np.asarray(sample_lambdas, dtype=float)
    if not 0 <= r < len(d):
        raise InputError(f"rank {r} outside [0, {len(d) - 1}]; the trailing mean needs r < N")
    return float(np.mean(d[r:]))


@dataclass
class NoiseRoots:
    """Noise powers whose tail-profile LR equals the reference.

    ``count`` follows the peak trichotomy: 0 when the reference exceeds the
    attainable maximum, 1 at the peak itself, else 2 roots bracketing the
    ML noise power.
    """

    count: int
    roots: tuple[float, ...]
    sigma_ml: float


def sigma_el_roots(sample_lambdas, r: int, lr0: float) -> NoiseRoots:
    """Closed-form noise-power roots of ``lr(t) = lr0`` for a fixed rank.

    The tail-profile LR peaks at the trailing-mean noise power; when two
    roots exist they are obtained from the two real Lambert W branches of
    the transformed equation.
    """
    if not 0 < lr0 <= 1:
        raise InputError("lr0 must lie in (0, 1]")
    d = np.asarray(sample_lambdas, dtype=float)
    s_ml = sigma_ml(d, r)
    if not s_ml > 0:
        raise InputError("trailing eigenvalues sum to zero; noise power is unidentifiable")
    log_peak = log_tail_lr(d, r, s_ml)
    log_lr0 = math.log(lr0)
    if abs(log_lr0 - log_peak) <= 1e-10:
        return NoiseRoots(count=1, roots=(s_ml,), sigma_ml=s_ml)
    if log_lr0 > log_peak:
        return NoiseRoots(count=0, roots=(), sigma_ml=s_ml)

    n = len(d)
    a = float(r - n)
    b = float(np.sum(d[r:]))
    c = log_lr0 - float(np.sum(np.log(d[r:]))) + a
    z = (b / a) * math.exp(-c / a)
    # rounding can push z a hair below the branch point when lr0 ~ peak
    z = max(z, _BRANCH_POINT)
    hi = math.exp(lambert_w(LambertBranch.PRINCIPAL, z) + c / a)
    lo = math.exp(lambert_w(LambertBranch.LOWER, z) + c / a)
    roots = (min(lo, hi), max(lo, hi))
    return NoiseRoots(count=2, roots=roots, sigma_ml=s_ml)


@dataclass
class JointSelection:
    """Jointly selected rank and noise power."""

    r_hat: int
    sigma2_hat: float
    chosen_from: str
    iterations: int


def select_rank_sigma(
    s_eig: EigenDecomposition,
    k: int,
    r_init: int,
    lr0: float,
    training: np.ndarray,
    steering: np.ndarray,
    max_iter: int = 50,
) -> JointSelection:
    """Alternating selection of rank and noise power.

    Repeats: raise the rank until noise-power roots exist, set the noise
    power to the trailing mean, re-select the rank at that noise power.
    Converges when the rank repeats; then the noise-power candidates (the
    ML value plus up to two matching roots) are scored by the mean matched
    filter statistic over the target-free training columns and the
    smallest mean wins.  Needs dimension at least 2 so the trailing mean
    stays defined.
    """
    n = s_eig.n
    d = s_eig.eigenvalues
    if n < 2:
        raise InputError("joint rank and noise selection needs dimension >= 2")
    if not 0 < lr0 <= 1:
        raise InputError("lr0 must lie in (0, 1]")
    training = np.asarray(training, dtype=np.complex128)
    if training.ndim != 2 or training.shape[0] != n or training.shape[1] < 1:
        raise InputError("training must be an n-by-k matrix with at least one column")
    steering = np.asarray(steering, dtype=np.complex128)
    if steering.shape != (n,) or abs(np.linalg.norm(steering) - 1.0) > 1e-6:
        raise InputError("steering must be a unit-norm length-n vector")

    r = min(max(int(r_init), 0), n - 1)
    trajectory: list[tuple[int, float, int]] = []
    iterations = 0
    converged = False
    for iterations in range(1, max_iter + 1):
        while r < n - 1 and sigma_el_roots(d, r, lr0).count == 0:
            r += 1
        sig = sigma_ml(d, r)
        stats = SampleStats(n=n, k=k, s_eig=s_eig, sigma2=sig)
        r_new = min(select_rank(stats, r, lr0).r_hat, n - 1)
        trajectory.append((r, sig, r_new))
        if r_new == r:
            converged = True
            break
        r = r_new
    if not converged:
        raise ConvergenceError(
            f"rank did not stabilize within {max_iter} iterations", trajectory=trajectory
        )

    roots = sigma_el_roots(d, r, lr0)
    candidates = [("ML", roots.sigma_ml)]
    if roots.count == 2:
        candidates.append(("EL1", roots.roots[0]))
        candidates.append(("EL2", roots.roots[1]))
    best_label, best_sigma, best_score = None, None, math.inf
    for label, sig in candidates:
        est = rcml(SampleStats(n=n, k=k, s_eig=s_eig, sigma2=sig), r)
        score = float(np.mean(nmf_statistic(est, steering, training)))
        if score < best_score:
            best_label, best_sigma, best_score = label, sig, score
    return JointSelection(
        r_hat=r, sigma2_hat=best_sigma, chosen_from=best_label, iterations=iterations
    )


@dataclass
class KmaxSelection:
    """Outcome of the condition-number walk."""

    kmax_hat: float
    visited: list[tuple[float, float]]
    final_step: float
    constraint_active: bool = True


def select_kmax(stats: SampleStats, lr0: float) -> KmaxSelection:
    """Tune the condition-number bound by shrinking-step coordinate search.

    Starts from the ML condition number ``d_1 / sigma2`` (clamped to at
    least 1), walks with step ``kmax/100`` in the improving direction of
    the log-LR mismatch ``|log lr - log lr0|``, divides the step by 10 on
    every direction reversal and stops once the step magnitude falls below
    ``1e-4``.  When the top eigenvalue sits at or below the noise floor
    the LR does not depend on the bound at all and the ML value is
    returned unchanged with ``constraint_active=False``.
    """
    if not 0 < lr0 <= 1:
        raise InputError("lr0 must lie in (0, 1]")
    d = stats.d
    log_lr0 = math.log(lr0)
    k_ml = max(float(d[0] / stats.sigma2), 1.0)

    cache: dict[float, float] = {}
    visited: list[tuple[float, float]] = []

    def loglr(km: float) -> float:
        if km not in cache:
            val = log_lr_value(cncml(stats, km).lambdas, d)
            cache[km] = val
            visited.append((km, math.exp(val)))
        return cache[km]

    def err(km: float) -> float:
        return abs(loglr(km) - log_lr0)

    if d[0] <= stats.sigma2:
        loglr(k_ml)
        return KmaxSelection(
            kmax_hat=k_ml, visited=visited, final_step=0.0, constraint_active=False
        )

    k = k_ml
    delta = k_ml / 100.0
    while delta >= 1e-4:
        # probe both neighbours at this scale, then walk the improving way
        step = 0.0
        if err(max(k + delta, 1.0)) < err(k):
            step = delta
        elif err(max(k - delta, 1.0)) < err(k):
            step = -delta
        while step:
            candidate = max(k + step, 1.0)
            if candidate == k or err(candidate) >= err(k):
                break
            k = candidate
        delta /= 10.0
    return KmaxSelection(
        kmax_hat=k, visited=visited, final_step=delta, constraint_active=True
    )


def select_loading(stats: SampleStats, lr0: float) -> float:
    """Diagonal loading factor whose loaded-sample LR matches ``lr0``.

    The LR of ``beta I + S`` starts at 1 for ``beta = 0`` and decreases
    monotonically toward 0, so a bracketing bisection applies; the bracket
    is grown geometrically and monotonicity is checked on the samples seen
    along the way.
    """
    if not 0 < lr0 < 1:
        raise InputError("lr0 must lie strictly inside (0, 1) for loading selection")
    d = stats.d
    if d[-1] <= 0:
        raise NoRootError(
            "sample covariance is singular; the loaded LR is identically zero"
        )
    log_lr0 = math.log(lr0)

    def loglr(beta: float) -> float:
        return log_lr_value(d + beta, d)

    lo, log_lo = 0.0, 0.0
    hi = max(float(d[0]), stats.sigma2)
    log_hi = loglr(hi)
    expansions = [(lo, log_lo), (hi, log_hi)]
    for _ in range(200):
        if log_hi <= log_lr0:
            break
        hi *= 4.0
        log_hi = loglr(hi)
        expansions.append((hi, log_hi))
    else:
        raise NoRootError(f"no loading factor reaches lr0={lr0} after geometric expansion")
    for (_, f_prev), (_, f_next) in zip(expansions, expansions[1:]):
        if f_next > f_prev + 1e-12:
            raise NumericalError("loaded LR is not monotone in the loading factor")

    for _ in range(200):
        mid = 0.5 * (lo + hi)
        log_mid = loglr(mid)
        if abs(math.exp(log_mid) - lr0) <= 1e-8:
            return mid
        if log_mid > log_lr0:
            lo = mid
        else:
            hi = mid
    raise NumericalError("loading bisection failed to reach the LR tolerance")

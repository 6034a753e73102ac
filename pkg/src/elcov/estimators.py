"""Covariance estimators expressed as eigenvalue maps on the sample basis.

All four estimators (SMI, FML, rank-constrained ML, condition-number
constrained ML) share the eigenvectors of the sample covariance and differ
only in how they reshape its eigenvalues ``d_1 >= ... >= d_N``:

* SMI keeps ``d`` unchanged.
* FML clips at the noise floor: ``max(d_i, sigma2)``.
* RCML keeps the top ``r`` (clipped at ``sigma2``) and floors the rest.
* CNCML caps the spread so the output condition number never exceeds
  ``kmax``; its closed form splits into four cases driven by the scalar
  ``u`` that solves a one-dimensional convex problem.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InputError
from .hermitian import EigenDecomposition, eig_hermitian

__all__ = [
    "CnCase",
    "CnCaseResult",
    "ConstraintRecord",
    "CovarianceEstimate",
    "SampleStats",
    "cncml",
    "cncml_objective",
    "cncml_u_star",
    "condition_number",
    "fml",
    "lsmi",
    "rcml",
    "smi",
]


@dataclass
class SampleStats:
    """Sufficient statistics consumed by the estimators.

    ``s_eig`` is the eigendecomposition of the sample covariance, ``k`` the
    number of training snapshots it was formed from, and ``sigma2`` the
    white-noise power used for flooring and normalization.
    """

    n: int
    k: int
    s_eig: EigenDecomposition
    sigma2: float

    def __post_init__(self):
        if self.n < 1:
            raise InputError("dimension n must be at least 1")
        if self.k < 1:
            raise InputError("sample count k must be at least 1")
        if not self.sigma2 > 0:
            raise InputError("noise power sigma2 must be positive")
        d = self.s_eig.eigenvalues
        if len(d) != self.n:
            raise InputError("eigenvalue count does not match n")
        if np.any(np.diff(d) > 0):
            raise InputError("sample eigenvalues must be sorted descending")

    @classmethod
    def from_sample_covariance(cls, s, k: int, sigma2: float) -> "SampleStats":
        eig = eig_hermitian(s)
        return cls(n=eig.n, k=k, s_eig=eig, sigma2=sigma2)

    @property
    def d(self) -> np.ndarray:
        """Sample eigenvalues, descending."""
        return self.s_eig.eigenvalues


@dataclass
class ConstraintRecord:
    """Constraint values an estimator actually used (absent fields None)."""

    r: int | None = None
    sigma2: float | None = None
    kmax: float | None = None
    beta: float | None = None


@dataclass
class CovarianceEstimate:
    """Estimator output: eigenvalues on the shared sample eigenbasis."""

    lambdas: np.ndarray
    basis: np.ndarray
    kind: str
    constraints: ConstraintRecord = field(default_factory=ConstraintRecord)

    @property
    def n(self) -> int:
        return len(self.lambdas)

    def matrix(self) -> np.ndarray:
        """Dense matrix ``V diag(lambdas) V^H``."""
        v = self.basis
        return (v * self.lambdas) @ v.conj().T


def smi(stats: SampleStats) -> CovarianceEstimate:
    """Sample covariance itself; the unconstrained ML estimate."""
    return CovarianceEstimate(
        lambdas=stats.d.copy(),
        basis=stats.s_eig.eigenvectors,
        kind="SMI",
        constraints=ConstraintRecord(),
    )


def fml(stats: SampleStats) -> CovarianceEstimate:
    """Clip sample eigenvalues at the noise floor.

    Equivalent to RCML with rank equal to the number of eigenvalues above
    ``sigma2``; that implied rank is recorded in the constraints.
    """
    lam = np.maximum(stats.d, stats.sigma2)
    implied_rank = int(np.count_nonzero(stats.d > stats.sigma2))
    return CovarianceEstimate(
        lambdas=lam,
        basis=stats.s_eig.eigenvectors,
        kind="FML",
        constraints=ConstraintRecord(r=implied_rank, sigma2=stats.sigma2),
    )


def rcml(stats: SampleStats, r: int) -> CovarianceEstimate:
    """Rank-constrained ML: keep the top ``r`` eigenvalues, floor the rest.

    Kept eigenvalues are still clipped at ``sigma2``, so ranks beyond the
    count of eigenvalues above the floor all produce the same estimate.
    ``r = 0`` is allowed and returns ``sigma2 * I``.
    """
    if not 0 <= r <= stats.n:
        raise InputError(f"rank {r} outside [0, {stats.n}]")
    lam = np.full(stats.n, float(stats.sigma2))
    lam[:r] = np.maximum(stats.d[:r], stats.sigma2)
    return CovarianceEstimate(
        lambdas=lam,
        basis=stats.s_eig.eigenvectors,
        kind="RCML",
        constraints=ConstraintRecord(r=int(r), sigma2=stats.sigma2),
    )


def lsmi(stats: SampleStats, beta: float) -> CovarianceEstimate:
    """Diagonally loaded sample covariance ``beta * I + S``."""
    if beta < 0:
        raise InputError("loading factor beta must be non-negative")
    return CovarianceEstimate(
        lambdas=stats.d + beta,
        basis=stats.s_eig.eigenvectors,
        kind="LSMI",
        constraints=ConstraintRecord(beta=float(beta)),
    )


class CnCase(enum.Enum):
    """Which branch of the condition-number closed form applied."""

    SCALED_IDENTITY = "ScaledIdentity"
    FML_EQUIVALENT = "FmlEquivalent"
    BOUNDARY_U = "CaseBoundaryU"
    INTERIOR_U = "CaseInteriorU"


@dataclass
class CnCaseResult:
    """Solution of the condition-number inner problem.

    ``u_star`` minimizes the separable objective on ``(0, 1]``; ``p`` and
    ``q`` count eigenvalues pinned at the upper and above the lower cap,
    ``nbar`` counts normalized eigenvalues at or above 1.
    """

    case_id: CnCase
    u_star: float
    p: int
    q: int
    nbar: int


def _lambda_star(u: float, dbar: np.ndarray, kmax: float) -> np.ndarray:
    """Inverse normalized eigenvalues of the CN-constrained solution at ``u``."""
    with np.errstate(divide="ignore"):
        inv_d = np.where(dbar > 0, 1.0 / dbar, np.inf)
    return np.minimum(np.minimum(kmax * u, 1.0), np.maximum(u, inv_d))


def cncml_objective(u, dbar: np.ndarray, kmax: float):
    """Separable objective ``sum_i [-log lam_i(u) + dbar_i lam_i(u)]``.

    ``u`` may be a scalar or an array; the value is the (normalized)
    negative log-likelihood of the condition-number constrained solution
    evaluated at that ``u``.  Exposed mainly so tests can scan it densely.
    """
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    lam = _lambda_star(u_arr[:, None], dbar[None, :], kmax)
    vals = np.sum(dbar[None, :] * lam - np.log(lam), axis=1)
    return vals if np.ndim(u) else float(vals[0])


def _objective_slope(u: float, dbar: np.ndarray, kmax: float) -> float:
    """Derivative of the separable objective, piecewise per eigenvalue."""
    small = dbar <= 1.0
    big = ~small
    total = 0.0
    if np.any(small):
        # below 1/kmax the small-eigenvalue terms still slope, flat after
        if u <= 1.0 / kmax:
            total += np.sum(kmax * dbar[small] - 1.0 / u)
    db = dbar[big]
    lo = 1.0 / (kmax * db)
    hi = 1.0 / db
    sloped_low = u <= lo
    sloped_high = u >= hi
    total += np.sum(kmax * db[sloped_low] - 1.0 / u)
    total += np.sum(db[sloped_high] - 1.0 / u)
    return float(total)


def cncml_u_star(stats: SampleStats, kmax: float) -> CnCaseResult:
    """Solve the scalar problem behind the condition-number estimator.

    Case split on the normalized eigenvalues ``dbar = d / sigma2``:

    1. ``dbar_1 <= 1``: scaled identity, ``u* = 1/kmax``.
    2. ``1 < dbar_1 <= kmax``: the FML estimate, ``u* = 1/dbar_1``.
    3. ``dbar_1 > kmax`` with the slope at ``1/kmax`` non-positive:
       ``u* = 1/kmax`` (constraint boundary).
    4. otherwise an interior stationary point, found by bisection of the
       monotone piecewise slope on ``(1/dbar_1, 1/kmax)``.
    """
    if not kmax >= 1:
        raise InputError("condition-number bound kmax must be at least 1")
    dbar = stats.d / stats.sigma2
    nbar = int(np.count_nonzero(dbar >= 1.0))

    if dbar[0] <= 1.0:
        case, u = CnCase.SCALED_IDENTITY, 1.0 / kmax
    elif dbar[0] <= kmax:
        # boundary tie dbar_1 == kmax lands here; the profiles coincide
        case, u = CnCase.FML_EQUIVALENT, 1.0 / dbar[0]
    else:
        p_guard = int(np.count_nonzero(dbar > kmax))
        slack = p_guard - np.sum(dbar[nbar:] - 1.0)
        if kmax >= np.sum(dbar[:p_guard]) / slack:
            case, u = CnCase.BOUNDARY_U, 1.0 / kmax
        else:
            case = CnCase.INTERIOR_U
            lo, hi = 1.0 / dbar[0], 1.0 / kmax
            # slope is continuous and non-decreasing: < 0 at lo, > 0 at hi
            while hi - lo > 1e-12:
                mid = 0.5 * (lo + hi)
                if _objective_slope(mid, dbar, kmax) < 0.0:
                    lo = mid
                else:
                    hi = mid
            u = 0.5 * (lo + hi)

    p = int(np.count_nonzero(dbar * u > 1.0))
    q = int(np.count_nonzero(dbar * (u * kmax) > 1.0))
    return CnCaseResult(case_id=case, u_star=u, p=p, q=q, nbar=nbar)


def cncml(stats: SampleStats, kmax: float) -> CovarianceEstimate:
    """Condition-number constrained ML estimate.

    The eigenvalue profile follows the case split of :func:`cncml_u_star`;
    the resulting condition number is exactly 1, ``d_1/sigma2``, ``kmax``
    and ``kmax`` in the four cases respectively.
    """
    res = cncml_u_star(stats, kmax)
    d = stats.d
    s2 = stats.sigma2
    n = stats.n
    if res.case_id is CnCase.SCALED_IDENTITY:
        lam = np.full(n, float(s2))
    elif res.case_id is CnCase.FML_EQUIVALENT:
        lam = np.maximum(d, s2)
    elif res.case_id is CnCase.BOUNDARY_U:
        lam = np.full(n, float(s2))
        lam[: res.p] = s2 * kmax
        lam[res.p : res.nbar] = d[res.p : res.nbar]
    else:
        u = res.u_star
        lam = np.full(n, s2 / (u * kmax))
        lam[: res.p] = s2 / u
        lam[res.p : res.q] = d[res.p : res.q]
    return CovarianceEstimate(
        lambdas=lam,
        basis=stats.s_eig.eigenvectors,
        kind="CNCML",
        constraints=ConstraintRecord(sigma2=s2, kmax=float(kmax)),
    )


def condition_number(est: CovarianceEstimate) -> float:
    """Spread ``lambdas[0] / lambdas[-1]`` of an estimate."""
    lam = est.lambdas
    if lam[-1] <= 0:
        raise InputError("condition number undefined: smallest eigenvalue is not positive")
    return float(lam[0] / lam[-1])

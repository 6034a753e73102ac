"""Figures of merit: normalized SINR and the normalized matched filter."""

from __future__ import annotations

import numpy as np

from .estimators import CovarianceEstimate
from .exceptions import InputError, SingularMatrixError

__all__ = ["nmf_statistic", "normalized_sinr"]


def apply_inverse(r_hat, x: np.ndarray) -> np.ndarray:
    """Apply the inverse of an estimate (or plain PD matrix) to columns ``x``.

    Estimates solve through their eigenbasis; raw matrices go through a
    dense solve.  Singular inputs raise :class:`SingularMatrixError`.
    """
    if isinstance(r_hat, CovarianceEstimate):
        lam = r_hat.lambdas
        if np.any(lam <= 0):
            raise SingularMatrixError("estimate has a non-positive eigenvalue")
        v = r_hat.basis
        w = v.conj().T @ x
        w = w / (lam if x.ndim == 1 else lam[:, None])
        return v @ w
    a = np.asarray(r_hat, dtype=np.complex128)
    try:
        return np.linalg.solve(a, x)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(f"covariance solve failed: {exc}") from exc


def normalized_sinr(r_hat, r_true, s) -> float:
    """Normalized output SINR of the adaptive filter built from ``r_hat``.

    ``eta = |s^H A s|^2 / (|s^H A R A s| * |s^H R^-1 s|)`` with
    ``A = r_hat^-1`` and ``R`` the true covariance; lies in ``(0, 1]`` and
    equals 1 exactly when ``r_hat`` is proportional to ``R``.
    """
    s = np.asarray(s, dtype=np.complex128)
    if s.ndim != 1 or not np.any(s):
        raise InputError("steering vector must be a nonzero 1-D vector")
    r_true = np.asarray(r_true, dtype=np.complex128)
    x = apply_inverse(r_hat, s)
    num = abs(np.vdot(s, x)) ** 2
    den_mid = abs(np.vdot(x, r_true @ x))
    den_true = abs(np.vdot(s, apply_inverse(r_true, s)))
    if den_mid == 0.0 or den_true == 0.0:
        raise SingularMatrixError("SINR denominator vanished; covariance is singular")
    return float(num / (den_mid * den_true))


def nmf_statistic(r_hat, s, z):
    """Normalized matched filter statistic, in ``[0, 1]`` by Cauchy-Schwarz.

    ``z`` may be a single snapshot (1-D, returns a float) or a matrix of
    snapshot columns (returns one value per column).
    """
    s = np.asarray(s, dtype=np.complex128)
    z = np.asarray(z, dtype=np.complex128)
    if s.ndim != 1 or not np.any(s):
        raise InputError("steering vector must be a nonzero 1-D vector")
    single = z.ndim == 1
    if single:
        z = z[:, None]
    if z.shape[0] != s.shape[0] or not np.all(np.any(z, axis=0)):
        raise InputError("snapshots must be nonzero columns matching the steering length")
    x = apply_inverse(r_hat, s)
    y = apply_inverse(r_hat, z)
    cross = np.abs(x.conj() @ z) ** 2
    den_s = abs(np.vdot(s, x))
    den_z = np.abs(np.sum(z.conj() * y, axis=0))
    values = cross / (den_s * den_z)
    return float(values[0]) if single else values

"""Shared generators and brute-force oracles for the test suite."""

import numpy as np
import pytest

from elcov import EigenDecomposition, SampleStats, ScenarioConfig


def random_hermitian(rng, n, scale=1.0):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = 0.5 * (a + a.conj().T) * scale
    np.fill_diagonal(h, h.diagonal().real)
    return h


def random_psd(rng, n, scale=1.0):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = a @ a.conj().T / n * scale
    return 0.5 * (h + h.conj().T)


def stats_from_spectrum(d, k=None, sigma2=1.0):
    """SampleStats with a given eigenvalue vector on the identity basis."""
    d = np.asarray(d, dtype=float)
    n = len(d)
    eig = EigenDecomposition(eigenvalues=d, eigenvectors=np.eye(n, dtype=complex))
    return SampleStats(n=n, k=k if k is not None else 2 * n, s_eig=eig, sigma2=sigma2)


def diag_log_lr(est_lambdas, sample_lambdas):
    """Independent LR oracle: dense determinant/trace on diagonal matrices."""
    r = np.diag(np.asarray(est_lambdas, dtype=complex))
    s = np.diag(np.asarray(sample_lambdas, dtype=complex))
    x = np.linalg.solve(r, s)
    sign, logdet = np.linalg.slogdet(x)
    n = len(est_lambdas)
    return float(logdet.real + n - np.trace(x).real)


def cn_lambda_map(u, dbar, kmax):
    """Normalized inverse-eigenvalue map of the condition-bounded solution."""
    inv_d = np.where(dbar > 0, 1.0 / dbar, np.inf)
    return np.minimum(np.minimum(kmax * u, 1.0), np.maximum(u, inv_d))


def cn_objective_grid(dbar, kmax, step=1e-6, chunk=250_000):
    """Brute-force scan of the condition-number objective over u in (0, 1].

    Returns (u_min, value_min) of the grid argmin.
    """
    u = np.arange(step, 1.0 + 0.5 * step, step)
    best_u, best_val = None, np.inf
    for start in range(0, len(u), chunk):
        uu = u[start : start + chunk][:, None]
        lam = cn_lambda_map(uu, dbar[None, :], kmax)
        vals = np.sum(dbar[None, :] * lam, axis=1) - np.log(np.prod(lam, axis=1))
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val, best_u = float(vals[i]), float(uu[i, 0])
    return best_u, best_val


def reference_scenario():
    """Three-jammer array scenario used by the Monte Carlo gates.

    Phase angles are given directly in radians (20, 40 and 60 degrees of
    electrical phase) and jammer powers linearly (10, 20 and 30 dB over the
    unit noise floor); this parameterization yields a disturbance with
    exactly five eigenvalues more than 10 dB above the noise.
    """
    phases = tuple(float(np.deg2rad(a)) for a in (20.0, 40.0, 60.0))
    return ScenarioConfig(
        n=20,
        jammer_powers=(10.0, 100.0, 1000.0),
        jammer_angles=phases,
        jammer_bandwidths=(0.2, 0.0, 0.3),
        noise_power=1.0,
        angle_mode="radians",
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)

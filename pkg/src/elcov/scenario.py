"""Ground-truth covariance construction, training generation, and matrix IO.

The simulated disturbance is a sum of narrowband or band-limited jammers on
a half-wavelength uniform linear array plus white noise::

    R(n, m) = sum_i p_i * sinc(0.5 * b_i * (n - m) * phi_i) * exp(j (n - m) phi_i)
              + noise_power * delta(n, m)

with ``phi_i = pi * sin(theta_i)`` for arrival angle ``theta_i``.  The sinc
convention is configurable because both ``sin(x)/x`` and ``sin(pi x)/(pi x)``
appear in practice; the unnormalized form is the default.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .exceptions import FormatError, InputError, NumericalError
from .hermitian import as_hermitian, sample_training, sqrt_factor

__all__ = [
    "CorruptionSpec",
    "ScenarioConfig",
    "TrainingSet",
    "generate_training",
    "jammer_covariance",
    "matrix_load",
    "matrix_save",
    "read_cmat",
    "steering_vector",
    "write_cmat",
]

logger = logging.getLogger(__name__)

SINC_CONVENTIONS = ("unnormalized", "normalized")
ANGLE_MODES = ("degrees", "radians")


@dataclass
class ScenarioConfig:
    """Jammer-plus-noise scenario parameters.

    ``jammer_powers`` are powers (squared amplitudes); ``jammer_angles``
    are arrival angles in degrees unless ``angle_mode="radians"``, in which
    case they are electrical phase angles used directly.
    """

    n: int
    jammer_powers: tuple[float, ...] = ()
    jammer_angles: tuple[float, ...] = ()
    jammer_bandwidths: tuple[float, ...] = ()
    noise_power: float = 1.0
    sinc_convention: str = "unnormalized"
    angle_mode: str = "degrees"

    def __post_init__(self):
        if self.n < 1:
            raise InputError("array size n must be at least 1")
        self.jammer_powers = tuple(float(p) for p in self.jammer_powers)
        self.jammer_angles = tuple(float(a) for a in self.jammer_angles)
        self.jammer_bandwidths = tuple(float(b) for b in self.jammer_bandwidths)
        lengths = {len(self.jammer_powers), len(self.jammer_angles), len(self.jammer_bandwidths)}
        if len(lengths) != 1:
            raise InputError("jammer powers, angles and bandwidths must have equal lengths")
        if any(p <= 0 for p in self.jammer_powers):
            raise InputError("jammer powers must be positive")
        if any(not 0 <= b < 1 for b in self.jammer_bandwidths):
            raise InputError("fractional bandwidths must lie in [0, 1)")
        if not self.noise_power > 0:
            raise InputError("noise power must be positive")
        if self.sinc_convention not in SINC_CONVENTIONS:
            raise InputError(f"sinc_convention must be one of {SINC_CONVENTIONS}")
        if self.angle_mode not in ANGLE_MODES:
            raise InputError(f"angle_mode must be one of {ANGLE_MODES}")

    @property
    def jammer_count(self) -> int:
        return len(self.jammer_powers)

    def phase_angles(self) -> tuple[float, ...]:
        """Electrical phase angles ``phi_i`` implied by the configuration."""
        if self.angle_mode == "degrees":
            return tuple(np.pi * np.sin(np.deg2rad(a)) for a in self.jammer_angles)
        return self.jammer_angles


def _sinc(x: np.ndarray, convention: str) -> np.ndarray:
    if convention == "normalized":
        return np.sinc(x)
    return np.sinc(x / np.pi)


def jammer_covariance(cfg: ScenarioConfig) -> np.ndarray:
    """Build the scenario's true covariance matrix.

    The result is Hermitian Toeplitz with every diagonal entry equal to the
    total jammer power plus the noise power.  Eigenvalues slightly below
    zero (within ``1e-9`` of the largest) are clamped with a logged
    warning; anything more negative is a modelling error and raises.
    """
    idx = np.arange(cfg.n)
    delta = idx[:, None] - idx[None, :]
    r = np.zeros((cfg.n, cfg.n), dtype=np.complex128)
    for power, phi, beta in zip(cfg.jammer_powers, cfg.phase_angles(), cfg.jammer_bandwidths):
        envelope = _sinc(0.5 * beta * delta * phi, cfg.sinc_convention)
        r += power * envelope * np.exp(1j * delta * phi)
    r[idx, idx] += cfg.noise_power
    w = np.linalg.eigvalsh(r)
    lam_min, lam_max = float(w[0]), float(w[-1])
    if lam_min < -1e-9 * lam_max:
        raise NumericalError(
            f"jammer covariance is not PSD: eigenvalue {lam_min:.6e} below "
            f"-1e-9 * {lam_max:.6e}"
        )
    if lam_min < 0.0:
        logger.warning(
            "clamping %d slightly negative eigenvalues of the jammer covariance",
            int(np.count_nonzero(w < 0)),
        )
        vals, vecs = np.linalg.eigh(r)
        r = (vecs * np.clip(vals, 0.0, None)) @ vecs.conj().T
    return as_hermitian(r)


def steering_vector(n: int, angle_deg: float) -> np.ndarray:
    """Unit-norm array steering vector for an arrival angle in degrees."""
    if n < 1:
        raise InputError("array size n must be at least 1")
    m = np.arange(n)
    phase = np.pi * np.sin(np.deg2rad(angle_deg))
    return np.exp(1j * m * phase) / np.sqrt(n)


@dataclass
class CorruptionSpec:
    """Target-like contamination of training snapshots.

    A ``fraction`` of the columns receive an additive component
    ``amplitude * steering`` on top of the disturbance draw.
    """

    fraction: float
    amplitude: float
    steering: np.ndarray

    def __post_init__(self):
        if not 0 <= self.fraction <= 1:
            raise InputError("corruption fraction must lie in [0, 1]")
        self.steering = np.asarray(self.steering, dtype=np.complex128)
        if self.steering.ndim != 1:
            raise InputError("corruption steering must be a vector")
        if abs(np.linalg.norm(self.steering) - 1.0) > 1e-6:
            raise InputError("corruption steering must have unit norm")


@dataclass
class TrainingSet:
    """Training matrix plus bookkeeping about how it was produced."""

    z: np.ndarray
    corrupted_indices: tuple[int, ...]
    scenario: dict = field(default_factory=dict)


def generate_training(
    r_true, k: int, corruption: CorruptionSpec | None, rng: np.random.Generator
) -> TrainingSet:
    """Draw ``k`` training snapshots from the true covariance.

    With a corruption spec, exactly ``round(fraction * k)`` columns (chosen
    by the generator, half-up rounding) receive the target-like component.
    """
    if k < 1:
        raise InputError("sample count k must be at least 1")
    factor = sqrt_factor(r_true)
    z = sample_training(factor, k, rng)
    corrupted: tuple[int, ...] = ()
    if corruption is not None and corruption.fraction > 0:
        if len(corruption.steering) != z.shape[0]:
            raise InputError("corruption steering length does not match the scenario size")
        count = int(np.floor(corruption.fraction * k + 0.5))
        if count > 0:
            picks = np.sort(rng.choice(k, size=count, replace=False))
            z[:, picks] += corruption.amplitude * corruption.steering[:, None]
            corrupted = tuple(int(i) for i in picks)
    provenance = {
        "k": k,
        "corrupted": len(corrupted),
        "amplitude": corruption.amplitude if corruption is not None else 0.0,
    }
    return TrainingSet(z=z, corrupted_indices=corrupted, scenario=provenance)


_CMAT_HEADER = "CMAT v1"


def write_cmat(a, path) -> None:
    """Write a complex matrix as a diff-friendly text file.

    Format: a header line ``CMAT v1 <rows> <cols>`` followed by one line
    per row holding ``re im`` pairs at 17 significant digits (lossless for
    doubles).
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise InputError("only 2-D matrices can be written")
    rows, cols = a.shape
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{_CMAT_HEADER} {rows} {cols}\n")
        for i in range(rows):
            parts = []
            for j in range(cols):
                parts.append(f"{a[i, j].real:.17g} {a[i, j].imag:.17g}")
            fh.write(" ".join(parts) + "\n")


def read_cmat(path) -> np.ndarray:
    """Read a complex matrix written by :func:`write_cmat`."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise FormatError("empty file", path=path, line=1)
    header = lines[0].split()
    if len(header) != 4 or " ".join(header[:2]) != _CMAT_HEADER:
        raise FormatError(f"expected header '{_CMAT_HEADER} <rows> <cols>'", path=path, line=1)
    try:
        rows, cols = int(header[2]), int(header[3])
    except ValueError as exc:
        raise FormatError(f"unparseable dimensions: {exc}", path=path, line=1) from exc
    if rows < 1 or cols < 1:
        raise FormatError("dimensions must be positive", path=path, line=1)
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != rows:
        raise FormatError(
            f"expected {rows} data rows, found {len(body)}", path=path, line=len(lines)
        )
    out = np.empty((rows, cols), dtype=np.complex128)
    for i, raw in enumerate(body):
        parts = raw.split()
        if len(parts) != 2 * cols:
            raise FormatError(
                f"expected {2 * cols} numbers, found {len(parts)}", path=path, line=i + 2
            )
        for j in range(cols):
            try:
                re = float(parts[2 * j])
                im = float(parts[2 * j + 1])
            except ValueError as exc:
                raise FormatError(
                    f"unparseable entry: {exc}", path=path, line=i + 2, column=j + 1
                ) from exc
            out[i, j] = complex(re, im)
    return out


def matrix_save(h, path) -> None:
    """Write a Hermitian matrix (validated first) to a CMAT file."""
    write_cmat(as_hermitian(h), path)


def matrix_load(path) -> np.ndarray:
    """Read a CMAT file and validate it as Hermitian.

    Non-Hermitian content is rejected with the file location of the worst
    offending entry.
    """
    a = read_cmat(path)
    if a.shape[0] != a.shape[1]:
        raise FormatError(f"expected a square matrix, got {a.shape}", path=path, line=1)
    delta = np.abs(a - a.conj().T)
    if np.max(delta) > 1e-12:
        i, j = np.unravel_index(np.argmax(delta), delta.shape)
        raise FormatError(
            f"matrix is not Hermitian (mismatch {delta[i, j]:.3e} against entry "
            f"({int(j) + 1}, {int(i) + 1}))",
            path=path,
            line=int(i) + 2,
            column=int(j) + 1,
        )
    return as_hermitian(a)

import numpy as np
import pytest

from conftest import random_hermitian, reference_scenario
from elcov import (
    CorruptionSpec,
    FormatError,
    InputError,
    ScenarioConfig,
    derive_rng,
    generate_training,
    jammer_covariance,
    matrix_load,
    matrix_save,
    read_cmat,
    steering_vector,
    write_cmat,
)


class TestScenarioConfig:
    def test_validates_lengths(self):
        with pytest.raises(InputError, match="equal lengths"):
            ScenarioConfig(n=4, jammer_powers=(1.0,), jammer_angles=(), jammer_bandwidths=())

    def test_validates_ranges(self):
        with pytest.raises(InputError):
            ScenarioConfig(n=4, jammer_powers=(1.0,), jammer_angles=(0.0,),
                           jammer_bandwidths=(1.0,))
        with pytest.raises(InputError):
            ScenarioConfig(n=4, noise_power=0.0)
        with pytest.raises(InputError):
            ScenarioConfig(n=4, sinc_convention="other")


class TestJammerCovariance:
    def test_no_jammers_scaled_identity(self):
        cfg = ScenarioConfig(n=5, noise_power=2.5)
        assert np.array_equal(jammer_covariance(cfg), 2.5 * np.eye(5))

    def test_diagonal_total_power(self):
        cfg = ScenarioConfig(n=6, jammer_powers=(3.0, 7.0), jammer_angles=(12.0, -30.0),
                             jammer_bandwidths=(0.15, 0.0), noise_power=0.5)
        r = jammer_covariance(cfg)
        assert np.allclose(r.diagonal().real, 3.0 + 7.0 + 0.5, atol=1e-12)
        assert np.all(r.diagonal().imag == 0.0)

    def test_reference_scenario_has_five_strong_eigenvalues(self):
        # the paper-style parameterization: exactly five eigenvalues more
        # than 10 dB above the unit noise floor
        cfg = reference_scenario()
        w = np.linalg.eigvalsh(jammer_covariance(cfg))[::-1]
        assert int(np.sum(w > 10.0 * cfg.noise_power)) == 5

    def test_squared_power_reading_has_ten(self):
        # the same angles fed through the half-wavelength mapping with
        # squared powers spread energy across ten strong directions
        cfg = ScenarioConfig(n=20, jammer_powers=(100.0, 1e4, 1e6),
                             jammer_angles=(20.0, 40.0, 60.0),
                             jammer_bandwidths=(0.2, 0.0, 0.3), noise_power=1.0)
        w = np.linalg.eigvalsh(jammer_covariance(cfg))[::-1]
        assert int(np.sum(w > 10.0)) == 10

    def test_hermitian_psd_random_configs(self, rng):
        for _ in range(100):
            j = int(rng.integers(0, 4))
            cfg = ScenarioConfig(
                n=int(rng.integers(2, 16)),
                jammer_powers=tuple(float(p) for p in rng.uniform(0.5, 1e4, j)),
                jammer_angles=tuple(float(a) for a in rng.uniform(-80, 80, j)),
                jammer_bandwidths=tuple(float(b) for b in rng.uniform(0.0, 0.9, j)),
                noise_power=float(rng.uniform(0.1, 5.0)),
            )
            r = jammer_covariance(cfg)
            assert np.max(np.abs(r - r.conj().T)) <= 1e-12
            w = np.linalg.eigvalsh(r)
            assert w[0] >= -1e-9 * w[-1]

    def test_toeplitz_exact(self):
        cfg = ScenarioConfig(n=10, jammer_powers=(100.0,), jammer_angles=(37.0,),
                             jammer_bandwidths=(0.4,), noise_power=1.0)
        r = jammer_covariance(cfg)
        for i in range(9):
            for j in range(9):
                assert r[i, j] == r[i + 1, j + 1]

    def test_zero_bandwidth_is_rank_one(self):
        cfg = ScenarioConfig(n=8, jammer_powers=(50.0,), jammer_angles=(25.0,),
                             jammer_bandwidths=(0.0,), noise_power=1.0)
        w = np.linalg.eigvalsh(jammer_covariance(cfg))[::-1]
        assert int(np.sum(w > 1.0 + 1e-9)) == 1

    def test_normalized_convention_differs(self):
        kw = dict(n=8, jammer_powers=(50.0,), jammer_angles=(25.0,),
                  jammer_bandwidths=(0.3,), noise_power=1.0)
        a = jammer_covariance(ScenarioConfig(sinc_convention="unnormalized", **kw))
        b = jammer_covariance(ScenarioConfig(sinc_convention="normalized", **kw))
        assert not np.allclose(a, b)


class TestSteeringVector:
    def test_broadside_uniform(self):
        s = steering_vector(4, 0.0)
        assert np.allclose(s, np.full(4, 0.5), atol=1e-15)

    def test_unit_norm(self, rng):
        for angle in rng.uniform(-90, 90, 10):
            assert np.linalg.norm(steering_vector(9, float(angle))) == pytest.approx(1.0, abs=1e-12)

    def test_self_coherence(self):
        s = steering_vector(16, 20.0)
        assert np.vdot(s, s).real == pytest.approx(1.0, abs=1e-12)


class TestGenerateTraining:
    def test_no_corruption(self, rng):
        ts = generate_training(np.eye(4, dtype=complex), 10, None, rng)
        assert ts.z.shape == (4, 10)
        assert ts.corrupted_indices == ()

    def test_exact_corruption_count(self, rng):
        spec = CorruptionSpec(fraction=0.5, amplitude=50.0, steering=steering_vector(4, 0.0))
        ts = generate_training(np.eye(4, dtype=complex), 704, spec, rng)
        assert len(ts.corrupted_indices) == 352
        assert all(0 <= i < 704 for i in ts.corrupted_indices)

    def test_corrupted_mean_matches_target(self):
        n, k, alpha = 8, 10_000, 5.0
        s = steering_vector(n, 33.0)
        spec = CorruptionSpec(fraction=0.5, amplitude=alpha, steering=s)
        ts = generate_training(np.eye(n, dtype=complex), k, spec, derive_rng(5, "corr"))
        corrupted = ts.z[:, list(ts.corrupted_indices)]
        m = corrupted.shape[1]
        mean = corrupted.mean(axis=1)
        # disturbance contributes complex variance 1/m per element
        band = 3.0 * np.sqrt(1.0 / m)
        assert np.all(np.abs(mean - alpha * s) <= band)

    def test_deterministic(self):
        spec = CorruptionSpec(fraction=0.3, amplitude=2.0, steering=steering_vector(3, 10.0))
        a = generate_training(np.eye(3, dtype=complex), 20, spec, derive_rng(9, "t", 0))
        b = generate_training(np.eye(3, dtype=complex), 20, spec, derive_rng(9, "t", 0))
        assert np.array_equal(a.z, b.z)
        assert a.corrupted_indices == b.corrupted_indices

    def test_corruption_validation(self):
        with pytest.raises(InputError):
            CorruptionSpec(fraction=1.5, amplitude=1.0, steering=steering_vector(3, 0.0))
        with pytest.raises(InputError):
            CorruptionSpec(fraction=0.5, amplitude=1.0, steering=np.ones(3, dtype=complex))


class TestMatrixIo:
    def test_identity_round_trip(self, tmp_path):
        path = tmp_path / "eye.cmat"
        matrix_save(np.eye(4, dtype=complex), path)
        assert np.array_equal(matrix_load(path), np.eye(4))

    def test_random_round_trip_exact(self, rng, tmp_path):
        h = random_hermitian(rng, 8)
        path = tmp_path / "h.cmat"
        matrix_save(h, path)
        loaded = matrix_load(path)
        scale = np.max(np.abs(h))
        assert np.max(np.abs(loaded - h)) <= 1e-15 * scale

    def test_general_rectangular_round_trip(self, rng, tmp_path):
        z = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
        path = tmp_path / "z.cmat"
        write_cmat(z, path)
        assert np.array_equal(read_cmat(path), z)

    def test_rejects_non_hermitian_with_location(self, tmp_path):
        path = tmp_path / "bad.cmat"
        write_cmat(np.array([[1.0, 2.0], [3.0, 1.0]], dtype=complex), path)
        with pytest.raises(FormatError) as err:
            matrix_load(path)
        assert err.value.line is not None and err.value.column is not None

    def test_rejects_malformed_rows(self, tmp_path):
        path = tmp_path / "short.cmat"
        path.write_text("CMAT v1 2 2\n1 0 0 0\n1 0\n")
        with pytest.raises(FormatError) as err:
            read_cmat(path)
        assert err.value.line == 3

    def test_rejects_bad_header(self, tmp_path):
        path = tmp_path / "hdr.cmat"
        path.write_text("WRONG 2 2\n")
        with pytest.raises(FormatError) as err:
            read_cmat(path)
        assert err.value.line == 1

    def test_rejects_unparseable_entry(self, tmp_path):
        path = tmp_path / "tok.cmat"
        path.write_text("CMAT v1 1 2\n1 0 abc 0\n")
        with pytest.raises(FormatError) as err:
            read_cmat(path)
        assert err.value.line == 2 and err.value.column == 2

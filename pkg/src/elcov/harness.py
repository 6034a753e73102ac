"""Monte Carlo experiment runner with seeded reproducibility and CSV output.

A run sweeps sample counts and estimator specs over independent trials:
per trial it draws training from the scenario's true covariance, forms the
sample covariance, applies each estimator (running its constraint selector
when the spec asks for one), and scores the result by normalized SINR
averaged over a steering grid.  Identical configuration and master seed
reproduce the output CSVs byte for byte.
"""

from __future__ import annotations

import configparser
import csv
import math
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .estimators import SampleStats, cncml, fml, lsmi, rcml, smi
from .exceptions import InputError
from .hermitian import derive_rng, eig_hermitian, sample_covariance
from .likelihood import lr0_load, lr0_reference, lr0_store
from .metrics import apply_inverse
from .scenario import (
    CorruptionSpec,
    ScenarioConfig,
    generate_training,
    jammer_covariance,
    steering_vector,
)
from .selection import select_kmax, select_loading, select_rank, select_rank_sigma

__all__ = [
    "EstimatorSpec",
    "ExperimentConfig",
    "TrialRecord",
    "default_steering_grid",
    "load_experiment_config",
    "run_experiment",
]

_PLAIN_ESTIMATORS = ("SMI", "FML", "RCML_EL", "RCML_EL_SIGMA", "CNCML_ML", "CNCML_EL", "LSMI_EL")
_PARAM_ESTIMATORS = ("RCML_FIXED", "CNCML_FIXED")
_NEEDS_LR0 = ("RCML_EL", "RCML_EL_SIGMA", "CNCML_EL", "LSMI_EL")


@dataclass(frozen=True)
class EstimatorSpec:
    """One estimator column of the experiment, e.g. FML or RCML_FIXED(5)."""

    name: str
    param: float | None = None

    @classmethod
    def parse(cls, text: str) -> "EstimatorSpec":
        token = text.strip()
        param = None
        if "(" in token:
            if not token.endswith(")"):
                raise InputError(f"malformed estimator spec {text!r}")
            token, arg = token[:-1].split("(", 1)
            try:
                param = float(arg)
            except ValueError as exc:
                raise InputError(f"malformed estimator parameter in {text!r}") from exc
        name = token.strip().upper()
        if name in _PARAM_ESTIMATORS:
            if param is None:
                raise InputError(f"estimator {name} requires a parameter, e.g. {name}(5)")
        elif name in _PLAIN_ESTIMATORS:
            if param is not None:
                raise InputError(f"estimator {name} takes no parameter")
        else:
            known = ", ".join(_PLAIN_ESTIMATORS + _PARAM_ESTIMATORS)
            raise InputError(f"unknown estimator {text!r}; known: {known}")
        return cls(name=name, param=param)

    def __str__(self) -> str:
        if self.param is None:
            return self.name
        return f"{self.name}({self.param:g})"


@dataclass
class ExperimentConfig:
    scenario: ScenarioConfig
    k_list: tuple[int, ...]
    trials: int
    master_seed: int
    estimators: tuple[EstimatorSpec, ...]
    output_path: str
    lr0_table_path: str | None = None
    lr0_trials: int = 20000
    autocompute_lr0: bool = True
    steering_grid: tuple[float, ...] | None = None
    nmf_angle: float = 0.0
    r_init: int | None = None
    corruption: CorruptionSpec | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise InputError("trials must be at least 1")
        if not self.k_list:
            raise InputError("k_list must not be empty")
        if not self.estimators:
            raise InputError("estimator list must not be empty")


@dataclass
class TrialRecord:
    """Result of one (k, trial, estimator) cell.

    ``wall_time`` is informational only and deliberately kept out of the
    CSV files so reruns stay byte-identical.
    """

    trial_index: int
    k: int
    estimator: str
    r_hat: int | None
    sigma2_hat: float | None
    kmax_hat: float | None
    beta_hat: float | None
    sinr_db: float
    wall_time: float


def default_steering_grid(scenario: ScenarioConfig) -> tuple[float, ...]:
    """19 angles uniform over [-90, 90] degrees, skipping jammer directions.

    Grid angles within one degree of a jammer's arrival direction are
    dropped; radian-mode phase angles are mapped back to the equivalent
    arrival angle for the comparison.
    """
    grid = np.linspace(-90.0, 90.0, 19)
    if scenario.angle_mode == "degrees":
        jam_arrivals = list(scenario.jammer_angles)
    else:
        jam_arrivals = [
            float(np.rad2deg(np.arcsin(np.clip(phi / np.pi, -1.0, 1.0))))
            for phi in scenario.jammer_angles
        ]
    keep = [a for a in grid if all(abs(a - j) > 1.0 for j in jam_arrivals)]
    return tuple(float(a) for a in keep)


def _lr0_seed(master_seed: int, n: int, k: int) -> int:
    ss = np.random.SeedSequence([int(master_seed), 0x6C7230, int(n), int(k)])
    return int(ss.generate_state(1)[0])


def _ensure_lr0(cfg: ExperimentConfig, n: int, k: int) -> float:
    if cfg.lr0_table_path is not None:
        ref = lr0_load(n, k, cfg.lr0_table_path)
        if ref is not None:
            return ref.lr0
    if not cfg.autocompute_lr0:
        raise InputError(
            f"no lr0 table entry for (n={n}, k={k}) and autocompute is disabled"
        )
    ref = lr0_reference(n, k, trials=cfg.lr0_trials, seed=_lr0_seed(cfg.master_seed, n, k))
    if cfg.lr0_table_path is not None:
        lr0_store(ref, cfg.lr0_table_path)
    return ref.lr0


def _build_estimate(spec, eig, k, sigma2, lr0, r_init, training, nmf_steering):
    stats = SampleStats(n=eig.n, k=k, s_eig=eig, sigma2=sigma2)
    if spec.name == "SMI":
        return smi(stats)
    if spec.name == "FML":
        return fml(stats)
    if spec.name == "RCML_FIXED":
        return rcml(stats, int(spec.param))
    if spec.name == "RCML_EL":
        return rcml(stats, select_rank(stats, r_init, lr0).r_hat)
    if spec.name == "RCML_EL_SIGMA":
        joint = select_rank_sigma(eig, k, r_init, lr0, training, nmf_steering)
        joint_stats = SampleStats(n=eig.n, k=k, s_eig=eig, sigma2=joint.sigma2_hat)
        return rcml(joint_stats, joint.r_hat)
    if spec.name == "CNCML_ML":
        return cncml(stats, max(float(stats.d[0] / sigma2), 1.0))
    if spec.name == "CNCML_FIXED":
        return cncml(stats, float(spec.param))
    if spec.name == "CNCML_EL":
        return cncml(stats, select_kmax(stats, lr0).kmax_hat)
    if spec.name == "LSMI_EL":
        return lsmi(stats, select_loading(stats, lr0))
    raise InputError(f"unknown estimator {spec.name}")


def _mean_sinr_db(est, r_true, steer, den_true) -> float:
    x = apply_inverse(est, steer)
    num = np.abs(np.sum(steer.conj() * x, axis=0)) ** 2
    den_mid = np.abs(np.sum(x.conj() * (r_true @ x), axis=0))
    eta = num / (den_mid * den_true)
    return float(np.mean(10.0 * np.log10(eta)))


def run_experiment(cfg: ExperimentConfig) -> list[TrialRecord]:
    """Run the configured sweep and write trials.csv plus summary.csv.

    Returns the per-trial records.  Output lands under ``cfg.output_path``
    (created if needed).
    """
    scenario = cfg.scenario
    n = scenario.n
    r_true = jammer_covariance(scenario)
    angles = cfg.steering_grid if cfg.steering_grid else default_steering_grid(scenario)
    if not angles:
        raise InputError("steering grid is empty")
    steer = np.column_stack([steering_vector(n, a) for a in angles])
    den_true = np.abs(np.sum(steer.conj() * apply_inverse(r_true, steer), axis=0))

    lr0_by_k: dict[int, float | None] = {}
    needs_lr0 = any(spec.name in _NEEDS_LR0 for spec in cfg.estimators)
    for k in cfg.k_list:
        lr0_by_k[k] = _ensure_lr0(cfg, n, k) if needs_lr0 else None

    r_init = cfg.r_init if cfg.r_init is not None else scenario.jammer_count
    nmf_steering = steering_vector(n, cfg.nmf_angle)

    records: list[TrialRecord] = []
    for k in cfg.k_list:
        for trial in range(cfg.trials):
            rng = derive_rng(cfg.master_seed, "trial", k, trial)
            training = generate_training(r_true, k, cfg.corruption, rng)
            eig = eig_hermitian(sample_covariance(training.z))
            for spec in cfg.estimators:
                start = time.perf_counter()
                est = _build_estimate(
                    spec, eig, k, scenario.noise_power, lr0_by_k[k],
                    r_init, training.z, nmf_steering,
                )
                sinr_db = _mean_sinr_db(est, r_true, steer, den_true)
                elapsed = time.perf_counter() - start
                con = est.constraints
                records.append(
                    TrialRecord(
                        trial_index=trial,
                        k=k,
                        estimator=str(spec),
                        r_hat=con.r,
                        sigma2_hat=con.sigma2,
                        kmax_hat=con.kmax,
                        beta_hat=con.beta,
                        sinr_db=sinr_db,
                        wall_time=elapsed,
                    )
                )
    _write_outputs(cfg, records)
    return records


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return f"{value:.12g}"


def _write_outputs(cfg: ExperimentConfig, records: list[TrialRecord]) -> None:
    out_dir = Path(cfg.output_path)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "trials.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["k", "trial", "estimator", "r", "sigma2", "kmax", "beta", "sinr_db"])
        for rec in records:
            writer.writerow(
                [
                    rec.k,
                    rec.trial_index,
                    rec.estimator,
                    _fmt(rec.r_hat),
                    _fmt(rec.sigma2_hat),
                    _fmt(rec.kmax_hat),
                    _fmt(rec.beta_hat),
                    _fmt(rec.sinr_db),
                ]
            )
    with open(out_dir / "summary.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["k", "estimator", "trials", "mean_sinr_db"])
        for k in cfg.k_list:
            for spec in cfg.estimators:
                cell = [
                    rec.sinr_db
                    for rec in records
                    if rec.k == k and rec.estimator == str(spec)
                ]
                mean = math.fsum(cell) / len(cell)
                writer.writerow([k, str(spec), len(cell), _fmt(mean)])


_CONFIG_SCHEMA = {
    "scenario": {
        "n", "noise_power", "jammer_powers", "jammer_angles", "jammer_bandwidths",
        "sinc_convention", "angle_mode",
    },
    "experiment": {
        "k_list", "trials", "master_seed", "estimators", "output", "lr0_table",
        "lr0_trials", "autocompute", "steering_grid", "nmf_angle", "r_init",
    },
    "corruption": {"fraction", "amplitude", "angle"},
}


def _floats(text: str) -> tuple[float, ...]:
    items = [tok.strip() for tok in text.split(",")]
    return tuple(float(tok) for tok in items if tok)


def load_experiment_config(path) -> ExperimentConfig:
    """Parse a line-oriented ``key = value`` experiment configuration file.

    Sections are ``[scenario]``, ``[experiment]`` and optionally
    ``[corruption]``; unknown sections or keys are hard errors so sweep
    typos fail fast rather than silently using defaults.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    read = parser.read(path)
    if not read:
        raise InputError(f"config file {path!r} not found or unreadable")
    for section in parser.sections():
        if section not in _CONFIG_SCHEMA:
            raise InputError(f"unknown config section [{section}]")
        for key in parser[section]:
            if key not in _CONFIG_SCHEMA[section]:
                raise InputError(f"unknown key {key!r} in section [{section}]")
    for required in ("scenario", "experiment"):
        if required not in parser:
            raise InputError(f"missing required config section [{required}]")

    sc = parser["scenario"]
    try:
        scenario = ScenarioConfig(
            n=sc.getint("n"),
            jammer_powers=_floats(sc.get("jammer_powers", "")),
            jammer_angles=_floats(sc.get("jammer_angles", "")),
            jammer_bandwidths=_floats(sc.get("jammer_bandwidths", "")),
            noise_power=sc.getfloat("noise_power", 1.0),
            sinc_convention=sc.get("sinc_convention", "unnormalized"),
            angle_mode=sc.get("angle_mode", "degrees"),
        )
    except ValueError as exc:
        raise InputError(f"bad [scenario] value: {exc}") from exc

    ex = parser["experiment"]
    for key in ("k_list", "trials", "master_seed", "estimators", "output"):
        if key not in ex:
            raise InputError(f"missing required key {key!r} in [experiment]")
    try:
        k_list = tuple(int(v) for v in _floats(ex["k_list"]))
        estimators = tuple(
            EstimatorSpec.parse(tok) for tok in ex["estimators"].split(",") if tok.strip()
        )
        steering = _floats(ex["steering_grid"]) if "steering_grid" in ex else None
        config = ExperimentConfig(
            scenario=scenario,
            k_list=k_list,
            trials=ex.getint("trials"),
            master_seed=ex.getint("master_seed"),
            estimators=estimators,
            output_path=ex["output"],
            lr0_table_path=ex.get("lr0_table", None),
            lr0_trials=ex.getint("lr0_trials", 20000),
            autocompute_lr0=ex.getboolean("autocompute", True),
            steering_grid=steering,
            nmf_angle=ex.getfloat("nmf_angle", 0.0),
            r_init=ex.getint("r_init") if "r_init" in ex else None,
        )
    except ValueError as exc:
        raise InputError(f"bad [experiment] value: {exc}") from exc

    if "corruption" in parser:
        co = parser["corruption"]
        for key in ("fraction", "amplitude"):
            if key not in co:
                raise InputError(f"missing required key {key!r} in [corruption]")
        try:
            config.corruption = CorruptionSpec(
                fraction=co.getfloat("fraction"),
                amplitude=co.getfloat("amplitude"),
                steering=steering_vector(scenario.n, co.getfloat("angle", 0.0)),
            )
        except ValueError as exc:
            raise InputError(f"bad [corruption] value: {exc}") from exc
    return config

"""Run configuration: defaults, INI round-trip, and validation.

Every workflow is driven by a RunConfig. Configs serialize to an INI file
with one section per subsystem; the manifest written next to every run's
outputs is exactly such a file, so re-running a command with the manifest as
--config reproduces the run bit-identically.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field, replace
from pathlib import Path

from .encoding import AsymTransformParams, EncodingWeights
from .errors import ConfigError
from .narma import NarmaParams
from .quantum import NOISE_PRESETS, NoiseModel

BURNIN_SCALE_POLICY = "burnin-mean-abs"


@dataclass(frozen=True)
class RunConfig:
    """Resolved parameters for one reproducible run."""

    # register & sampling
    n_qubits: int = 6
    topology: str = "loops:5"
    shots: int = 8192
    seed: int = 1990
    burn_in_fraction: float = 1.0 / 3.0
    initial_spin: float = 0.0
    jobs: int = 1

    # noise
    noise_preset: str = "rochester-like"
    noise: NoiseModel = field(default_factory=lambda: NOISE_PRESETS["rochester-like"])

    # encoding
    weights: EncodingWeights = field(default_factory=EncodingWeights)
    transform: AsymTransformParams = field(default_factory=AsymTransformParams)
    aggregation: str = "sum"

    # readout
    ridge_lambda: float = 1e-3
    forgetting: float = 1.0
    intercept: bool = True
    feedback_scale: float | str = BURNIN_SCALE_POLICY

    # memory-capacity benchmark
    mc_tau_max: int = 120
    mc_drive_length: int = 3000
    mc_train_fraction: float = 0.7
    mc_ridge_lambda: float = 1e-6
    mc_seeds: int = 10

    # narma benchmark
    narma_length: int = 5000
    narma: NarmaParams = field(default_factory=NarmaParams)

    def validate(self) -> "RunConfig":
        if self.n_qubits < 2:
            raise ConfigError("run.n_qubits", f"must be >= 2, got {self.n_qubits}")
        if self.shots < 1:
            raise ConfigError("run.shots", f"must be >= 1, got {self.shots}")
        if not 0.0 < self.burn_in_fraction < 1.0:
            raise ConfigError(
                "run.burn_in_fraction", f"must be in (0, 1), got {self.burn_in_fraction}"
            )
        if not -1.0 <= self.initial_spin <= 1.0:
            raise ConfigError(
                "run.initial_spin", f"must be in [-1, 1], got {self.initial_spin}"
            )
        if self.jobs < 1:
            raise ConfigError("run.jobs", f"must be >= 1, got {self.jobs}")
        if self.aggregation not in ("sum", "mean"):
            raise ConfigError(
                "encoding.aggregation", f"must be sum or mean, got {self.aggregation!r}"
            )
        if self.ridge_lambda <= 0:
            raise ConfigError(
                "readout.ridge_lambda", f"must be > 0, got {self.ridge_lambda}"
            )
        if not 0.0 < self.forgetting <= 1.0:
            raise ConfigError(
                "readout.forgetting", f"must be in (0, 1], got {self.forgetting}"
            )
        if isinstance(self.feedback_scale, float) and self.feedback_scale <= 0:
            raise ConfigError(
                "readout.feedback_scale",
                f"fixed scale must be > 0, got {self.feedback_scale}",
            )
        if self.mc_tau_max < 1:
            raise ConfigError("mc.tau_max", f"must be >= 1, got {self.mc_tau_max}")
        if self.mc_drive_length < 10:
            raise ConfigError(
                "mc.drive_length", f"must be >= 10, got {self.mc_drive_length}"
            )
        if not 0.0 < self.mc_train_fraction < 1.0:
            raise ConfigError(
                "mc.train_fraction", f"must be in (0, 1), got {self.mc_train_fraction}"
            )
        if self.mc_ridge_lambda <= 0:
            raise ConfigError(
                "mc.ridge_lambda", f"must be > 0, got {self.mc_ridge_lambda}"
            )
        if self.mc_seeds < 1:
            raise ConfigError("mc.seeds", f"must be >= 1, got {self.mc_seeds}")
        if self.narma_length < 6:
            raise ConfigError(
                "narma.length", f"must be >= 6, got {self.narma_length}"
            )
        return self

    def with_overrides(self, **overrides) -> "RunConfig":
        """Copy with non-None overrides applied and re-validated."""
        clean = {k: v for k, v in overrides.items() if v is not None}
        if "noise_preset" in clean:
            try:
                clean["noise"] = NOISE_PRESETS[clean["noise_preset"]]
            except KeyError:
                raise ConfigError(
                    "noise.preset", f"unknown preset {clean['noise_preset']!r}"
                ) from None
        return replace(self, **clean).validate()

    # -- INI round-trip ----------------------------------------------------

    def to_parser(self) -> configparser.ConfigParser:
        cp = configparser.ConfigParser()
        cp["run"] = {
            "n_qubits": repr(self.n_qubits),
            "topology": self.topology,
            "shots": repr(self.shots),
            "seed": repr(self.seed),
            "burn_in_fraction": repr(self.burn_in_fraction),
            "initial_spin": repr(self.initial_spin),
            "jobs": repr(self.jobs),
        }
        cp["noise"] = {
            "preset": self.noise_preset,
            "angle_jitter_sigma": repr(self.noise.angle_jitter_sigma),
            "p_flip_0to1": repr(self.noise.p_flip_0to1),
            "p_flip_1to0": repr(self.noise.p_flip_1to0),
            "crosstalk_kappa": repr(self.noise.crosstalk_kappa),
            "per_shot_jitter": repr(self.noise.per_shot_jitter),
        }
        cp["encoding"] = {
            "alpha": repr(self.weights.alpha),
            "beta": repr(self.weights.beta),
            "gamma": repr(self.weights.gamma),
            "alpha_prime": repr(self.weights.alpha_prime),
            "gamma_prime": repr(self.weights.gamma_prime),
            "aggregation": self.aggregation,
        }
        cp["transform"] = {"a0": repr(self.transform.a0), "a1": repr(self.transform.a1)}
        cp["readout"] = {
            "ridge_lambda": repr(self.ridge_lambda),
            "forgetting": repr(self.forgetting),
            "intercept": repr(self.intercept),
            "feedback_scale": str(self.feedback_scale),
        }
        cp["mc"] = {
            "tau_max": repr(self.mc_tau_max),
            "drive_length": repr(self.mc_drive_length),
            "train_fraction": repr(self.mc_train_fraction),
            "ridge_lambda": repr(self.mc_ridge_lambda),
            "seeds": repr(self.mc_seeds),
        }
        cp["narma"] = {
            "length": repr(self.narma_length),
            "alpha": repr(self.narma.alpha),
            "beta": repr(self.narma.beta),
            "gamma": repr(self.narma.gamma),
            "delta": repr(self.narma.delta),
            "mu": repr(self.narma.mu),
            "f0": repr(self.narma.f0),
            "f1": repr(self.narma.f1),
            "f2": repr(self.narma.f2),
            "period": repr(self.narma.period),
        }
        return cp

    def to_ini(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            self.to_parser().write(fh)

    def to_ini_str(self) -> str:
        buf = io.StringIO()
        self.to_parser().write(buf)
        return buf.getvalue()

    def as_dict(self) -> dict:
        """Nested plain-value view, used for JSON config echoes."""
        cp = self.to_parser()
        return {section: dict(cp[section]) for section in cp.sections()}

    @classmethod
    def from_ini(cls, path: str | Path) -> "RunConfig":
        cp = configparser.ConfigParser()
        read = cp.read(path)
        if not read:
            raise ConfigError("config", f"cannot read config file {path}")
        return cls.from_parser(cp)

    @classmethod
    def from_parser(cls, cp: configparser.ConfigParser) -> "RunConfig":
        base = cls()

        def get(section, option, conv, default, fieldname):
            if not cp.has_option(section, option):
                return default
            raw = cp.get(section, option)
            try:
                if conv is bool:
                    return cp.getboolean(section, option)
                return conv(raw)
            except ValueError:
                raise ConfigError(fieldname, f"cannot parse {raw!r}") from None

        preset_name = get("noise", "preset", str, base.noise_preset, "noise.preset")
        if preset_name not in NOISE_PRESETS and preset_name != "custom":
            raise ConfigError("noise.preset", f"unknown preset {preset_name!r}")
        preset = NOISE_PRESETS.get(preset_name, NoiseModel())
        try:
            noise = NoiseModel(
                angle_jitter_sigma=get(
                    "noise", "angle_jitter_sigma", float,
                    preset.angle_jitter_sigma, "noise.angle_jitter_sigma",
                ),
                p_flip_0to1=get(
                    "noise", "p_flip_0to1", float, preset.p_flip_0to1, "noise.p_flip_0to1"
                ),
                p_flip_1to0=get(
                    "noise", "p_flip_1to0", float, preset.p_flip_1to0, "noise.p_flip_1to0"
                ),
                crosstalk_kappa=get(
                    "noise", "crosstalk_kappa", float,
                    preset.crosstalk_kappa, "noise.crosstalk_kappa",
                ),
                per_shot_jitter=get(
                    "noise", "per_shot_jitter", bool,
                    preset.per_shot_jitter, "noise.per_shot_jitter",
                ),
            )
            weights = EncodingWeights(
                alpha=get("encoding", "alpha", float, base.weights.alpha, "encoding.alpha"),
                beta=get("encoding", "beta", float, base.weights.beta, "encoding.beta"),
                gamma=get("encoding", "gamma", float, base.weights.gamma, "encoding.gamma"),
                alpha_prime=get(
                    "encoding", "alpha_prime", float,
                    base.weights.alpha_prime, "encoding.alpha_prime",
                ),
                gamma_prime=get(
                    "encoding", "gamma_prime", float,
                    base.weights.gamma_prime, "encoding.gamma_prime",
                ),
            )
            transform = AsymTransformParams(
                a0=get("transform", "a0", float, base.transform.a0, "transform.a0"),
                a1=get("transform", "a1", float, base.transform.a1, "transform.a1"),
            )
            narma = NarmaParams(
                alpha=get("narma", "alpha", float, base.narma.alpha, "narma.alpha"),
                beta=get("narma", "beta", float, base.narma.beta, "narma.beta"),
                gamma=get("narma", "gamma", float, base.narma.gamma, "narma.gamma"),
                delta=get("narma", "delta", float, base.narma.delta, "narma.delta"),
                mu=get("narma", "mu", float, base.narma.mu, "narma.mu"),
                f0=get("narma", "f0", float, base.narma.f0, "narma.f0"),
                f1=get("narma", "f1", float, base.narma.f1, "narma.f1"),
                f2=get("narma", "f2", float, base.narma.f2, "narma.f2"),
                period=get("narma", "period", float, base.narma.period, "narma.period"),
            )
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError("config", str(exc)) from exc

        raw_scale = get(
            "readout", "feedback_scale", str, BURNIN_SCALE_POLICY, "readout.feedback_scale"
        )
        try:
            feedback_scale: float | str = float(raw_scale)
        except ValueError:
            if raw_scale != BURNIN_SCALE_POLICY:
                raise ConfigError(
                    "readout.feedback_scale",
                    f"must be a number or {BURNIN_SCALE_POLICY!r}, got {raw_scale!r}",
                ) from None
            feedback_scale = raw_scale

        cfg = cls(
            n_qubits=get("run", "n_qubits", int, base.n_qubits, "run.n_qubits"),
            topology=get("run", "topology", str, base.topology, "run.topology"),
            shots=get("run", "shots", int, base.shots, "run.shots"),
            seed=get("run", "seed", int, base.seed, "run.seed"),
            burn_in_fraction=get(
                "run", "burn_in_fraction", float,
                base.burn_in_fraction, "run.burn_in_fraction",
            ),
            initial_spin=get(
                "run", "initial_spin", float, base.initial_spin, "run.initial_spin"
            ),
            jobs=get("run", "jobs", int, base.jobs, "run.jobs"),
            noise_preset=preset_name,
            noise=noise,
            weights=weights,
            transform=transform,
            aggregation=get(
                "encoding", "aggregation", str, base.aggregation, "encoding.aggregation"
            ),
            ridge_lambda=get(
                "readout", "ridge_lambda", float, base.ridge_lambda, "readout.ridge_lambda"
            ),
            forgetting=get(
                "readout", "forgetting", float, base.forgetting, "readout.forgetting"
            ),
            intercept=get(
                "readout", "intercept", bool, base.intercept, "readout.intercept"
            ),
            feedback_scale=feedback_scale,
            mc_tau_max=get("mc", "tau_max", int, base.mc_tau_max, "mc.tau_max"),
            mc_drive_length=get(
                "mc", "drive_length", int, base.mc_drive_length, "mc.drive_length"
            ),
            mc_train_fraction=get(
                "mc", "train_fraction", float,
                base.mc_train_fraction, "mc.train_fraction",
            ),
            mc_ridge_lambda=get(
                "mc", "ridge_lambda", float, base.mc_ridge_lambda, "mc.ridge_lambda"
            ),
            mc_seeds=get("mc", "seeds", int, base.mc_seeds, "mc.seeds"),
            narma_length=get("narma", "length", int, base.narma_length, "narma.length"),
            narma=narma,
        )
        return cfg.validate()

"""Run configuration dataclasses, the flat key=value config format, and seeding."""

from __future__ import annotations

import dataclasses
import hashlib
import random
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any

import numpy as np
import torch


class ConfigError(ValueError):
    """Unknown key or malformed value in a config file or override."""


def seed_all(seed: int) -> None:
    """Seed python, numpy and torch for a deterministic run."""
    random.seed(seed)
    np.random.seed(seed % (2**32))
    torch.manual_seed(seed)


def stream_rng(seed: int, stream: str, index: int = 0) -> np.random.Generator:
    """Independent generator for one (stream, index) pair.

    Keyed off the run seed so resuming at episode i reproduces the same
    episode without replaying the first i draws.
    """
    key = int.from_bytes(hashlib.sha256(stream.encode()).digest()[:4], "big")
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(key, index))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass
class ModelConfig:
    """Architecture knobs. Defaults follow the full pairwise design:
    stride-8 encoder with the two deepest stages concatenated, 256-channel
    processing blocks, and ablation switches for the gating and condition
    paths."""

    in_channels: int = 3
    encoder_widths: tuple[int, ...] = (32, 64, 128, 128)
    gate_reduction: int = 4
    share_gate_fc: bool = True
    head_channels: int = 256
    condition_channels: int = 256
    refine_channels: int = 256
    aspp_rates: tuple[int, ...] = (1, 6, 12)
    use_cross_reference: bool = True
    use_condition: bool = True
    detach_cache: bool = False
    refine_steps_test: int = 5


@dataclass
class TrainConfig:
    """Episodic training run. All fields are exposed as config-file keys."""

    data_dir: str = "data/synth"
    out_dir: str = "runs/train"
    fold: int = 0
    n_folds: int = 4
    episodes: int = 2000
    lr: float = 0.01
    momentum: float = 0.9
    weight_decay: float = 1e-4
    w_query: float = 1.0
    w_support: float = 1.0
    w_aux: float = 0.5
    refine_steps_train: int = 3
    seed: int = 0
    checkpoint_every: int = 500
    val_every: int = 500
    val_episodes: int = 16
    image_size: int = 64
    # architecture knobs, forwarded into ModelConfig
    encoder_widths: tuple[int, ...] = (32, 64, 128, 128)
    head_channels: int = 256
    condition_channels: int = 256
    refine_channels: int = 256
    share_gate_fc: bool = True
    use_cross_reference: bool = True
    use_condition: bool = True
    detach_cache: bool = False

    def model_config(self) -> ModelConfig:
        return ModelConfig(
            encoder_widths=tuple(self.encoder_widths),
            share_gate_fc=self.share_gate_fc,
            head_channels=self.head_channels,
            condition_channels=self.condition_channels,
            refine_channels=self.refine_channels,
            use_cross_reference=self.use_cross_reference,
            use_condition=self.use_condition,
            detach_cache=self.detach_cache,
        )


@dataclass
class FinetuneConfig:
    """Support-pair adaptation at k-shot test time. The encoder stays frozen."""

    iterations: int = 50
    lr: float = 0.001
    momentum: float = 0.9
    include_self_pairs: bool = False
    frozen_groups: tuple[str, ...] = ("encoder",)
    refine_steps: int = 3
    seed: int = 0
    w_query: float = 1.0
    w_support: float = 1.0
    w_aux: float = 0.5


@dataclass
class EvalConfig:
    """Test-fold evaluation protocol."""

    data_dir: str = "data/synth"
    checkpoint: str = "runs/train/model.npz"
    out_dir: str = "runs/eval"
    fold: int = 0
    n_folds: int = 4
    episodes: int = 1000
    seed: int = 0
    image_size: int = 64
    kshot: int = 1
    mode: str = "fusion"
    refine_steps: int = 5
    scales: tuple[float, ...] = (1.0,)
    finetune_iterations: int = 50
    finetune_lr: float = 0.001
    finetune_seed: int = 0
    workers: int = 1
    per_episode_iou: bool = False

    def finetune_config(self) -> FinetuneConfig:
        return FinetuneConfig(
            iterations=self.finetune_iterations,
            lr=self.finetune_lr,
            seed=self.finetune_seed,
        )


@dataclass
class SynthConfig:
    """Procedural shapes dataset generator settings."""

    out_dir: str = "data/synth"
    images_per_class: int = 40
    image_size: int = 64
    max_distractors: int = 2
    min_fg_frac: float = 0.05
    max_fg_frac: float = 0.60
    noise_std: float = 0.05
    seed: int = 0
    force: bool = False


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _coerce(name: str, raw: str, target_type: Any) -> Any:
    raw = raw.strip()
    origin = getattr(target_type, "__origin__", None)
    try:
        if target_type is bool:
            low = raw.lower()
            if low in _TRUE:
                return True
            if low in _FALSE:
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        if target_type is int:
            return int(raw)
        if target_type is float:
            return float(raw)
        if target_type is str:
            return raw
        if origin is tuple:
            item_types = target_type.__args__
            item = item_types[0]
            parts = [p for p in raw.replace(",", " ").split() if p]
            return tuple(item(p) for p in parts)
    except ValueError as exc:
        raise ConfigError(f"bad value for key {name!r}: {exc}") from None
    raise ConfigError(f"unsupported config field type for key {name!r}")


def apply_overrides(config: Any, overrides: dict[str, str]) -> Any:
    """Set dataclass fields from raw string values, rejecting unknown keys."""
    import typing

    known = {f.name for f in fields(config)}
    hints = typing.get_type_hints(type(config))
    for key, raw in overrides.items():
        if key not in known:
            raise ConfigError(
                f"unknown config key {key!r} for {type(config).__name__}"
            )
        setattr(config, key, _coerce(key, raw, hints[key]))
    return config


def parse_kv_file(path: str | Path) -> dict[str, str]:
    """Parse a flat `key = value` file. Blank lines and # comments allowed."""
    out: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = stripped.partition("=")
        out[key.strip()] = value.strip()
    return out


def config_to_kv(config: Any) -> dict[str, str]:
    out = {}
    for f in fields(config):
        value = getattr(config, f.name)
        if isinstance(value, tuple):
            out[f.name] = ",".join(str(v) for v in value)
        else:
            out[f.name] = str(value)
    return out


def config_hash(config: Any) -> str:
    """Stable short hash of a config's key=value form."""
    lines = sorted(f"{k}={v}" for k, v in config_to_kv(config).items())
    return hashlib.sha256("\n".join(lines).encode()).hexdigest()[:12]


def load_config(cls: type, file: str | Path | None = None,
                overrides: dict[str, str] | None = None) -> Any:
    """Build a config with precedence: override > file > dataclass default."""
    config = cls()
    if file is not None:
        apply_overrides(config, parse_kv_file(file))
    if overrides:
        apply_overrides(config, overrides)
    return config

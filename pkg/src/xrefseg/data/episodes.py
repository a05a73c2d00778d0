"""Episode sampling: k labeled support samples plus one query, all containing
the sampled target class, drawn from the split's class pool."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .folds import FoldSplit
from .index import DatasetIndex
from .samples import ImageSample


class SamplingError(RuntimeError):
    """No class in the pool has enough distinct images for a k-shot episode."""


@dataclass(frozen=True)
class EpisodeRef:
    """Path-level episode, resolvable without touching pixel data."""

    target_class: int
    support: tuple[tuple[Path, Path], ...]
    query: tuple[Path, Path]

    @property
    def k(self) -> int:
        return len(self.support)


@dataclass
class Episode:
    """Materialized episode with binary {0, 1} supervision masks."""

    support: list[ImageSample]
    query: ImageSample
    target_class: int
    k: int

    def __post_init__(self):
        if self.k != len(self.support) or self.k < 1:
            raise ValueError(f"k={self.k} does not match {len(self.support)} supports")
        for sample in [*self.support, self.query]:
            if not sample.contains_class(sample.class_of_interest):
                raise ValueError("episode sample does not contain its target class")


def sample_episode_refs(index: DatasetIndex, split: FoldSplit, mode: str,
                        k: int, rng: np.random.Generator) -> EpisodeRef:
    """Draw a target class uniformly from the split pool and k+1 distinct
    images of that class without replacement. Classes with fewer than k+1
    images are redrawn; exhausting the pool is an error."""
    if k < 1:
        raise ValueError("k must be >= 1")
    pool = [cls for cls in sorted(split.pool(mode)) if index.count(cls) > 0]
    if not pool:
        raise SamplingError(f"empty class pool for mode={mode!r}")
    candidates = list(pool)
    while candidates:
        cls = int(rng.choice(candidates))
        entries = index.per_class[cls]
        if len(entries) >= k + 1:
            picks = rng.choice(len(entries), size=k + 1, replace=False)
            chosen = [entries[int(i)] for i in picks]
            return EpisodeRef(
                target_class=cls,
                support=tuple(chosen[:k]),
                query=chosen[k],
            )
        candidates.remove(cls)
    raise SamplingError(
        f"no class in the {mode} pool has at least {k + 1} images"
    )


def materialize(index: DatasetIndex, ref: EpisodeRef) -> Episode:
    """Load the referenced samples and reduce their masks to binary
    supervision for the target class."""
    loaded = []
    for img_path, mask_path in [*ref.support, ref.query]:
        sample = index.load_sample(img_path, mask_path, ref.target_class)
        loaded.append(sample.binarize(ref.target_class))
    return Episode(
        support=loaded[:-1],
        query=loaded[-1],
        target_class=ref.target_class,
        k=ref.k,
    )


def sample_episode(index: DatasetIndex, split: FoldSplit, mode: str, k: int,
                   rng: np.random.Generator) -> Episode:
    return materialize(index, sample_episode_refs(index, split, mode, k, rng))

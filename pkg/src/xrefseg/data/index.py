"""Dataset index over the images/ + masks/ + classes.txt on-disk layout.

Layout contract:
  <root>/images/<name>.png   8-bit RGB images
  <root>/masks/<name>.png    index-valued label images (0 = background)
  <root>/classes.txt         one class name per line; line i (1-based) is id i

An image is indexed under every class id present in its mask.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from .samples import ImageSample, resize_sample


class DatasetError(RuntimeError):
    """Malformed dataset layout: orphan files or unknown label ids."""


@dataclass
class DatasetIndex:
    """Immutable per-class lookup of (image path, mask path) pairs."""

    class_names: tuple[str, ...]
    per_class: dict[int, list[tuple[Path, Path]]]
    image_size: int
    mean_rgb: np.ndarray = field(default_factory=lambda: np.full(3, 0.5, np.float32))
    std_rgb: np.ndarray = field(default_factory=lambda: np.full(3, 0.25, np.float32))

    @property
    def class_ids(self) -> tuple[int, ...]:
        return tuple(range(1, len(self.class_names) + 1))

    def name_of(self, cls: int) -> str:
        return self.class_names[cls - 1]

    def id_of(self, name: str) -> int:
        return self.class_names.index(name) + 1

    def count(self, cls: int) -> int:
        return len(self.per_class.get(cls, ()))

    def load_sample(self, image_path: Path, mask_path: Path,
                    class_of_interest: int) -> ImageSample:
        pixels = np.asarray(Image.open(image_path).convert("RGB"),
                            dtype=np.float32) / 255.0
        mask = np.asarray(Image.open(mask_path), dtype=np.int64)
        sample = ImageSample(pixels=pixels, mask=mask,
                             class_of_interest=class_of_interest)
        return resize_sample(sample, self.image_size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DatasetIndex):
            return NotImplemented
        mine = {c: [(i.name, m.name) for i, m in pairs]
                for c, pairs in self.per_class.items()}
        theirs = {c: [(i.name, m.name) for i, m in pairs]
                  for c, pairs in other.per_class.items()}
        return (self.class_names == other.class_names
                and self.image_size == other.image_size
                and mine == theirs)


def load_pascal_style(image_dir: str | Path, mask_dir: str | Path,
                      class_table: tuple[str, ...] | list[str],
                      image_size: int = 64) -> DatasetIndex:
    """Build a DatasetIndex by scanning mask contents.

    Raises DatasetError listing every orphan image/mask pair and every mask
    containing a label id outside the class table.
    """
    image_dir, mask_dir = Path(image_dir), Path(mask_dir)
    class_table = tuple(class_table)
    images = {p.stem: p for p in sorted(image_dir.glob("*.png"))}
    masks = {p.stem: p for p in sorted(mask_dir.glob("*.png"))}

    problems = []
    for stem in sorted(set(masks) - set(images)):
        problems.append(f"mask without image: {masks[stem]}")
    for stem in sorted(set(images) - set(masks)):
        problems.append(f"image without mask: {images[stem]}")

    per_class: dict[int, list[tuple[Path, Path]]] = {
        cls: [] for cls in range(1, len(class_table) + 1)
    }
    n_images = 0
    mean_acc = np.zeros(3, dtype=np.float64)
    sq_acc = np.zeros(3, dtype=np.float64)
    for stem in sorted(set(images) & set(masks)):
        mask = np.asarray(Image.open(masks[stem]), dtype=np.int64)
        present = [int(c) for c in np.unique(mask) if c != 0]
        bad = [c for c in present if c < 0 or c > len(class_table)]
        if bad:
            problems.append(f"unknown label id(s) {bad} in {masks[stem]}")
            continue
        pixels = np.asarray(Image.open(images[stem]).convert("RGB"),
                            dtype=np.float64) / 255.0
        mean_acc += pixels.mean(axis=(0, 1))
        sq_acc += (pixels ** 2).mean(axis=(0, 1))
        n_images += 1
        for cls in present:
            per_class[cls].append((images[stem], masks[stem]))

    if problems:
        raise DatasetError("dataset scan failed:\n  " + "\n  ".join(problems))
    if n_images == 0:
        warnings.warn(f"no image/mask pairs found under {image_dir} and {mask_dir}")
        return DatasetIndex(class_names=class_table, per_class=per_class,
                            image_size=image_size)

    mean = mean_acc / n_images
    std = np.sqrt(np.maximum(sq_acc / n_images - mean ** 2, 1e-8))
    return DatasetIndex(
        class_names=class_table,
        per_class=per_class,
        image_size=image_size,
        mean_rgb=mean.astype(np.float32),
        std_rgb=std.astype(np.float32),
    )


def read_class_table(root: str | Path) -> tuple[str, ...]:
    lines = (Path(root) / "classes.txt").read_text().splitlines()
    return tuple(name.strip() for name in lines if name.strip())


def load_dataset(root: str | Path, image_size: int = 64) -> DatasetIndex:
    """Load a dataset rooted at a directory holding the standard layout."""
    root = Path(root)
    return load_pascal_style(root / "images", root / "masks",
                             read_class_table(root), image_size=image_size)

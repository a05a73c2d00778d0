"""Procedural shapes dataset written in the standard images/masks layout.

Every image holds one target-class shape (randomized position, scale,
rotation, color) plus up to two distractor shapes of other classes on a
textured background. Colors are drawn from one shared palette for all
classes, so shape geometry is the only class-identifying cue.
"""

from __future__ import annotations

import colorsys
from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw

from ..config import SynthConfig
from .index import DatasetIndex, load_dataset

SHAPE_CLASSES = ("disk", "square", "triangle", "ring", "cross", "star",
                 "ellipse", "bar")

# per-shape radius range as a fraction of image size; chosen so the target
# region can land inside the configured foreground-area bounds
_RADIUS_RANGE = {
    "disk": (0.15, 0.39),
    "square": (0.18, 0.41),
    "triangle": (0.23, 0.42),
    "ring": (0.18, 0.41),
    "cross": (0.23, 0.42),
    "star": (0.24, 0.42),
    "ellipse": (0.19, 0.41),
    "bar": (0.25, 0.44),
}


def _polygon_mask(size: int, points: list[tuple[float, float]]) -> np.ndarray:
    img = Image.new("L", (size, size), 0)
    ImageDraw.Draw(img).polygon(points, fill=1)
    return np.asarray(img, dtype=bool)


def _regular_polygon(cx, cy, r, n, angle):
    return [(cx + r * np.cos(angle + 2 * np.pi * k / n),
             cy + r * np.sin(angle + 2 * np.pi * k / n)) for k in range(n)]


def _rotated_rect(cx, cy, half_w, half_h, angle):
    c, s = np.cos(angle), np.sin(angle)
    corners = [(-half_w, -half_h), (half_w, -half_h),
               (half_w, half_h), (-half_w, half_h)]
    return [(cx + c * x - s * y, cy + s * x + c * y) for x, y in corners]


def rasterize_shape(name: str, size: int, cx: float, cy: float, r: float,
                    angle: float) -> np.ndarray:
    """Boolean occupancy raster of one shape instance."""
    if name == "disk":
        img = Image.new("L", (size, size), 0)
        ImageDraw.Draw(img).ellipse([cx - r, cy - r, cx + r, cy + r], fill=1)
        return np.asarray(img, dtype=bool)
    if name == "ring":
        img = Image.new("L", (size, size), 0)
        draw = ImageDraw.Draw(img)
        draw.ellipse([cx - r, cy - r, cx + r, cy + r], fill=1)
        ri = 0.55 * r
        draw.ellipse([cx - ri, cy - ri, cx + ri, cy + ri], fill=0)
        return np.asarray(img, dtype=bool)
    if name == "square":
        return _polygon_mask(size, _regular_polygon(cx, cy, r, 4, angle + np.pi / 4))
    if name == "triangle":
        return _polygon_mask(size, _regular_polygon(cx, cy, r, 3, angle))
    if name == "star":
        pts = []
        for k in range(10):
            rad = r if k % 2 == 0 else 0.45 * r
            theta = angle + np.pi * k / 5
            pts.append((cx + rad * np.cos(theta), cy + rad * np.sin(theta)))
        return _polygon_mask(size, pts)
    if name == "ellipse":
        t = np.linspace(0.0, 2 * np.pi, 48, endpoint=False)
        x, y = r * np.cos(t), 0.55 * r * np.sin(t)
        c, s = np.cos(angle), np.sin(angle)
        pts = list(zip(cx + c * x - s * y, cy + s * x + c * y))
        return _polygon_mask(size, pts)
    if name == "cross":
        w = 0.33 * r
        a = _polygon_mask(size, _rotated_rect(cx, cy, r, w, angle))
        b = _polygon_mask(size, _rotated_rect(cx, cy, w, r, angle))
        return a | b
    if name == "bar":
        return _polygon_mask(size, _rotated_rect(cx, cy, r, 0.28 * r, angle))
    raise ValueError(f"unknown shape class {name!r}")


def _random_color(rng: np.random.Generator, avoid: np.ndarray) -> np.ndarray:
    for _ in range(20):
        h, s, v = rng.uniform(0, 1), rng.uniform(0.55, 1.0), rng.uniform(0.35, 0.95)
        rgb = np.array(colorsys.hsv_to_rgb(h, s, v), dtype=np.float32)
        if np.linalg.norm(rgb - avoid) >= 0.25:
            return rgb
    return rgb


def _background(size: int, rng: np.random.Generator) -> np.ndarray:
    base = rng.uniform(0.25, 0.75, size=3).astype(np.float32)
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float32) / size
    grad = np.zeros((size, size, 3), dtype=np.float32)
    for c in range(3):
        gx, gy = rng.uniform(-0.15, 0.15, size=2)
        grad[:, :, c] = gx * xx + gy * yy
    return np.clip(base[None, None, :] + grad, 0.02, 0.98)


def _place_shape(name: str, size: int, rng: np.random.Generator,
                 lo_frac: float | None = None,
                 hi_frac: float | None = None,
                 shrink: float = 1.0) -> np.ndarray:
    """Sample geometry until the raster lands inside the area bounds."""
    r_lo, r_hi = _RADIUS_RANGE[name]
    for _ in range(60):
        r = rng.uniform(r_lo, r_hi) * size * shrink
        margin = min(r + 1, size / 2 - 1)
        cx = rng.uniform(margin, size - margin)
        cy = rng.uniform(margin, size - margin)
        angle = rng.uniform(0, 2 * np.pi)
        raster = rasterize_shape(name, size, cx, cy, r, angle)
        frac = raster.mean()
        if lo_frac is not None and frac < lo_frac:
            continue
        if hi_frac is not None and frac > hi_frac:
            continue
        if raster.any():
            return raster
    raise RuntimeError(
        f"could not place a {name!r} shape within area bounds "
        f"[{lo_frac}, {hi_frac}] at size {size}"
    )


def render_scene(target_cls: int, size: int, rng: np.random.Generator,
                 max_distractors: int, min_fg: float, max_fg: float,
                 noise_std: float) -> tuple[np.ndarray, np.ndarray]:
    """Render one image/mask pair. The target shape is drawn last, so its
    labeled region is exactly its raster and respects the area bounds."""
    pixels = _background(size, rng)
    bg_mean = pixels.mean(axis=(0, 1))
    mask = np.zeros((size, size), dtype=np.int64)

    n_classes = len(SHAPE_CLASSES)
    others = [c for c in range(1, n_classes + 1) if c != target_cls]
    n_distract = int(rng.integers(0, max_distractors + 1))
    distract_cls = rng.choice(others, size=n_distract, replace=False)

    for cls in distract_cls:
        raster = _place_shape(SHAPE_CLASSES[cls - 1], size, rng, shrink=0.7)
        color = _random_color(rng, bg_mean)
        pixels[raster] = color
        mask[raster] = cls

    raster = _place_shape(SHAPE_CLASSES[target_cls - 1], size, rng,
                          lo_frac=min_fg, hi_frac=max_fg)
    color = _random_color(rng, bg_mean)
    pixels[raster] = color
    mask[raster] = target_cls

    pixels = pixels + rng.normal(0.0, noise_std, size=pixels.shape).astype(np.float32)
    return np.clip(pixels, 0.0, 1.0), mask


def generate_synthetic(config: SynthConfig,
                       rng: np.random.Generator | None = None) -> DatasetIndex:
    """Write the dataset to config.out_dir and return its loaded index.

    Generation is a pure function of the RNG stream: the same seed writes
    byte-identical files.
    """
    if rng is None:
        rng = np.random.default_rng(config.seed)
    if config.min_fg_frac <= 0 or config.max_fg_frac <= config.min_fg_frac:
        raise ValueError("need 0 < min_fg_frac < max_fg_frac")
    if config.images_per_class < 1 or config.image_size < 16:
        raise ValueError("images_per_class must be >= 1 and image_size >= 16")

    root = Path(config.out_dir)
    image_dir, mask_dir = root / "images", root / "masks"
    if root.exists() and any(root.iterdir()) and not config.force:
        raise FileExistsError(
            f"output directory {root} is not empty (use force to overwrite)"
        )
    image_dir.mkdir(parents=True, exist_ok=True)
    mask_dir.mkdir(parents=True, exist_ok=True)

    for cls, name in enumerate(SHAPE_CLASSES, start=1):
        for i in range(config.images_per_class):
            pixels, mask = render_scene(
                cls, config.image_size, rng, config.max_distractors,
                config.min_fg_frac, config.max_fg_frac, config.noise_std,
            )
            stem = f"{name}_{i:03d}"
            Image.fromarray((pixels * 255.0 + 0.5).astype(np.uint8)).save(
                image_dir / f"{stem}.png")
            Image.fromarray(mask.astype(np.uint8), mode="L").save(
                mask_dir / f"{stem}.png")

    (root / "classes.txt").write_text("\n".join(SHAPE_CLASSES) + "\n")
    return load_dataset(root, image_size=config.image_size)

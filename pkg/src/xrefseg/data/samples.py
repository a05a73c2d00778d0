"""Image/mask sample container and pixel-level helpers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from PIL import Image


@dataclass
class ImageSample:
    """One labeled image: float RGB pixels in [0, 1] plus an integer label map.

    Label 0 is background; positive labels are class ids. `class_of_interest`
    names the label this sample was drawn for (1 after episode binarization).
    """

    pixels: np.ndarray
    mask: np.ndarray
    class_of_interest: int

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels, dtype=np.float32)
        self.mask = np.asarray(self.mask)
        if self.pixels.ndim != 3 or self.pixels.shape[2] != 3:
            raise ValueError(f"pixels must be (H, W, 3), got {self.pixels.shape}")
        if not np.issubdtype(self.mask.dtype, np.integer):
            raise ValueError(f"mask must be integer-valued, got {self.mask.dtype}")
        if self.mask.shape != self.pixels.shape[:2]:
            raise ValueError(
                f"mask shape {self.mask.shape} does not match "
                f"pixel shape {self.pixels.shape[:2]}"
            )

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    def contains_class(self, cls: int) -> bool:
        return bool(np.any(self.mask == cls))

    def binarize(self, cls: int) -> "ImageSample":
        """Reduce the label map to {0, 1} foreground supervision for `cls`."""
        return ImageSample(
            pixels=self.pixels,
            mask=(self.mask == cls).astype(np.int64),
            class_of_interest=1,
        )


def resize_sample(sample: ImageSample, size: int) -> ImageSample:
    """Resize to size x size: bilinear pixels, nearest-neighbor labels."""
    if sample.height == size and sample.width == size:
        return sample
    img = Image.fromarray((sample.pixels * 255.0 + 0.5).astype(np.uint8))
    img = img.resize((size, size), Image.BILINEAR)
    mask = Image.fromarray(sample.mask.astype(np.int32), mode="I")
    mask = mask.resize((size, size), Image.NEAREST)
    return ImageSample(
        pixels=np.asarray(img, dtype=np.float32) / 255.0,
        mask=np.asarray(mask, dtype=np.int64),
        class_of_interest=sample.class_of_interest,
    )


def mask_background(sample: ImageSample, mean_color: np.ndarray) -> ImageSample:
    """Replace pixels outside the class of interest with the dataset mean color.

    The label map is left untouched; only the visual input is filtered.
    """
    mean_color = np.asarray(mean_color, dtype=np.float32).reshape(1, 1, 3)
    keep = (sample.mask == sample.class_of_interest)[:, :, None]
    pixels = np.where(keep, sample.pixels, mean_color)
    return ImageSample(pixels=pixels, mask=sample.mask,
                       class_of_interest=sample.class_of_interest)

"""Category conditioning: pool a class embedding from the labeled region and
fuse it back into the spatial features of both branches."""

from __future__ import annotations

import torch
import torch.nn as nn
import torch.nn.functional as F

# count of pooling calls whose downsampled label region came up empty
# (nearest-neighbor downsampling can erase very small objects)
_EMPTY_REGION_COUNT = 0


def empty_region_count() -> int:
    return _EMPTY_REGION_COUNT


def reset_empty_region_count() -> None:
    global _EMPTY_REGION_COUNT
    _EMPTY_REGION_COUNT = 0


def downsample_labels(mask: torch.Tensor, size: tuple[int, int]) -> torch.Tensor:
    """Nearest-neighbor downsample of an integer label map to `size`."""
    resized = F.interpolate(
        mask[None, None].float(), size=size, mode="nearest"
    )[0, 0]
    return resized.to(mask.dtype)


def foreground_pool(feat: torch.Tensor, mask: torch.Tensor, cls: int) -> torch.Tensor:
    """Average (B, C, H, W) features over positions labeled `cls`.

    The full-resolution label map is downsampled to the feature grid with
    nearest neighbor first. If the downsampled region is empty the zero
    vector is returned and a counter is bumped instead of raising, since
    tiny objects can vanish under downsampling mid-training.
    """
    global _EMPTY_REGION_COUNT
    if feat.ndim != 4:
        raise ValueError(f"expected (B, C, H, W) features, got {tuple(feat.shape)}")
    mask = torch.as_tensor(mask)
    if mask.ndim != 2:
        raise ValueError(f"expected a 2-d label map, got shape {tuple(mask.shape)}")
    if not bool((mask == cls).any()):
        raise ValueError(f"class {cls} is absent from the label map")
    region = downsample_labels(mask, feat.shape[-2:]) == cls
    if not bool(region.any()):
        _EMPTY_REGION_COUNT += 1
        return feat.new_zeros(feat.shape[:2])
    return feat[:, :, region].mean(dim=2)


class ConditionModule(nn.Module):
    """Broadcast the category vector over the grid, concatenate with the
    features, and process with a residual convolution. The same instance
    (one parameter copy) conditions both branches."""

    def __init__(self, in_channels: int, vector_dim: int, out_channels: int = 256):
        super().__init__()
        self.conv_in = nn.Conv2d(in_channels + vector_dim, out_channels,
                                 kernel_size=3, padding=1)
        self.conv_res = nn.Conv2d(out_channels, out_channels,
                                  kernel_size=3, padding=1)
        self.relu = nn.ReLU(inplace=True)
        self.vector_dim = vector_dim

    def forward(self, feat: torch.Tensor, vec: torch.Tensor) -> torch.Tensor:
        if vec.shape[-1] != self.vector_dim:
            raise ValueError(
                f"category vector has dim {vec.shape[-1]}, expected {self.vector_dim}"
            )
        b, _, h, w = feat.shape
        tiled = vec[:, :, None, None].expand(b, self.vector_dim, h, w)
        hid = self.relu(self.conv_in(torch.cat([feat, tiled], dim=1)))
        return self.relu(hid + self.conv_res(hid))

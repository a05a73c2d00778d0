"""Recurrent mask refinement over a cached per-pixel probability map.

One weight-tied module is applied for a configurable number of steps. The
cache starts as an all-zero map; after every step it holds the softmax
probabilities of that step's logits.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
import torch.nn as nn
import torch.nn.functional as F


@dataclass
class ConfidenceCache:
    """probs: (B, 2, H, W). All-zero at step 0; a per-pixel probability
    simplex afterwards."""

    probs: torch.Tensor
    step_index: int


def init_cache(height: int, width: int, batch: int = 1,
               dtype: torch.dtype = torch.float32,
               device: torch.device | str = "cpu") -> ConfidenceCache:
    if height < 1 or width < 1:
        raise ValueError("cache size must be positive")
    return ConfidenceCache(
        probs=torch.zeros(batch, 2, height, width, dtype=dtype, device=device),
        step_index=0,
    )


class GlobalConvBlock(nn.Module):
    """Large-field-of-view block from factorized 1x7 / 7x1 convolutions:
    two parallel orderings, summed."""

    def __init__(self, in_channels: int, channels: int, k: int = 7):
        super().__init__()
        pad = k // 2
        self.row_a = nn.Conv2d(in_channels, channels, (1, k), padding=(0, pad))
        self.col_a = nn.Conv2d(channels, channels, (k, 1), padding=(pad, 0))
        self.col_b = nn.Conv2d(in_channels, channels, (k, 1), padding=(pad, 0))
        self.row_b = nn.Conv2d(channels, channels, (1, k), padding=(0, pad))

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.col_a(self.row_a(x)) + self.row_b(self.col_b(x))


class MaskRefiner(nn.Module):
    """Three blocks per step: a stride-2 downsample over the input features
    (then upsampled back), a global convolution block over the cached
    probability map, and a combine block that fuses the two paths into
    2-channel logits.

    Args:
        in_channels: channel count of the step input features.
        channels: working width of all three blocks.
        detach_cache: stop gradients at the cache between steps (cheaper
            backward for memory-constrained runs).
    """

    def __init__(self, in_channels: int, channels: int = 256,
                 detach_cache: bool = False):
        super().__init__()
        self.down = nn.Conv2d(in_channels, channels, kernel_size=3,
                              stride=2, padding=1)
        self.global_conv = GlobalConvBlock(2, channels)
        self.combine = nn.Sequential(
            nn.Conv2d(2 * channels, channels, kernel_size=3, padding=1),
            nn.ReLU(inplace=True),
            nn.Conv2d(channels, 2, kernel_size=3, padding=1),
        )
        self.relu = nn.ReLU(inplace=True)
        self.detach_cache = detach_cache

    def _fuse(self, feat_path: torch.Tensor, cache_path: torch.Tensor) -> torch.Tensor:
        # single seam for the feature/cache fusion wiring
        return self.combine(torch.cat([feat_path, cache_path], dim=1))

    def step(self, feat: torch.Tensor, cache: ConfidenceCache):
        """One refinement step: returns (logits, updated cache)."""
        if feat.shape[-2:] != cache.probs.shape[-2:]:
            raise ValueError(
                f"feature grid {tuple(feat.shape[-2:])} does not match "
                f"cache grid {tuple(cache.probs.shape[-2:])}"
            )
        h, w = feat.shape[-2:]
        down = self.relu(self.down(feat))
        up = F.interpolate(down, size=(h, w), mode="bilinear", align_corners=False)
        cached = cache.probs.detach() if self.detach_cache else cache.probs
        logits = self._fuse(up, self.global_conv(cached))
        new_cache = ConfidenceCache(
            probs=F.softmax(logits, dim=1),
            step_index=cache.step_index + 1,
        )
        return logits, new_cache

    def forward(self, feat: torch.Tensor, steps: int) -> torch.Tensor:
        """Run `steps` weight-tied refinement steps from a zero cache and
        return the final step's logits."""
        if steps < 1:
            raise ValueError(f"steps must be >= 1, got {steps}")
        cache = init_cache(feat.shape[-2], feat.shape[-1], batch=feat.shape[0],
                           dtype=feat.dtype, device=feat.device)
        logits = None
        for _ in range(steps):
            logits, cache = self.step(feat, cache)
        return logits

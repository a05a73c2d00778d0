"""Auxiliary decoder that predicts the co-occurrent object from gated features.

One decoder instance serves both branches, so predictions swap exactly when
its inputs swap.
"""

from __future__ import annotations

import torch
import torch.nn as nn


class MultiRateBlock(nn.Module):
    """Parallel 3x3 convolutions at several dilation rates, summed."""

    def __init__(self, channels: int, rates: tuple[int, ...] = (1, 6, 12)):
        super().__init__()
        self.branches = nn.ModuleList([
            nn.Conv2d(channels, channels, kernel_size=3, padding=r, dilation=r)
            for r in rates
        ])

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        out = self.branches[0](x)
        for branch in self.branches[1:]:
            out = out + branch(x)
        return out


class CoOccurrenceHead(nn.Module):
    """conv -> multi-rate dilated block -> projection -> 2-channel logits."""

    def __init__(self, in_channels: int, channels: int = 256,
                 rates: tuple[int, ...] = (1, 6, 12)):
        super().__init__()
        self.conv_in = nn.Conv2d(in_channels, channels, kernel_size=3, padding=1)
        self.aspp = MultiRateBlock(channels, rates)
        self.project = nn.Conv2d(channels, channels, kernel_size=3, padding=1)
        self.conv_out = nn.Conv2d(channels, 2, kernel_size=3, padding=1)
        self.relu = nn.ReLU(inplace=True)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        h = self.relu(self.conv_in(x))
        h = self.relu(self.aspp(h))
        h = self.relu(self.project(h))
        return self.conv_out(h)

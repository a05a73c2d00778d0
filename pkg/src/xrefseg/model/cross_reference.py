"""Mutual channel gating between the two branches of an image pair.

Each branch's global average descriptor passes through a two-layer FC stack
and a sigmoid; the two activations are fused by elementwise multiplication,
so only channels active in both images keep a high weight. The fused gate
then rescales both feature maps.
"""

from __future__ import annotations

import torch
import torch.nn as nn


class CrossReferenceGate(nn.Module):
    """Args:
        channels: feature channel count of both inputs.
        reduction: bottleneck ratio of the FC stack (hidden = channels // reduction).
        share_fc: use one FC stack for both branches (keeps the block
            symmetric under branch swap); set False for independent stacks.
    """

    def __init__(self, channels: int, reduction: int = 4, share_fc: bool = True):
        super().__init__()
        hidden = max(channels // reduction, 1)

        def stack():
            return nn.Sequential(
                nn.Linear(channels, hidden),
                nn.ReLU(inplace=True),
                nn.Linear(hidden, channels),
            )

        self.fc_a = stack()
        self.fc_b = self.fc_a if share_fc else stack()
        self.channels = channels
        self.share_fc = share_fc

    def forward(self, feat_a: torch.Tensor, feat_b: torch.Tensor):
        """Returns (gated_a, gated_b, gate) with gate entries in (0, 1)."""
        if feat_a.shape != feat_b.shape:
            raise ValueError(
                f"branch shapes differ: {tuple(feat_a.shape)} vs {tuple(feat_b.shape)}"
            )
        if feat_a.shape[1] != self.channels:
            raise ValueError(
                f"expected {self.channels} channels, got {feat_a.shape[1]}"
            )
        desc_a = torch.sigmoid(self.fc_a(feat_a.mean(dim=(2, 3))))
        desc_b = torch.sigmoid(self.fc_b(feat_b.mean(dim=(2, 3))))
        gate = desc_a * desc_b
        scale = gate[:, :, None, None]
        return feat_a * scale, feat_b * scale, gate

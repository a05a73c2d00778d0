"""Shared image encoder: stride-8 features with the two deepest stages
concatenated. Both images of a pair go through the identical parameter set."""

from __future__ import annotations

import torch
import torch.nn as nn


def _conv(in_ch: int, out_ch: int, stride: int = 1, dilation: int = 1) -> nn.Conv2d:
    # padding chosen so spatial size maps H -> ceil(H / stride)
    return nn.Conv2d(in_ch, out_ch, kernel_size=3, stride=stride,
                     padding=dilation, dilation=dilation)


class ConvEncoder(nn.Module):
    """Four-stage convolutional encoder.

    Stages 1..3 each downsample by 2; stages 3 and 4 use dilated convolutions
    so the output stride stays at 8. The outputs of stages 3 and 4 are
    concatenated, giving multi-level features of width[2] + width[3] channels.
    """

    stride = 8

    def __init__(self, widths: tuple[int, ...] = (32, 64, 128, 128),
                 in_channels: int = 3):
        super().__init__()
        if len(widths) != 4:
            raise ValueError("encoder needs exactly four stage widths")
        w1, w2, w3, w4 = widths
        self.stage1 = nn.Sequential(_conv(in_channels, w1, stride=2), nn.ReLU(inplace=True))
        self.stage2 = nn.Sequential(_conv(w1, w2, stride=2), nn.ReLU(inplace=True))
        self.stage3 = nn.Sequential(
            _conv(w2, w3, stride=2), nn.ReLU(inplace=True),
            _conv(w3, w3, dilation=2), nn.ReLU(inplace=True),
        )
        self.stage4 = nn.Sequential(
            _conv(w3, w4, dilation=4), nn.ReLU(inplace=True),
            _conv(w4, w4, dilation=4), nn.ReLU(inplace=True),
        )
        self.out_channels = w3 + w4

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        x = self.stage2(self.stage1(x))
        mid = self.stage3(x)
        deep = self.stage4(mid)
        return torch.cat([mid, deep], dim=1)


class CallableEncoder(nn.Module):
    """Adapter for externally computed features (e.g. a pretrained backbone).

    Wraps any callable mapping a (B, 3, H, W) image batch to a
    (B, out_channels, ceil(H/8), ceil(W/8)) feature batch. Carries no
    trainable parameters of its own.
    """

    stride = 8

    def __init__(self, fn, out_channels: int):
        super().__init__()
        self.fn = fn
        self.out_channels = out_channels

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        feats = self.fn(x)
        expect_h = -(-x.shape[-2] // self.stride)
        expect_w = -(-x.shape[-1] // self.stride)
        if feats.shape[1] != self.out_channels or feats.shape[-2:] != (expect_h, expect_w):
            raise ValueError(
                f"external features have shape {tuple(feats.shape)}, expected "
                f"(B, {self.out_channels}, {expect_h}, {expect_w})"
            )
        return feats

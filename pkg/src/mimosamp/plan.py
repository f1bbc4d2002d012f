"""Sampling-plan arithmetic: per-channel sample count, band blocks, folding.

Given M output channels, R input channels and a frequency band
``[lo, hi]``, the plan fixes ``folds = floor(M / R)`` and the minimal
per-channel sample count ``L`` with ``folds * L >= hi - lo + 1``.  The band
is then widened upward so its width equals ``folds * L`` exactly, and is
tiled by ``folds`` consecutive blocks of length ``L``.  All folding
arithmetic used elsewhere (which block a frequency lands in, the residue in
the first block) lives here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientChannelsError, OutOfBandError

__all__ = [
    "SamplingPlan",
    "make_plan",
    "block_of",
    "block_any",
    "block_range",
    "grid_instants",
]


@dataclass(frozen=True)
class SamplingPlan:
    outputs: int   # number of output channels (M)
    inputs: int    # number of input channels (R)
    lo: int        # band lower edge
    hi: int        # band upper edge, after extension
    folds: int     # floor(outputs / inputs)
    length: int    # samples per output channel (L)

    @property
    def width(self) -> int:
        """Number of frequency indices in the band."""
        return self.hi - self.lo + 1

    @property
    def stack(self) -> int:
        """Length of the stacked coefficient vector per bin: folds * inputs."""
        return self.folds * self.inputs

    @property
    def total_samples(self) -> int:
        return self.outputs * self.length

    @property
    def band(self) -> range:
        return range(self.lo, self.hi + 1)


def make_plan(outputs: int, inputs: int, lo: int, hi: int) -> SamplingPlan:
    """Build the minimal sampling plan for the given channel counts and band.

    Raises InsufficientChannelsError when outputs < inputs (recovery is then
    impossible regardless of the sampling rate).
    """
    if inputs < 1:
        raise ValueError(f"need at least one input channel, got {inputs}")
    if outputs < inputs:
        raise InsufficientChannelsError(
            f"{outputs} output channel(s) cannot determine {inputs} input channel(s)"
        )
    if hi < lo:
        raise ValueError(f"empty band [{lo}, {hi}]")
    folds = outputs // inputs
    width = hi - lo + 1
    length = -(-width // folds)  # ceil(width / folds): minimal L
    extended_hi = lo + folds * length - 1
    return SamplingPlan(outputs, inputs, lo, extended_hi, folds, length)


def block_any(plan: SamplingPlan, n: int) -> tuple[int, int]:
    """Block number and first-block residue for any integer frequency.

    Blocks ``k`` extend over all of Z: block k covers
    ``[lo + (k-1) L, lo + k L - 1]``, so k = 1..folds tiles the band and
    other k index its aliases.  Returns ``(k, base)`` with
    ``base = n - (k-1) L`` in the first block.
    """
    k = (n - plan.lo) // plan.length + 1
    return k, n - (k - 1) * plan.length


def block_of(plan: SamplingPlan, n: int) -> tuple[int, int]:
    """Like block_any, but restricted to the band; raises OutOfBandError."""
    if n < plan.lo or n > plan.hi:
        raise OutOfBandError(f"frequency {n} outside band [{plan.lo}, {plan.hi}]")
    return block_any(plan, n)


def block_range(plan: SamplingPlan, k: int) -> range:
    """Frequencies of block ``k`` (any integer k, Z-indexed tiling)."""
    start = plan.lo + (k - 1) * plan.length
    return range(start, start + plan.length)


def grid_instants(plan: SamplingPlan) -> np.ndarray:
    """The uniform sampling instants t_p = 2 pi p / L, p = 0..L-1."""
    return 2.0 * np.pi * np.arange(plan.length) / plan.length

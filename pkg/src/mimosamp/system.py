"""MIMO LTI channel banks described by per-frequency multipliers.

A channel is a map n -> b(n) (the Fourier multiplier of its impulse
response); a system is an M x R grid of channels.  The module simulates
outputs in coefficient space, samples them on a plan's grid, and folds the
per-frequency system matrices used for recovery.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import CapacityError, ConfigError
from .plan import SamplingPlan, grid_instants
from .spectrum import Signal, SpectrumSignal, cyclic_convolve, dirichlet_bandlimit

__all__ = [
    "ChannelResponse",
    "Constant",
    "Derivative",
    "Translation",
    "LinearCombo",
    "Tabulated",
    "MimoSystem",
    "OutputSamples",
    "FoldedSystemMatrix",
    "simulate_outputs",
    "sample_outputs",
    "fold_system",
    "rank_certificate",
]


class ChannelResponse(abc.ABC):
    """Frequency response of one LTI channel; callable on ints or int arrays."""

    @abc.abstractmethod
    def __call__(self, n):
        ...


@dataclass(frozen=True)
class Constant(ChannelResponse):
    """Pure gain: b(n) = gain."""

    gain: complex

    def __call__(self, n):
        n = np.asarray(n)
        out = np.full(n.shape, complex(self.gain))
        return complex(out) if n.ndim == 0 else out


@dataclass(frozen=True)
class Derivative(ChannelResponse):
    """Time derivative of the given order: b(n) = (i n)^order."""

    order: int = 1

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"derivative order must be positive, got {self.order}")

    def __call__(self, n):
        n = np.asarray(n)
        out = (1j * n.astype(float)) ** self.order
        return complex(out) if n.ndim == 0 else out


@dataclass(frozen=True)
class Translation(ChannelResponse):
    """Time advance by alpha: x(t + alpha), i.e. b(n) = e^{i n alpha}."""

    alpha: float

    def __call__(self, n):
        n = np.asarray(n)
        out = np.exp(1j * self.alpha * n.astype(float))
        return complex(out) if n.ndim == 0 else out


@dataclass(frozen=True)
class LinearCombo(ChannelResponse):
    """Weighted sum of component responses."""

    terms: tuple[tuple[complex, ChannelResponse], ...]

    def __call__(self, n):
        n = np.asarray(n)
        out = np.zeros(n.shape, dtype=complex)
        for weight, part in self.terms:
            out = out + complex(weight) * np.asarray(part(n))
        return complex(out) if n.ndim == 0 else out


class Tabulated(ChannelResponse):
    """Explicit n -> b(n) table over a finite range; zero elsewhere.

    Escape hatch for custom experiments that the closed kinds do not cover.
    """

    __slots__ = ("_values",)

    def __init__(self, values: Mapping[int, complex]):
        self._values = {int(n): complex(c) for n, c in values.items()}

    @property
    def values(self) -> dict[int, complex]:
        return dict(self._values)

    def __call__(self, n):
        arr = np.asarray(n)
        flat = np.atleast_1d(arr)
        out = np.array([self._values.get(int(v), 0j) for v in flat], dtype=complex)
        return complex(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)

    def __eq__(self, other):
        return isinstance(other, Tabulated) and self._values == other._values

    def __hash__(self):
        return hash(frozenset(self._values.items()))

    def __repr__(self):
        return f"Tabulated({len(self._values)} entries)"


class MimoSystem:
    """Rectangular grid of channel responses: entry (m, r) filters input r
    into output m."""

    __slots__ = ("responses", "n_outputs", "n_inputs")

    def __init__(self, responses: Sequence[Sequence[ChannelResponse]]):
        rows = tuple(tuple(row) for row in responses)
        if not rows or not rows[0]:
            raise ValueError("system grid must be non-empty")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise ValueError("system grid must be rectangular")
        object.__setattr__(self, "responses", rows)
        object.__setattr__(self, "n_outputs", len(rows))
        object.__setattr__(self, "n_inputs", width)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("MimoSystem is immutable")

    def response(self, m: int, r: int) -> ChannelResponse:
        return self.responses[m][r]


@dataclass(frozen=True)
class OutputSamples:
    """Sampled output grid plus the l1 tail left out by input truncation."""

    values: np.ndarray       # (M, L) complex
    truncation_tail: float


@dataclass(frozen=True)
class FoldedSystemMatrix:
    """Per-bin folded system matrices for a plan.

    ``matrices[k]`` is the M x (folds * R) matrix at frequency
    ``n = lo + k``; its column ``folds * r + s`` holds the response of
    channel (m, r) evaluated at ``n + s * L``.
    """

    plan: SamplingPlan
    matrices: np.ndarray     # (L, M, folds * R)

    def matrix_at(self, n: int) -> np.ndarray:
        k = n - self.plan.lo
        if k < 0 or k >= self.plan.length:
            raise ValueError(f"{n} is not in the first block of the plan")
        return self.matrices[k]


def _materialize(signal: Signal, truncation: int | None) -> tuple[SpectrumSignal, float]:
    """Coefficient form of a signal plus the declared truncation tail."""
    if isinstance(signal, SpectrumSignal):
        return signal, 0.0
    cutoff = signal.max_index if truncation is None else truncation
    if cutoff > signal.max_index:
        raise CapacityError(
            f"truncation {cutoff} exceeds declared max_index {signal.max_index}"
        )
    return dirichlet_bandlimit(signal, cutoff), float(signal.tail_bound(cutoff))


def simulate_outputs(system: MimoSystem, inputs: Sequence[SpectrumSignal]) -> list[SpectrumSignal]:
    """Push coefficient-space inputs through the system: c_m(n) = sum_r b_mr(n) a_r(n)."""
    if len(inputs) != system.n_inputs:
        raise ValueError(
            f"system expects {system.n_inputs} inputs, got {len(inputs)}"
        )
    outputs = []
    for m in range(system.n_outputs):
        acc = SpectrumSignal()
        for r, x in enumerate(inputs):
            acc = acc + cyclic_convolve(x, system.response(m, r))
        outputs.append(acc)
    return outputs


def sample_outputs(
    system: MimoSystem,
    inputs: Sequence[Signal],
    plan: SamplingPlan,
    truncation: int | None = None,
) -> OutputSamples:
    """Sample every output channel on the plan's uniform grid.

    Analytic inputs are truncated to ``|n| <= truncation`` first (their
    declared ``max_index`` by default) and the summed coefficient tail bound
    is reported alongside the grid.
    """
    materialized, tails = [], 0.0
    for x in inputs:
        spec, tail = _materialize(x, truncation)
        materialized.append(spec)
        tails += tail
    outputs = simulate_outputs(system, materialized)
    t = grid_instants(plan)
    values = np.stack([np.asarray(y.eval(t)) for y in outputs])
    return OutputSamples(values=values, truncation_tail=tails)


def fold_system(system: MimoSystem, plan: SamplingPlan) -> FoldedSystemMatrix:
    """Build the per-bin folded matrices relating stacked input coefficients
    to folded output coefficients."""
    if system.n_outputs != plan.outputs or system.n_inputs != plan.inputs:
        raise ConfigError(
            f"system is {system.n_outputs}x{system.n_inputs} but the plan expects "
            f"{plan.outputs}x{plan.inputs}"
        )
    L, folds = plan.length, plan.folds
    base = plan.lo + np.arange(L)
    matrices = np.empty((L, plan.outputs, plan.stack), dtype=complex)
    for m in range(plan.outputs):
        for r in range(plan.inputs):
            resp = system.response(m, r)
            for s in range(folds):
                matrices[:, m, folds * r + s] = resp(base + s * L)
    return FoldedSystemMatrix(plan=plan, matrices=matrices)


def rank_certificate(folded: FoldedSystemMatrix, tol: float = 1e-10) -> list[int]:
    """Frequencies of the first block whose folded matrix is rank deficient.

    Deficiency means the smallest singular value is at most ``tol`` times
    the largest.  An empty list certifies that recovery is possible.
    """
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    deficient = []
    for k in range(folded.plan.length):
        sv = np.linalg.svd(folded.matrices[k], compute_uv=False)
        if sv[-1] <= tol * sv[0]:
            deficient.append(folded.plan.lo + k)
    return deficient

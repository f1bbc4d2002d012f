"""Fourier-series signal model on the unit circle.

Signals live in coefficient space: a trigonometric polynomial
``x(t) = sum_n a(n) exp(i n t)`` is represented by its sparse coefficient
map, and every operation (evaluation, convolution with an LTI channel,
translation, band limiting) acts on coefficients directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Callable, Mapping, Union

import numpy as np

from .errors import CapacityError

__all__ = [
    "SpectrumSignal",
    "AnalyticSignal",
    "cyclic_convolve",
    "dirichlet_bandlimit",
    "energy_distance",
]


class SpectrumSignal:
    """A trigonometric polynomial stored as a finite map frequency -> coefficient.

    Entries that are exactly zero are dropped at construction, so algebraic
    identities (support bookkeeping, equality) are bit-stable.  Instances are
    immutable; all operations return new signals.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, complex] | None = None):
        data = {}
        if coeffs:
            for n, c in coeffs.items():
                c = complex(c)
                if c != 0:
                    data[int(n)] = c
        object.__setattr__(self, "_coeffs", data)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("SpectrumSignal is immutable")

    @property
    def coeffs(self) -> Mapping[int, complex]:
        return MappingProxyType(self._coeffs)

    def coeff(self, n: int) -> complex:
        """Coefficient at frequency ``n`` (zero off the support)."""
        return self._coeffs.get(int(n), 0j)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self._coeffs))

    def eval(self, t):
        """Evaluate ``sum_n a(n) exp(i n t)`` at a scalar or array of angles."""
        t_arr = np.asarray(t, dtype=float)
        if not self._coeffs:
            out = np.zeros(t_arr.shape, dtype=complex)
        else:
            ns = np.fromiter(self._coeffs.keys(), dtype=float, count=len(self._coeffs))
            cs = np.fromiter(self._coeffs.values(), dtype=complex, count=len(self._coeffs))
            out = np.exp(1j * np.multiply.outer(t_arr, ns)) @ cs
        return complex(out) if t_arr.ndim == 0 else out

    def translate(self, tau: float) -> "SpectrumSignal":
        """Signal delayed by ``tau``: x(t - tau), i.e. a(n) -> a(n) e^{-i n tau}."""
        if tau == 0:
            return self
        return SpectrumSignal(
            {n: c * np.exp(-1j * n * tau) for n, c in self._coeffs.items()}
        )

    def energy(self) -> float:
        """Squared L2 norm on the circle, by Parseval: sum |a(n)|^2."""
        return float(sum(abs(c) ** 2 for c in self._coeffs.values()))

    def __add__(self, other: "SpectrumSignal") -> "SpectrumSignal":
        data = dict(self._coeffs)
        for n, c in other._coeffs.items():
            data[n] = data.get(n, 0j) + c
        return SpectrumSignal(data)

    def __sub__(self, other: "SpectrumSignal") -> "SpectrumSignal":
        return self + (-1.0) * other

    def __rmul__(self, scalar: complex) -> "SpectrumSignal":
        return SpectrumSignal({n: scalar * c for n, c in self._coeffs.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, SpectrumSignal) and self._coeffs == other._coeffs

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __repr__(self) -> str:
        return f"SpectrumSignal({len(self._coeffs)} coefficients)"


@dataclass(frozen=True)
class AnalyticSignal:
    """A periodic signal given in closed form, with a coefficient provider.

    ``coeff_provider(n)`` must agree with a discrete transform of
    ``time_eval`` sampled on a ``4 * max_index`` grid, up to the declared
    ``tail_bound``.  Coefficients beyond ``max_index`` are treated as zero;
    ``tail_bound(K)`` bounds the l1 mass of the coefficients left out when
    truncating at ``|n| <= K``.
    """

    time_eval: Callable[[np.ndarray], np.ndarray]
    coeff_provider: Callable[[int], complex]
    max_index: int
    tail_bound: Callable[[int], float]


Signal = Union[SpectrumSignal, AnalyticSignal]


def cyclic_convolve(x: SpectrumSignal, response: Callable[[int], complex]) -> SpectrumSignal:
    """Cyclic convolution with an LTI channel, as a coefficient-wise product.

    ``response`` maps a frequency index to the channel's complex multiplier
    b(n); the result has coefficients a(n) b(n) and support within x's.
    """
    return SpectrumSignal({n: c * complex(response(n)) for n, c in x.coeffs.items()})


def dirichlet_bandlimit(signal: Signal, cutoff: int) -> SpectrumSignal:
    """Ideal low-pass truncation to the symmetric band [-cutoff, cutoff].

    Equivalent to cyclic convolution with the order-``cutoff`` Dirichlet
    kernel ``sum_{|k| <= cutoff} exp(i k t)``.  Accepts either representation;
    an AnalyticSignal must declare coefficients at least up to the cutoff.
    """
    if cutoff < 0:
        raise ValueError(f"cutoff must be nonnegative, got {cutoff}")
    if isinstance(signal, SpectrumSignal):
        return SpectrumSignal(
            {n: c for n, c in signal.coeffs.items() if abs(n) <= cutoff}
        )
    if cutoff > signal.max_index:
        raise CapacityError(
            f"cutoff {cutoff} exceeds the declared coefficient range "
            f"(max_index={signal.max_index})"
        )
    return SpectrumSignal(
        {n: signal.coeff_provider(n) for n in range(-cutoff, cutoff + 1)}
    )


def energy_distance(x: SpectrumSignal, y: SpectrumSignal) -> float:
    """L2(T) distance between two signals, computed in coefficient space."""
    keys = set(x.coeffs) | set(y.coeffs)
    return float(np.sqrt(sum(abs(x.coeff(n) - y.coeff(n)) ** 2 for n in keys)))

"""Built-in MIMO systems and test signals used by the CLI and experiments.

Eight reference systems are catalogued, each with a closed-form left-inverse
table.  Five of them are exposed as named sampling schemes:

==========  =====================================  ==============
scheme      system                                 channels (MxR)
==========  =====================================  ==============
``s22d``    derivative cross-coupling              2x2
``s22t``    translation pair with gain 2           2x2
``s23t``    three-channel translation bank         3x2
``s23d``    three-channel derivative bank          3x2
``s24d``    four-channel derivative bank           4x2
==========  =====================================  ==============

Translation schemes leave their shift parameter free; by repo convention it
defaults to ``2 pi 0.37 / L`` so that the shift times the channel length is
never a whole number of periods (which would make the folded matrices
singular for the four-channel translation bank).

Signal presets: ``bl51`` is a pair of windowed oscillations passed through an
ideal low-pass filter of bandwidth 51; ``hardy`` is a pair of non-band-limited
signals built from rational functions analytic on the closed unit disk (all
poles at modulus 1.2 or beyond, so their coefficients decay like 1.2^-|n|).
Coefficients come from a 4096-point transform of the closed-form time
functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import ConfigError
from .plan import SamplingPlan, make_plan
from .spectrum import AnalyticSignal, SpectrumSignal, dirichlet_bandlimit
from .system import Constant, Derivative, LinearCombo, MimoSystem, Translation

__all__ = [
    "SystemPreset",
    "EXAMPLES",
    "SCHEMES",
    "SIGNAL_PRESETS",
    "default_alpha",
    "centered_band",
    "build_scheme",
    "signal_pair",
    "oscillator_pair",
    "hardy_pair",
    "lowpass_pair",
    "analytic_from_time",
]

TRANSFORM_GRID = 4096
MAX_INDEX = TRANSFORM_GRID // 4


# ---------------------------------------------------------------------------
# Test signals
# ---------------------------------------------------------------------------

def _osc1(t):
    t = np.asarray(t, dtype=float) % (2.0 * np.pi)
    poly = 0.12 * t**4 - 1.28 * t**3 - 5.88 * t**2 + np.exp(-(t**2)) - 4.38 * t + 32.2325
    return 0.015 * poly * np.sin(15 * t) * np.cos(1.5 - t)


def _osc2(t):
    t = np.asarray(t, dtype=float) % (2.0 * np.pi)
    poly = -0.3 * t**4 + 1.2 * t**3 + 1.6 * t**2 + 2 * np.exp(-(t**2)) - 3 * t + 35
    return 0.03 * poly * np.sin(2 * t) * np.cos(15 * t)


def _rational1(z):
    return (0.08 * z**2 + 0.06 * z**10) / ((1.3 - z) * (1.5 - z)) + (
        0.05 * z**3 + 0.09 * z**10
    ) / ((1.2 + z) * (1.3 + z))


def _rational2(z):
    return (0.036 * z**10 + 0.024 * z**2) / ((z - 1.3) * (1.6 - z)) - (
        0.06 * z**10 + 0.048 * z**3
    ) / ((z + 1.2) * (z + 1.35))


def _disk_boundary(rational):
    def time_eval(t):
        return np.real(rational(np.exp(1j * np.asarray(t, dtype=float))))

    return time_eval


def _transform_cache(time_eval, grid: int) -> np.ndarray:
    t = 2.0 * np.pi * np.arange(grid) / grid
    return np.fft.fft(np.asarray(time_eval(t), dtype=complex)) / grid


def _geometric_tail(cache: np.ndarray, ratio: float = 1.2) -> Callable[[int], float]:
    # coefficient envelope c * ratio^-|n|, fitted away from n = 0
    ns = np.arange(2, 121)
    c = float(
        max(
            (np.abs(cache[ns]) * ratio**ns).max(),
            (np.abs(cache[-ns]) * ratio**ns).max(),
        )
    )

    def bound(cutoff: int) -> float:
        # sum of both geometric tails beyond the cutoff
        return 10.0 * c * ratio ** (-cutoff)

    return bound


def _quadratic_tail(cache: np.ndarray) -> Callable[[int], float]:
    # coefficient envelope c / n^2 (periodic extension has a derivative kink)
    ns = np.arange(8, len(cache) // 4)
    c = float(max((np.abs(cache[ns]) * ns**2).max(), (np.abs(cache[-ns]) * ns**2).max()))

    def bound(cutoff: int) -> float:
        return 2.0 * c / max(cutoff, 1)

    return bound


def analytic_from_time(time_eval, tail_envelope, grid: int = TRANSFORM_GRID) -> AnalyticSignal:
    """Wrap a closed-form periodic function with transform-backed coefficients.

    Coefficients are the length-``grid`` discrete transform of the sampled
    time function; indices up to ``grid // 4`` are declared usable.
    """
    cache = _transform_cache(time_eval, grid)
    max_index = grid // 4

    def provider(n: int) -> complex:
        if abs(n) > max_index:
            return 0j
        return complex(cache[n % grid])

    return AnalyticSignal(
        time_eval=time_eval,
        coeff_provider=provider,
        max_index=max_index,
        tail_bound=tail_envelope(cache),
    )


@lru_cache(maxsize=None)
def oscillator_pair() -> tuple[AnalyticSignal, AnalyticSignal]:
    """The raw windowed-oscillation pair (not band-limited).

    Their periodic extensions have a derivative kink at the period boundary,
    so the coefficients decay only quadratically; a finer transform grid
    keeps the aliasing in the stored coefficients negligible.
    """
    return (
        analytic_from_time(_osc1, _quadratic_tail, grid=65536),
        analytic_from_time(_osc2, _quadratic_tail, grid=65536),
    )


@lru_cache(maxsize=None)
def hardy_pair() -> tuple[AnalyticSignal, AnalyticSignal]:
    """Boundary values of two rational functions analytic on the unit disk."""
    return (
        analytic_from_time(_disk_boundary(_rational1), _geometric_tail),
        analytic_from_time(_disk_boundary(_rational2), _geometric_tail),
    )


@lru_cache(maxsize=None)
def lowpass_pair(cutoff: int = 25) -> tuple[SpectrumSignal, SpectrumSignal]:
    """The oscillation pair through an ideal low pass (bandwidth 2*cutoff+1)."""
    return tuple(dirichlet_bandlimit(s, cutoff) for s in oscillator_pair())


SIGNAL_PRESETS: dict[str, Callable[[], tuple]] = {
    "bl51": lowpass_pair,
    "hardy": hardy_pair,
}


def signal_pair(name: str):
    try:
        return SIGNAL_PRESETS[name]()
    except KeyError:
        raise ConfigError(
            f"unknown signal preset {name!r}; choose from {sorted(SIGNAL_PRESETS)}"
        ) from None


# ---------------------------------------------------------------------------
# System presets
# ---------------------------------------------------------------------------

InverseTable = Callable[[int], np.ndarray]


@dataclass(frozen=True)
class SystemPreset:
    """One catalogued MIMO system with its closed-form left-inverse table."""

    key: str
    description: str
    n_outputs: int
    n_inputs: int
    uses_translation: bool
    weight_bound: float
    _builder: Callable[[float], MimoSystem]
    _inverse: Callable[[SamplingPlan, float], InverseTable]

    @property
    def folds(self) -> int:
        return self.n_outputs // self.n_inputs

    def build(self, alpha: float = 0.0) -> MimoSystem:
        return self._builder(alpha)

    def inverse_table(self, plan: SamplingPlan, alpha: float = 0.0) -> InverseTable:
        return self._inverse(plan, alpha)


def _sys1(alpha):
    return MimoSystem([[Constant(1), Derivative(1)], [Derivative(1), Constant(1)]])


def _inv1(plan, alpha):
    def table(n):
        return np.array([[1, -1j * n], [-1j * n, 1]], dtype=complex) / (n * n + 1)

    return table


def _sys2(alpha):
    return MimoSystem(
        [[Constant(1), Translation(alpha)], [Translation(alpha), Constant(2)]]
    )


def _inv2(plan, alpha):
    def table(n):
        w = np.exp(1j * alpha * n)
        return np.array([[2, -w], [-w, 1]], dtype=complex) / (2 - w * w)

    return table


def _sys3(alpha):
    both = LinearCombo(((1, Constant(1)), (1, Derivative(1))))
    return MimoSystem([[Constant(1), Derivative(1)], [both, Constant(1)]])


def _inv3(plan, alpha):
    def table(n):
        return np.array(
            [[1, -1j * n], [-1 - 1j * n, 1]], dtype=complex
        ) / (n * n - 1j * n + 1)

    return table


def _sys4(alpha):
    return MimoSystem([[Constant(1), Translation(alpha)], [Derivative(1), Constant(1)]])


def _inv4(plan, alpha):
    def table(n):
        w = np.exp(1j * alpha * n)
        return np.array([[1, -w], [-1j * n, 1]], dtype=complex) / (1 - 1j * n * w)

    return table


def _sys5(alpha):
    return MimoSystem(
        [
            [Constant(1), Translation(alpha)],
            [Translation(alpha), Constant(1)],
            [Constant(2), Constant(1)],
        ]
    )


def _inv5(plan, alpha):
    def table(n):
        w = np.exp(1j * alpha * n)
        denom = 6 - 8 * w + 3 * w**2 + w**4
        return (
            np.array(
                [
                    [2 - 2 * w - w**2, w**3 - 2, 2 * (1 - w + w**2)],
                    [3 * w + w**3 - 2, 5 - 2 * w - w**2, 1 - 4 * w + w**2],
                ],
                dtype=complex,
            )
            / denom
        )

    return table


def _sys6(alpha):
    return MimoSystem(
        [
            [Constant(1), Constant(1)],
            [Constant(1), Derivative(1)],
            [Derivative(1), Constant(1)],
        ]
    )


def _inv6(plan, alpha):
    def table(n):
        d1 = 2j * n + 3 - n * n
        d2 = 1j * n * n + n + 3j - n**3
        return np.array(
            [
                [1 / d1, (2j - n) / d2, (1j * n * n + n - 1j) / d2],
                [1 / d1, (1j * n * n + n - 1j) / d2, (2j - n) / d2],
            ],
            dtype=complex,
        )

    return table


def _sys7(alpha):
    return MimoSystem(
        [
            [Constant(2), Constant(1)],
            [Constant(1), Derivative(1)],
            [Derivative(1), Constant(1)],
            [Derivative(1), Derivative(1)],
        ]
    )


def _inv7(plan, alpha):
    L = plan.length

    def table(n):
        v = n + L
        return (
            np.array(
                [
                    [v + 1j, -(v + 2j), -(v + 1j), v + 2j],
                    [-(n + 1j), n + 2j, n + 1j, -(n + 2j)],
                    [-(v + 1j), 2 * (v + 1j), 2 * v + 1j, -(2 * v + 1j)],
                    [n + 1j, -2 * (n + 1j), -(2 * n + 1j), 2 * n + 1j],
                ],
                dtype=complex,
            )
            / L
        )

    return table


def _sys8(alpha):
    return MimoSystem(
        [
            [Constant(2), Constant(1)],
            [Translation(alpha), Constant(1)],
            [Constant(1), Translation(alpha)],
            [Translation(alpha), Translation(alpha)],
        ]
    )


def _inv8(plan, alpha):
    L = plan.length

    def table(n):
        u = np.exp(-1j * alpha * n)
        v = np.exp(1j * alpha * L)
        denom = 1 - v
        return (
            np.array(
                [
                    [u - v, v - u, v - 2 * u, 2 * u - v],
                    [1 - u, u - 1, 2 * u - 1, 1 - 2 * u],
                    [v - u, u - 2 * v, 2 * u - 2 * v, 2 * v - u],
                    [u - 1, 2 - u, 2 - 2 * u, u - 2],
                ],
                dtype=complex,
            )
            / denom
        )

    return table


EXAMPLES: tuple[SystemPreset, ...] = (
    SystemPreset("ex1", "2x2 derivative cross-coupling", 2, 2, False, 1.0, _sys1, _inv1),
    SystemPreset("ex2", "2x2 translation pair, gain 2", 2, 2, True, 2.0, _sys2, _inv2),
    SystemPreset("ex3", "2x2 derivative with feed-through", 2, 2, False, 1.0, _sys3, _inv3),
    SystemPreset("ex4", "2x2 translation/derivative mix", 2, 2, True, 4.0, _sys4, _inv4),
    SystemPreset("ex5", "3x2 translation bank", 3, 2, True, 20.0, _sys5, _inv5),
    SystemPreset("ex6", "3x2 derivative bank", 3, 2, False, 1.0, _sys6, _inv6),
    SystemPreset("ex7", "4x2 derivative bank", 4, 2, False, 4.0, _sys7, _inv7),
    SystemPreset("ex8", "4x2 translation bank", 4, 2, True, 2.0 * np.sqrt(2.0), _sys8, _inv8),
)

SCHEMES: dict[str, SystemPreset] = {
    "s22d": EXAMPLES[0],
    "s22t": EXAMPLES[1],
    "s23t": EXAMPLES[4],
    "s23d": EXAMPLES[5],
    "s24d": EXAMPLES[6],
}


def default_alpha(length: int) -> float:
    """Repo-convention translation shift: 0.37 of one sampling period."""
    return 2.0 * np.pi * 0.37 / length


def centered_band(preset: SystemPreset, length: int) -> tuple[int, int]:
    """Near-symmetric band whose width matches ``folds * length`` exactly."""
    width = preset.folds * length
    lo = -((width - 1) // 2)
    return lo, lo + width - 1


def build_scheme(
    scheme: str,
    lo: int = -25,
    hi: int = 25,
    alpha: float | None = None,
    length: int | None = None,
) -> tuple[SamplingPlan, MimoSystem, InverseTable, float]:
    """Instantiate a named scheme on a band.

    When ``length`` is given it overrides the band with the centered band of
    matching width, fixing the per-channel sample count directly.  Returns
    the plan, the system, the preset's closed-form inverse table, and the
    shift parameter actually used (zero for derivative schemes).
    """
    try:
        preset = SCHEMES[scheme]
    except KeyError:
        raise ConfigError(
            f"unknown scheme {scheme!r}; choose from {sorted(SCHEMES)}"
        ) from None
    if length is not None:
        lo, hi = centered_band(preset, length)
    plan = make_plan(preset.n_outputs, preset.n_inputs, lo, hi)
    if preset.uses_translation:
        shift = default_alpha(plan.length) if alpha is None else alpha
    else:
        shift = 0.0
    system = preset.build(shift)
    return plan, system, preset.inverse_table(plan, shift), shift

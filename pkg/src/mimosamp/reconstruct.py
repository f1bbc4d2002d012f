"""Signal recovery from MIMO output samples.

Two routes are provided and must agree:

* the fast pipeline ``fft_reconstruct``: modulate the sample grid, take a
  length-L transform per channel, apply the per-bin left inverse, unfold
  the stacked coefficients, zero pad and inverse transform to any output
  resolution;
* the direct formula ``direct_reconstruct``: evaluate
  ``x_r(t) = (1/L) sum_m sum_p y_m(t_p) g_rm(t - t_p)`` literally, with the
  interpolation kernels ``g_rm`` built from the unfolded left-inverse
  entries.  It is the slow cross-checking oracle for the fast path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import InvalidInverseError, SingularSystemError
from .plan import SamplingPlan
from .spectrum import SpectrumSignal
from .system import FoldedSystemMatrix, rank_certificate

__all__ = [
    "Reconstructor",
    "ReconstructionRequest",
    "left_inverse",
    "recover_coefficients",
    "unstack_spectra",
    "fft_reconstruct",
    "interpolation_kernel",
    "direct_reconstruct",
]

QTable = Callable[[int], np.ndarray] | Mapping[int, np.ndarray]


@dataclass(frozen=True)
class Reconstructor:
    """Per-bin left inverses plus their unfolded interpolation weights.

    ``inverses[k]`` is the (folds*R) x M left inverse of the folded matrix
    at bin ``n = lo + k``.  ``weights[r, m, j]`` is the interpolation weight
    at frequency ``n = lo + j`` for input r and channel m: the inverse entry
    in row ``folds*r + (k-1)`` and column m, where ``(k, base)`` is the block
    decomposition of n.  Weights vanish outside the band.
    """

    plan: SamplingPlan
    inverses: np.ndarray    # (L, folds*R, M)
    weights: np.ndarray     # (R, M, width)
    source: str             # "pseudoinverse" | "explicit"

    def inverse_at(self, n: int) -> np.ndarray:
        k = n - self.plan.lo
        if k < 0 or k >= self.plan.length:
            raise ValueError(f"{n} is not in the first block of the plan")
        return self.inverses[k]

    def weight_at(self, r: int, m: int, n: int) -> complex:
        """Interpolation weight for input r, channel m at frequency n."""
        if not (0 <= r < self.plan.inputs and 0 <= m < self.plan.outputs):
            raise IndexError(f"channel pair ({r}, {m}) out of range")
        if n < self.plan.lo or n > self.plan.hi:
            return 0j
        return complex(self.weights[r, m, n - self.plan.lo])

    @property
    def max_weight(self) -> float:
        """Largest interpolation-weight modulus over the band and all pairs."""
        return float(np.abs(self.weights).max())


@dataclass(frozen=True)
class ReconstructionRequest:
    """Number of uniformly spaced output values to produce per input channel."""

    output_counts: tuple[int, ...]

    def __init__(self, output_counts: Sequence[int]):
        object.__setattr__(self, "output_counts", tuple(int(c) for c in output_counts))


def _unfold_weights(plan: SamplingPlan, inverses: np.ndarray) -> np.ndarray:
    """Spread inverse rows across the band blocks.

    The weight at ``n = base + (k-1) L`` (block k, first-block residue base)
    is the inverse entry at bin ``base``, row ``folds*r + (k-1)``, column m.
    """
    weights = np.empty((plan.inputs, plan.outputs, plan.width), dtype=complex)
    for r in range(plan.inputs):
        for s in range(plan.folds):
            # block s+1 covers band offsets s*L .. s*L + L - 1
            rows = inverses[:, plan.folds * r + s, :]       # (L, M)
            weights[r, :, s * plan.length:(s + 1) * plan.length] = rows.T
    return weights


def left_inverse(
    folded: FoldedSystemMatrix,
    mode: str = "pseudoinverse",
    table: QTable | None = None,
    tol: float = 1e-8,
) -> Reconstructor:
    """Build a reconstructor from per-bin left inverses of the folded matrices.

    Parameters
    ----------
    folded:
        Output of ``fold_system``.
    mode:
        ``"pseudoinverse"`` computes the minimum-norm left inverse per bin
        (conjugate-transpose normal equations, evaluated through an SVD).
        ``"explicit"`` adopts a supplied table after validating it.
    table:
        For explicit mode: a callable ``n -> matrix`` or a mapping keyed by
        the first-block frequencies.
    tol:
        Maximum entrywise deviation allowed in the inverse identity.

    Raises
    ------
    SingularSystemError
        If any bin is rank deficient (pseudoinverse mode), naming the bins.
    InvalidInverseError
        If a supplied or computed inverse violates the identity beyond tol.
    """
    plan = folded.plan
    L = plan.length
    inverses = np.empty((L, plan.stack, plan.outputs), dtype=complex)
    if mode == "pseudoinverse":
        deficient = rank_certificate(folded)
        if deficient:
            raise SingularSystemError(deficient)
        for k in range(L):
            inverses[k] = np.linalg.pinv(folded.matrices[k])
    elif mode == "explicit":
        if table is None:
            raise ValueError("explicit mode requires a left-inverse table")
        lookup = table if callable(table) else lambda n: table[n]
        for k in range(L):
            q = np.asarray(lookup(plan.lo + k), dtype=complex)
            if q.shape != (plan.stack, plan.outputs):
                raise InvalidInverseError(
                    f"inverse at n={plan.lo + k} has shape {q.shape}, "
                    f"expected {(plan.stack, plan.outputs)}"
                )
            inverses[k] = q
    else:
        raise ValueError(f"unknown mode {mode!r}")

    residual = np.abs(
        np.einsum("kam,kmb->kab", inverses, folded.matrices)
        - np.eye(plan.stack)
    ).max(axis=(1, 2))
    if residual.max() > tol:
        bad = [plan.lo + k for k in np.nonzero(residual > tol)[0]]
        if mode == "explicit":
            raise InvalidInverseError(
                f"supplied table fails the left-inverse identity at n in {bad[:8]} "
                f"(max deviation {residual.max():.3e} > {tol:.1e})"
            )
        raise SingularSystemError(bad)

    return Reconstructor(
        plan=plan,
        inverses=inverses,
        weights=_unfold_weights(plan, inverses),
        source=mode,
    )


def _folded_output_coefficients(samples: np.ndarray, plan: SamplingPlan) -> np.ndarray:
    """Length-L transform of each channel: entry (m, k) is the folded output
    coefficient at frequency lo + k."""
    Y = np.asarray(samples, dtype=complex)
    if Y.shape != (plan.outputs, plan.length):
        raise ValueError(
            f"sample grid has shape {Y.shape}, expected "
            f"{(plan.outputs, plan.length)}"
        )
    p = np.arange(plan.length)
    modulation = np.exp(-2j * np.pi * plan.lo * p / plan.length) / plan.length
    return np.fft.fft(Y * modulation, axis=1)


def recover_coefficients(samples: np.ndarray, rec: Reconstructor) -> np.ndarray:
    """Stacked input coefficients per bin, from one pass over the samples.

    Returns an array of shape (folds*R, L); column k holds the stacked
    coefficient vector at frequency ``lo + k``, with entry ``folds*r + s``
    equal to the recovered coefficient of input r at ``lo + k + s*L``.
    """
    d = _folded_output_coefficients(samples, rec.plan)
    return np.einsum("kam,mk->ak", rec.inverses, d)


def unstack_spectra(stacked: np.ndarray, plan: SamplingPlan) -> list[SpectrumSignal]:
    """Turn stacked per-bin coefficients into one spectrum per input channel."""
    if stacked.shape != (plan.stack, plan.length):
        raise ValueError(
            f"stacked coefficients have shape {stacked.shape}, expected "
            f"{(plan.stack, plan.length)}"
        )
    spectra = []
    for r in range(plan.inputs):
        coeffs = {}
        for s in range(plan.folds):
            row = stacked[plan.folds * r + s]
            for k in range(plan.length):
                coeffs[plan.lo + k + s * plan.length] = row[k]
        spectra.append(SpectrumSignal(coeffs))
    assert all(
        not s.support or (plan.lo <= s.support[0] and s.support[-1] <= plan.hi)
        for s in spectra
    )
    return spectra


def fft_reconstruct(
    samples: np.ndarray,
    rec: Reconstructor,
    request: ReconstructionRequest | Sequence[int],
) -> list[np.ndarray]:
    """FFT pipeline producing uniform output grids for every input channel.

    Steps, in order: (1) scale sample row p by ``(1/L) e^{-2 pi i lo p / L}``;
    (2) length-L forward transform per channel; (3) apply the left inverse of
    bin ``lo + k`` to transform column k; (4) flatten the stacked-coefficient
    matrix row-wise; (5) slice one contiguous coefficient run per input;
    (6) zero pad each run at the end to the requested count; (7) inverse
    transform and scale entry q by ``count * e^{2 pi i lo q / count}``.

    Output grid r holds the reconstructed input r at ``2 pi q / count``,
    q = 0..count-1.  Requested counts must be at least the band width.
    """
    counts = (
        request.output_counts
        if isinstance(request, ReconstructionRequest)
        else tuple(int(c) for c in request)
    )
    plan = rec.plan
    if len(counts) != plan.inputs:
        raise ValueError(f"expected {plan.inputs} output counts, got {len(counts)}")
    if any(c < plan.width for c in counts):
        raise ValueError(
            f"output counts {counts} must be >= the band width {plan.width}"
        )
    d = _folded_output_coefficients(samples, plan)          # steps 1-2
    stacked = np.einsum("kam,mk->ak", rec.inverses, d)      # step 3
    run = plan.width
    flat = stacked.reshape(-1)                              # step 4
    outputs = []
    for r, count in enumerate(counts):
        coeffs = flat[run * r:run * (r + 1)]                # step 5
        padded = np.concatenate([coeffs, np.zeros(count - run, dtype=complex)])  # step 6
        q = np.arange(count)
        grid = np.fft.ifft(padded) * count * np.exp(2j * np.pi * plan.lo * q / count)  # step 7
        outputs.append(grid)
    return outputs


def interpolation_kernel(rec: Reconstructor, r: int, m: int, t):
    """The trigonometric interpolation kernel for the pair (input r, channel m):
    ``g_rm(t) = sum_{n in band} weight_rm(n) e^{i n t}``."""
    if not (0 <= r < rec.plan.inputs and 0 <= m < rec.plan.outputs):
        raise IndexError(f"channel pair ({r}, {m}) out of range")
    t_arr = np.asarray(t, dtype=float)
    ns = rec.plan.lo + np.arange(rec.plan.width)
    out = np.exp(1j * np.multiply.outer(t_arr, ns)) @ rec.weights[r, m]
    return complex(out) if t_arr.ndim == 0 else out


def direct_reconstruct(samples: np.ndarray, rec: Reconstructor, t) -> np.ndarray:
    """Literal evaluation of the sampling-expansion double sum.

    ``x_r(t) = (1/L) sum_m sum_p samples[m, p] g_rm(t - t_p)``.  Accepts a
    scalar angle (returns shape (R,)) or an array of angles (returns
    (R, len(t))).  Slow by design; used as the oracle for fft_reconstruct.
    """
    plan = rec.plan
    Y = np.asarray(samples, dtype=complex)
    if Y.shape != (plan.outputs, plan.length):
        raise ValueError(
            f"sample grid has shape {Y.shape}, expected "
            f"{(plan.outputs, plan.length)}"
        )
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    t_p = 2.0 * np.pi * np.arange(plan.length) / plan.length
    lags = t_arr[:, None] - t_p[None, :]                    # (T, L)
    ns = plan.lo + np.arange(plan.width)
    basis = np.exp(1j * lags[:, :, None] * ns[None, None, :])  # (T, L, width)
    values = np.einsum("tpn,rmn,mp->rt", basis, rec.weights, Y) / plan.length
    return values[:, 0] if np.asarray(t).ndim == 0 else values

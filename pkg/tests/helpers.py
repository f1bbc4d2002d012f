"""Shared factories for randomized test instances."""

from __future__ import annotations

import numpy as np

from mimosamp import (
    Constant,
    Derivative,
    LinearCombo,
    MimoSystem,
    SamplingPlan,
    SpectrumSignal,
    Translation,
    fold_system,
    make_plan,
    rank_certificate,
)


def random_plan(rng: np.random.Generator, max_channels: int = 4, max_length: int = 32) -> SamplingPlan:
    inputs = int(rng.integers(1, max_channels + 1))
    outputs = int(rng.integers(inputs, max_channels + 1))
    folds = outputs // inputs
    length = int(rng.integers(2, max_length + 1))
    width = folds * length
    lo = int(rng.integers(-width, 2))
    return make_plan(outputs, inputs, lo, lo + width - 1)


def random_response(rng: np.random.Generator, scale: float):
    gain = complex(rng.normal(1.2, 0.4), 0.3 * rng.normal()) * float(rng.choice([-1.0, 1.0]))
    terms = [(1 + 0j, Constant(gain))]
    if rng.random() < 0.5:
        weight = complex(rng.normal(0, 0.5), rng.normal(0, 0.5)) / scale
        terms.append((weight, Derivative(1)))
    if rng.random() < 0.5:
        terms.append((complex(rng.normal(0, 0.7)), Translation(float(rng.uniform(0.1, 2.9)))))
    return terms[0][1] if len(terms) == 1 else LinearCombo(tuple(terms))


def random_system(rng: np.random.Generator, plan: SamplingPlan, max_tries: int = 80):
    """A random channel grid whose folded matrices are well conditioned."""
    scale = float(max(1, abs(plan.lo), abs(plan.hi)))
    for _ in range(max_tries):
        grid = [
            [random_response(rng, scale) for _ in range(plan.inputs)]
            for _ in range(plan.outputs)
        ]
        system = MimoSystem(grid)
        folded = fold_system(system, plan)
        if not rank_certificate(folded, tol=1e-4):
            return system, folded
    raise AssertionError("failed to draw a well-conditioned random system")


def random_bandlimited(rng: np.random.Generator, plan: SamplingPlan) -> SpectrumSignal:
    return SpectrumSignal(
        {n: complex(rng.normal(), rng.normal()) for n in plan.band}
    )


def random_overband(rng: np.random.Generator, plan: SamplingPlan, extra: int = 12) -> SpectrumSignal:
    """Support exceeding the band on both sides, with mild decay outside."""
    coeffs = {}
    for n in range(plan.lo - extra, plan.hi + extra + 1):
        excess = max(0, plan.lo - n, n - plan.hi)
        coeffs[n] = complex(rng.normal(), rng.normal()) * 0.7**excess
    return SpectrumSignal(coeffs)


def weight_identity_errors(system, plan, rec) -> tuple[float, float]:
    """Largest deviations of the two weight identities.

    In band, the weights biorthogonalize the channel responses:
    ``sum_m w_rm(n) b_mj(n) = delta(r - j)``.  Across distinct blocks the
    pairing annihilates: ``sum_m b_mj(n1) w_rm(n2) = 0`` whenever n1 - n2 is
    a nonzero multiple of the channel length and both lie in the band.
    """
    b = {
        (m, j): system.response(m, j)(np.arange(plan.lo, plan.hi + 1))
        for m in range(plan.outputs)
        for j in range(plan.inputs)
    }
    biortho = 0.0
    for i, n in enumerate(plan.band):
        for r in range(plan.inputs):
            for j in range(plan.inputs):
                total = sum(
                    rec.weight_at(r, m, n) * b[(m, j)][i]
                    for m in range(plan.outputs)
                )
                biortho = max(biortho, abs(total - (1.0 if r == j else 0.0)))
    cross = 0.0
    for n1 in plan.band:
        i1 = n1 - plan.lo
        for shift in range(1, plan.folds):
            for n2 in (n1 - shift * plan.length, n1 + shift * plan.length):
                if n2 < plan.lo or n2 > plan.hi:
                    continue
                for r in range(plan.inputs):
                    for j in range(plan.inputs):
                        total = sum(
                            b[(m, j)][i1] * rec.weight_at(r, m, n2)
                            for m in range(plan.outputs)
                        )
                        cross = max(cross, abs(total))
    return biortho, cross

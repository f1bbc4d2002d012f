import numpy as np
import pytest

from helpers import random_bandlimited, random_plan, random_system

from mimosamp import (
    ConfigError,
    Constant,
    Derivative,
    MimoSystem,
    SpectrumSignal,
    Translation,
    fold_system,
    grid_instants,
    make_plan,
    rank_certificate,
    sample_outputs,
    simulate_outputs,
)
from mimosamp.presets import EXAMPLES, build_scheme, default_alpha, hardy_pair


def derivative_cross():
    return MimoSystem([[Constant(1), Derivative(1)], [Derivative(1), Constant(1)]])


class TestSimulate:
    def test_identity_single_channel(self):
        system = MimoSystem([[Constant(1)]])
        x = SpectrumSignal({3: 2j, -1: 0.5})
        assert simulate_outputs(system, [x])[0] == x

    def test_derivative_cross_hand_check(self):
        # y1 = x1 + x2', y2 = x1' + x2 with x1 = x2 = e^{it}
        system = derivative_cross()
        x = SpectrumSignal({1: 1})
        y1, y2 = simulate_outputs(system, [x, x])
        assert y1.coeff(1) == pytest.approx(1 + 1j)
        assert y2.coeff(1) == pytest.approx(1j + 1)
        # time-domain quadrature cross-check of the first output coefficient
        grid = 16
        t = 2 * np.pi * np.arange(grid) / grid
        samples = x.eval(t) + 1j * x.eval(t)   # x1 + x2' evaluated directly
        assert np.fft.fft(samples)[1] / grid == pytest.approx(y1.coeff(1), abs=1e-12)

    def test_zero_inputs_give_zero_outputs(self):
        system = derivative_cross()
        outs = simulate_outputs(system, [SpectrumSignal(), SpectrumSignal()])
        assert all(y == SpectrumSignal() for y in outs)

    def test_wrong_arity(self):
        with pytest.raises(ValueError):
            simulate_outputs(derivative_cross(), [SpectrumSignal()])


class TestSampleOutputs:
    def test_matches_eval_of_simulated_outputs(self):
        rng = np.random.default_rng(17)
        plan = random_plan(rng)
        system, _ = random_system(rng, plan)
        inputs = [random_bandlimited(rng, plan) for _ in range(plan.inputs)]
        grid = sample_outputs(system, inputs, plan)
        t = grid_instants(plan)
        outs = simulate_outputs(system, inputs)
        for m in range(plan.outputs):
            assert np.allclose(grid.values[m], outs[m].eval(t), atol=1e-12)
        assert grid.truncation_tail == 0.0

    def test_hardy_grid_stable_under_truncation_doubling(self):
        plan, system, _, _ = build_scheme("s22t", -25, 25)
        pair = hardy_pair()
        coarse = sample_outputs(system, pair, plan, truncation=512)
        fine = sample_outputs(system, pair, plan, truncation=1024)
        assert np.abs(coarse.values - fine.values).max() < 1e-10
        assert coarse.truncation_tail > fine.truncation_tail

    def test_real_preset_signals_sample_to_real_grids(self):
        from mimosamp.presets import lowpass_pair

        for scheme in ("s22t", "s22d", "s24d"):
            plan, system, _, _ = build_scheme(scheme, -25, 25)
            grid = sample_outputs(system, lowpass_pair(), plan).values
            assert grid.shape == (plan.outputs, plan.length)
            assert np.abs(grid.imag).max() < 1e-10


class TestFoldSystem:
    def test_derivative_cross_matrix(self):
        plan = make_plan(2, 2, -25, 25)
        folded = fold_system(derivative_cross(), plan)
        for n in (-25, 0, 7):
            expected = np.array([[1, 1j * n], [1j * n, 1]])
            assert np.allclose(folded.matrix_at(n), expected, atol=0)
        assert np.allclose(folded.matrix_at(0), np.eye(2), atol=0)

    def test_four_channel_folding_layout(self):
        preset = EXAMPLES[6]  # 4x2 derivative bank
        plan = make_plan(4, 2, -25, 25)
        folded = fold_system(preset.build(), plan)
        L = plan.length
        n = -10
        got = folded.matrix_at(n)
        expected = np.array(
            [
                [2, 2, 1, 1],
                [1, 1, 1j * n, 1j * (n + L)],
                [1j * n, 1j * (n + L), 1, 1],
                [1j * n, 1j * (n + L), 1j * n, 1j * (n + L)],
            ]
        )
        assert np.allclose(got, expected, atol=0)

    def test_dimension_mismatch(self):
        plan = make_plan(3, 2, -5, 5)
        with pytest.raises(ConfigError):
            fold_system(derivative_cross(), plan)


class TestRankCertificate:
    def test_derivative_cross_full_rank_everywhere(self):
        for lo, hi in [(-25, 25), (-3, 90), (-64, -10)]:
            plan = make_plan(2, 2, lo, hi)
            assert rank_certificate(fold_system(derivative_cross(), plan)) == []

    def test_duplicated_rows_deficient_everywhere(self):
        plan = make_plan(2, 2, -5, 5)
        system = MimoSystem(
            [[Constant(1), Constant(1)], [Constant(1), Constant(1)]]
        )
        deficient = rank_certificate(fold_system(system, plan))
        assert deficient == list(plan.band)

    def test_translation_with_gain_two_never_deficient(self):
        # per-bin determinant 2 - e^{2 i alpha n} has modulus at least 1
        plan = make_plan(2, 2, -25, 25)
        alpha = default_alpha(plan.length)
        system = MimoSystem(
            [[Constant(1), Translation(alpha)], [Translation(alpha), Constant(2)]]
        )
        folded = fold_system(system, plan)
        assert rank_certificate(folded) == []
        for n in plan.band:
            det = np.linalg.det(folded.matrix_at(n))
            assert abs(det) >= 1.0 - 1e-12


class TestFoldIdentity:
    def test_fold_consistency_and_dft_bridge(self):
        rng = np.random.default_rng(29)
        for _ in range(10):
            plan = random_plan(rng)
            system, folded = random_system(rng, plan)
            inputs = [random_bandlimited(rng, plan) for _ in range(plan.inputs)]
            outs = simulate_outputs(system, inputs)
            L, folds = plan.length, plan.folds

            # folded coefficients two ways, then via the sample transform
            scale = max(max(np.abs(list(y.coeffs.values())).max() for y in outs if y.coeffs), 1.0)
            samples = sample_outputs(system, inputs, plan).values
            p = np.arange(L)
            for k in range(L):
                n = plan.lo + k
                folded_direct = np.array(
                    [sum(outs[m].coeff(n + s * L) for s in range(folds))
                     for m in range(plan.outputs)]
                )
                stacked = np.array(
                    [inputs[r].coeff(n + s * L)
                     for r in range(plan.inputs) for s in range(folds)]
                )
                via_matrix = folded.matrix_at(n) @ stacked
                assert np.abs(folded_direct - via_matrix).max() <= 1e-12 * scale

                via_samples = (
                    samples @ np.exp(-1j * n * 2 * np.pi * p / L)
                ) / L
                assert np.abs(via_samples - folded_direct).max() <= 1e-10 * scale

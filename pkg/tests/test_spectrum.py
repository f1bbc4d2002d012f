import numpy as np
import pytest

from mimosamp import (
    CapacityError,
    Constant,
    Derivative,
    SpectrumSignal,
    Translation,
    cyclic_convolve,
    dirichlet_bandlimit,
    energy_distance,
)
from mimosamp.presets import analytic_from_time, hardy_pair, lowpass_pair, oscillator_pair


def quadrature_energy(sig: SpectrumSignal, nodes: int = 4096) -> float:
    t = 2 * np.pi * np.arange(nodes) / nodes
    return float(np.mean(np.abs(sig.eval(t)) ** 2))


class TestEval:
    def test_constant_signal(self):
        sig = SpectrumSignal({0: 1})
        for t in (0.0, 1.3, 5.9):
            assert sig.eval(t) == pytest.approx(1.0)

    def test_two_sided_cosine_at_zero(self):
        assert SpectrumSignal({1: 1, -1: 1}).eval(0.0) == pytest.approx(2.0)

    def test_filtered_oscillation_matches_quadrature_oracle(self):
        # Oracle: (1/2pi) Int f1(s) D25(pi/3 - s) ds by 2^18-node trapezoid
        # of the closed forms (Dirichlet kernel as sin((K+1/2)u)/sin(u/2)).
        oracle = -0.002921500765222679
        x1, _ = lowpass_pair()
        value = x1.eval(np.pi / 3)
        assert abs(value - oracle) < 5e-9

    def test_vectorized_eval_matches_scalar(self):
        rng = np.random.default_rng(3)
        sig = SpectrumSignal({int(n): complex(rng.normal(), rng.normal()) for n in range(-5, 6)})
        ts = np.linspace(0, 2 * np.pi, 17)
        vec = sig.eval(ts)
        assert np.allclose(vec, [sig.eval(float(t)) for t in ts], atol=1e-14)


class TestCyclicConvolve:
    def test_identity_channel(self):
        x = SpectrumSignal({2: 1.5, -7: 2j})
        assert cyclic_convolve(x, Constant(1)) == x

    def test_derivative_of_first_harmonic(self):
        out = cyclic_convolve(SpectrumSignal({1: 1}), Derivative(1))
        assert out.coeff(1) == pytest.approx(1j)

    def test_translation_closed_form_and_time_domain(self):
        alpha = np.pi / 4
        x = SpectrumSignal({2: 3, 5: -1})
        out = cyclic_convolve(x, Translation(alpha))
        assert out.coeff(2) == pytest.approx(3 * np.exp(1j * np.pi / 2), abs=1e-14)
        assert out.coeff(5) == pytest.approx(-np.exp(1j * 5 * np.pi / 4), abs=1e-14)
        # time-domain oracle: shift then transform
        grid = 16
        t = 2 * np.pi * np.arange(grid) / grid
        shifted = x.eval(t + alpha)
        coeffs = np.fft.fft(shifted) / grid
        assert coeffs[2] == pytest.approx(out.coeff(2), abs=1e-12)
        assert coeffs[5] == pytest.approx(out.coeff(5), abs=1e-12)

    def test_linearity_per_coefficient(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            x = SpectrumSignal({int(n): complex(rng.normal(), rng.normal()) for n in rng.integers(-30, 30, 6)})
            y = SpectrumSignal({int(n): complex(rng.normal(), rng.normal()) for n in rng.integers(-30, 30, 6)})
            a, b = complex(rng.normal(), rng.normal()), complex(rng.normal(), rng.normal())
            h = Translation(0.7)
            lhs = cyclic_convolve(a * x + b * y, h)
            rhs = a * cyclic_convolve(x, h) + b * cyclic_convolve(y, h)
            for n in set(lhs.coeffs) | set(rhs.coeffs):
                assert lhs.coeff(n) == pytest.approx(rhs.coeff(n), rel=1e-12, abs=1e-14)


class TestTranslate:
    def test_zero_shift_is_identity(self):
        x = SpectrumSignal({3: 1 + 2j, -4: 0.5})
        assert x.translate(0.0) == x

    def test_half_period_negates_first_harmonic(self):
        out = SpectrumSignal({1: 1}).translate(np.pi)
        assert out.coeff(1) == pytest.approx(-1.0, abs=1e-15)

    def test_eval_consistency_on_grid(self):
        rng = np.random.default_rng(7)
        x = SpectrumSignal({int(n): complex(rng.normal(), rng.normal()) for n in range(-9, 10)})
        tau = 0.3
        t = 2 * np.pi * np.arange(64) / 64
        assert np.allclose(x.translate(tau).eval(t), x.eval(t - tau), atol=1e-12)

    def test_translation_is_isometry(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            x = SpectrumSignal({int(n): complex(rng.normal(), rng.normal()) for n in rng.integers(-40, 40, 8)})
            tau = float(rng.uniform(0, 2 * np.pi))
            assert x.translate(tau).energy() == pytest.approx(x.energy(), rel=1e-12)


class TestDirichletBandlimit:
    def test_constant_signal_cutoff_zero(self):
        sig = analytic_from_time(lambda t: np.full_like(np.asarray(t, float), 2.5),
                                 lambda cache: (lambda k: 0.0), grid=64)
        out = dirichlet_bandlimit(sig, 0)
        assert out.support == (0,)
        assert out.coeff(0) == pytest.approx(2.5)

    def test_oscillator_cut_at_25_has_width_51(self):
        x1, _ = lowpass_pair()
        assert x1.support[0] == -25 and x1.support[-1] == 25
        assert len(x1.support) == 51

    def test_hardy_matches_oversampled_transform_oracle(self):
        p1, _ = hardy_pair()
        cut = dirichlet_bandlimit(p1, 10)
        grid = 8192
        t = 2 * np.pi * np.arange(grid) / grid
        oracle = np.fft.fft(p1.time_eval(t)) / grid
        for n in range(-10, 11):
            assert cut.coeff(n) == pytest.approx(oracle[n % grid], abs=1e-13)

    def test_cutoff_beyond_declared_range_raises(self):
        p1, _ = hardy_pair()
        with pytest.raises(CapacityError):
            dirichlet_bandlimit(p1, p1.max_index + 1)

    def test_projection_is_idempotent(self):
        rng = np.random.default_rng(5)
        x = SpectrumSignal({int(n): complex(rng.normal(), rng.normal()) for n in range(-20, 21)})
        once = dirichlet_bandlimit(x, 7)
        assert dirichlet_bandlimit(once, 7) == once


class TestEnergy:
    def test_distance_to_self_is_zero(self):
        x = SpectrumSignal({0: 3, 2: 1j})
        assert energy_distance(x, x) == 0.0

    def test_constant_against_zero(self):
        assert energy_distance(SpectrumSignal({0: 3}), SpectrumSignal()) == pytest.approx(3.0)

    def test_distance_matches_dense_quadrature(self):
        rng = np.random.default_rng(23)
        x = SpectrumSignal({int(n): complex(rng.normal(), rng.normal()) for n in range(-12, 13)})
        y = SpectrumSignal({int(n): complex(rng.normal(), rng.normal()) for n in range(-9, 15)})
        nodes = 10_000
        t = 2 * np.pi * np.arange(nodes) / nodes
        quad = np.sqrt(np.mean(np.abs(x.eval(t) - y.eval(t)) ** 2))
        assert energy_distance(x, y) == pytest.approx(float(quad), rel=1e-9)

    def test_parseval_cross_check_100_random_signals(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            size = int(rng.integers(1, 65))
            ns = rng.choice(np.arange(-64, 65), size=size, replace=False)
            x = SpectrumSignal({int(n): complex(rng.normal(), rng.normal()) for n in ns})
            assert quadrature_energy(x, nodes=512) == pytest.approx(x.energy(), rel=1e-9)


class TestAnalyticInvariant:
    @pytest.mark.parametrize("pair_factory", [hardy_pair, oscillator_pair])
    def test_grid_transform_recovers_declared_coefficients(self, pair_factory):
        for sig in pair_factory():
            grid = 4 * sig.max_index
            t = 2 * np.pi * np.arange(grid) / grid
            transform = np.fft.fft(np.asarray(sig.time_eval(t), dtype=complex)) / grid
            for n in (-40, -11, 0, 3, 17, 40):
                declared = sig.coeff_provider(n)
                assert abs(transform[n % grid] - declared) <= max(sig.tail_bound(abs(n)), 1e-12)

    def test_tail_bound_dominates_next_coefficient(self):
        for sig in hardy_pair():
            for cutoff in (20, 60, 120):
                assert abs(sig.coeff_provider(cutoff + 1)) <= sig.tail_bound(cutoff)

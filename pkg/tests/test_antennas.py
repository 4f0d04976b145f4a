import math

import numpy as np
import pytest

from leobeam.antennas import (
    ArrayGeometry,
    BeamWeights,
    LeakyWave,
    Metasurface,
    Upa,
    analog_vs_hybrid_gain_db,
    best_combiner,
    combining_gain_linear,
    gain_with_pointing_error,
    leaky_wave_gain_db,
    leaky_wave_threshold_db,
    quantize_phases,
    steering_vector,
    upa_max_gain_db,
)

LAMBDA = 0.0262  # Ku band


def random_directions(rng, n):
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


class TestSteeringVector:
    def test_broadside_is_all_ones(self):
        geom = ArrayGeometry.upa(4, 4, LAMBDA)
        a = steering_vector(geom, np.array([0.0, 0.0, 1.0]))
        np.testing.assert_allclose(a, np.ones(16), atol=1e-15)

    def test_unit_modulus_and_self_product(self):
        geom = ArrayGeometry.upa(6, 3, LAMBDA)
        rng = np.random.default_rng(3)
        for d in random_directions(rng, 20):
            a = steering_vector(geom, d)
            np.testing.assert_allclose(np.abs(a), 1.0, atol=1e-12)
            assert np.vdot(a, a).real == pytest.approx(geom.n_elements, abs=1e-9)

    def test_two_element_endfire_phase(self):
        pos = np.array([[0.0, 0.0, 0.0], [LAMBDA / 2.0, 0.0, 0.0]])
        geom = ArrayGeometry(pos, LAMBDA)
        a = steering_vector(geom, np.array([1.0, 0.0, 0.0]))
        np.testing.assert_allclose(a, [1.0, np.exp(-1j * np.pi)], atol=1e-12)

    def test_non_unit_direction_rejected(self):
        geom = ArrayGeometry.upa(2, 2, LAMBDA)
        with pytest.raises(ValueError):
            steering_vector(geom, np.array([0.0, 0.0, 2.0]))


class TestUpaGain:
    def test_24x24(self):
        assert upa_max_gain_db(ArrayGeometry.upa(24, 24, LAMBDA)) == pytest.approx(27.6042, abs=1e-3)

    def test_single_element(self):
        assert upa_max_gain_db(ArrayGeometry.upa(1, 1, LAMBDA)) == 0.0

    def test_2x2(self):
        assert upa_max_gain_db(ArrayGeometry.upa(2, 2, LAMBDA)) == pytest.approx(6.0206, abs=1e-3)

    def test_best_combiner_achieves_max_everywhere(self):
        ant = Upa(ArrayGeometry.upa(8, 8, LAMBDA))
        target = upa_max_gain_db(ant.geometry)
        rng = np.random.default_rng(11)
        for d in random_directions(rng, 100):
            w, gain_db = best_combiner(ant, d)
            assert gain_db == pytest.approx(target, abs=1e-9)
            realized = combining_gain_linear(ant.geometry, w.weights, d)
            assert 10 * math.log10(realized) == pytest.approx(target, abs=1e-9)
            assert w.is_constant_modulus()


class TestLeakyWave:
    def test_alpha_zero_limit_reaches_upa_gain(self):
        assert leaky_wave_gain_db(24, 24, 1e-6) == pytest.approx(27.6042, abs=1e-3)

    def test_combiner_near_upa_at_small_alpha(self):
        ant = LeakyWave(24, 24, LAMBDA, alpha=1e-6)
        _, gain_db = best_combiner(ant, np.array([0.0, 0.0, 1.0]))
        assert gain_db == pytest.approx(27.6042, abs=1e-2)

    def test_large_alpha_threshold_vanishes(self):
        assert leaky_wave_threshold_db(50.0) == pytest.approx(0.0, abs=1e-9)

    def test_gain_below_threshold(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            alpha = rng.uniform(0.01, 2.0)
            nx = rng.integers(1, 64)
            ny = rng.integers(1, 64)
            assert leaky_wave_gain_db(int(nx), int(ny), alpha) <= leaky_wave_threshold_db(alpha) + 1e-12

    def test_gain_grows_with_array_size(self):
        assert leaky_wave_gain_db(24, 24, 0.1) > leaky_wave_gain_db(12, 12, 0.1)
        assert leaky_wave_gain_db(24, 24, 0.1) < leaky_wave_threshold_db(0.1)

    def test_threshold_strictly_decreasing(self):
        alphas = np.linspace(0.01, 1.0, 50)
        th = [leaky_wave_threshold_db(a) for a in alphas]
        assert all(a > b for a, b in zip(th, th[1:]))
        # finite-difference check of the slope sign
        for a in (0.05, 0.3, 0.8):
            d = (leaky_wave_threshold_db(a + 1e-6) - leaky_wave_threshold_db(a - 1e-6)) / 2e-6
            assert d < 0.0

    def test_alpha_zero_rejected(self):
        with pytest.raises(ValueError):
            leaky_wave_gain_db(24, 24, 0.0)

    def test_scanned_gain_matches_closed_form_at_broadside(self):
        ant = LeakyWave(16, 16, LAMBDA, alpha=0.15)
        _, gain_db = best_combiner(ant, np.array([0.0, 0.0, 1.0]))
        assert gain_db == pytest.approx(leaky_wave_gain_db(16, 16, 0.15), abs=1e-6)

    def test_scan_beats_joint_brute_force(self):
        # separable per-axis scan vs a coarse joint (theta1, theta2) search
        ant = LeakyWave(8, 8, LAMBDA, alpha=0.12)
        rng = np.random.default_rng(29)
        ix, iy = np.meshgrid(np.arange(8), np.arange(8), indexing="ij")
        ix = ix.ravel().astype(float)
        iy = iy.ravel().astype(float)
        taper = np.exp(-0.12 * (ix + iy))
        q = float(np.sum(taper ** 2))
        for _ in range(5):
            v = rng.standard_normal(3)
            v[2] = abs(v[2]) + 0.5
            v /= np.linalg.norm(v)
            w_best, gain_db = best_combiner(ant, v)
            a = steering_vector(ant.geometry, v)
            best_brute = 0.0
            for t1 in np.linspace(-np.pi, np.pi, 61):
                for t2 in np.linspace(-np.pi, np.pi, 61):
                    w = taper * np.exp(-0.5j * (ix * t1 + iy * t2))
                    best_brute = max(best_brute, abs(np.vdot(w, a)) ** 2 / q)
            assert 10 ** (gain_db / 10.0) >= best_brute - 1e-9
            realized = combining_gain_linear(ant.geometry, w_best.weights, v)
            assert 10 * math.log10(realized) == pytest.approx(gain_db, abs=1e-9)


class TestMetasurface:
    def test_zenith_peak(self):
        _, gain = best_combiner(Metasurface(), np.array([0.0, 0.0, 1.0]))
        assert gain == pytest.approx(33.0, abs=1e-12)

    def test_30_degrees(self):
        # 33 - 1.2*10*log10(sin 30 deg) = 36.612
        d = np.array([math.cos(math.radians(30)), 0.0, math.sin(math.radians(30))])
        _, gain = best_combiner(Metasurface(), d)
        assert gain == pytest.approx(36.6124, abs=1e-3)

    def test_below_horizon_rejected(self):
        with pytest.raises(ValueError):
            best_combiner(Metasurface(), np.array([1.0, 0.0, 0.0]))
        with pytest.raises(ValueError):
            best_combiner(Metasurface(), np.array([0.0, 0.5, -math.sqrt(0.75)]))


class TestPointingError:
    BROADSIDE = np.array([0.0, 0.0, 1.0])

    def test_zero_error_is_exact(self):
        ant = Upa(ArrayGeometry.upa(24, 24, LAMBDA))
        st = gain_with_pointing_error(ant, self.BROADSIDE, 0.0, 100, rng_seed=1)
        assert st.mean_db == st.min_db == st.max_db == st.aligned_db

    def test_mean_gain_non_increasing_in_error(self):
        ant = Upa(ArrayGeometry.upa(24, 24, LAMBDA))
        means = [gain_with_pointing_error(ant, self.BROADSIDE, e, 4000, rng_seed=2).mean_db
                 for e in (0.0, 1.0, 2.0, 4.0, 6.0, 8.0)]
        assert all(a >= b - 0.05 for a, b in zip(means, means[1:]))
        assert means[-1] < means[0]

    def test_seed_determinism(self):
        ant = LeakyWave(12, 12, LAMBDA, alpha=0.1)
        a = gain_with_pointing_error(ant, self.BROADSIDE, 3.0, 500, rng_seed=9)
        b = gain_with_pointing_error(ant, self.BROADSIDE, 3.0, 500, rng_seed=9)
        assert a == b

    def test_metasurface_unsupported(self):
        with pytest.raises(ValueError):
            gain_with_pointing_error(Metasurface(), self.BROADSIDE, 1.0, 10, rng_seed=0)

    def test_zero_trials_rejected(self):
        ant = Upa(ArrayGeometry.upa(4, 4, LAMBDA))
        with pytest.raises(ValueError):
            gain_with_pointing_error(ant, self.BROADSIDE, 1.0, 0, rng_seed=0)


class TestQuantization:
    def test_idempotent(self):
        rng = np.random.default_rng(21)
        w = BeamWeights(np.exp(1j * rng.uniform(-np.pi, np.pi, 64)))
        for bits in (1, 2, 3, 6):
            once = quantize_phases(w, bits)
            twice = quantize_phases(once, bits)
            np.testing.assert_array_equal(once.weights, twice.weights)

    def test_one_bit_collapses_to_binary_phases(self):
        rng = np.random.default_rng(4)
        w = BeamWeights(np.exp(1j * rng.uniform(-np.pi, np.pi, 128)))
        q = quantize_phases(w, 1).weights
        np.testing.assert_allclose(np.abs(q.imag), 0.0, atol=1e-12)
        assert set(np.round(q.real).astype(int)) <= {-1, 1}

    def test_modulus_preserved(self):
        rng = np.random.default_rng(8)
        mags = rng.uniform(0.1, 2.0, 32)
        w = BeamWeights(mags * np.exp(1j * rng.uniform(-np.pi, np.pi, 32)))
        q = quantize_phases(w, 3)
        np.testing.assert_allclose(np.abs(q.weights), mags, rtol=1e-12)

    def test_high_resolution_nearly_lossless(self):
        geom = ArrayGeometry.upa(24, 24, LAMBDA)
        rng = np.random.default_rng(13)
        for d in random_directions(rng, 10):
            a = steering_vector(geom, d)
            q = quantize_phases(BeamWeights(a), 16).weights
            g_q = combining_gain_linear(geom, q, d)
            g_0 = combining_gain_linear(geom, a, d)
            assert 10 * math.log10(g_0 / g_q) < 0.01

    def test_mean_gain_non_decreasing_in_bits(self):
        geom = ArrayGeometry.upa(16, 16, LAMBDA)
        rng = np.random.default_rng(17)
        dirs = random_directions(rng, 200)
        dirs[:, 2] = np.abs(dirs[:, 2])
        means = []
        for bits in range(1, 7):
            gains = []
            for d in dirs:
                a = steering_vector(geom, d)
                q = quantize_phases(BeamWeights(a), bits).weights
                gains.append(combining_gain_linear(geom, q, d))
            means.append(float(np.mean(gains)))
        assert all(b >= a - 1e-9 for a, b in zip(means, means[1:]))


class TestHybridVsAnalog:
    def test_hybrid_never_worse_and_converges(self):
        geom = ArrayGeometry.upa(24, 24, LAMBDA)
        rng = np.random.default_rng(23)
        dirs = random_directions(rng, 25)
        dirs[:, 2] = np.abs(dirs[:, 2])
        for bits in range(1, 9):
            for d in dirs:
                a_db, h_db = analog_vs_hybrid_gain_db(geom, d, bits)
                assert h_db >= a_db - 1e-9
                if bits >= 6:
                    assert h_db - a_db < 0.1

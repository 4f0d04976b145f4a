import math

import numpy as np
import pytest

from leobeam.antennas import ArrayGeometry, Upa, steering_vector
from leobeam.channel import LinkBudget, build_channel, from_db, to_db
from leobeam.metrics import (
    expected_receive_gain,
    interference_dbw,
    rss,
    sinr,
    spectral_efficiency,
    throughput_bps,
)
from leobeam.orbit import EarthModel, StereoFrame, circular_state

LAMBDA = 0.0262


def small_channel(k_factor, seed=0):
    earth = EarthModel()
    state = circular_state(earth, 1300e3)
    frame = StereoFrame.from_state(state)
    user = earth.radius_m * frame.u_sat
    ut = ArrayGeometry.upa(4, 4, LAMBDA)
    sat = ArrayGeometry.upa(8, 8, LAMBDA)
    return build_channel(state, user, ut, sat, gamma=0.5, k_factor=k_factor, seed=seed)


class TestRss:
    def test_matched_filter_values(self):
        ch = small_channel(k_factor=1e12)
        f = ch.sat_steering / np.linalg.norm(ch.sat_steering)
        w = ch.ut_los / np.linalg.norm(ch.ut_los)
        res = rss(ch, f, w)
        n_ut, n_sat = 16, 64
        assert res.g_rx_linear == pytest.approx(n_ut, rel=1e-6)
        assert res.g_tx_linear == pytest.approx(n_sat, rel=1e-6)
        assert res.watts == pytest.approx(abs(ch.gamma) ** 2 * n_ut * n_sat, rel=1e-5)

    def test_orthogonal_combiner_nulls(self):
        ch = small_channel(k_factor=1e12)
        w = np.zeros(16, dtype=complex)
        w[0], w[1] = ch.ut_los[1], -ch.ut_los[0]  # orthogonal to the LoS vector
        f = ch.sat_steering / np.linalg.norm(ch.sat_steering)
        res = rss(ch, f, np.conj(w))
        peak = abs(ch.gamma) ** 2 * 16 * 64
        assert res.watts < 1e-10 * peak

    def test_rank_one_factorization(self):
        rng = np.random.default_rng(19)
        for seed in range(20):
            ch = small_channel(k_factor=10.0, seed=seed)
            f = rng.standard_normal(64) + 1j * rng.standard_normal(64)
            w = rng.standard_normal(16) + 1j * rng.standard_normal(16)
            res = rss(ch, f, w)
            # brute-force oracle: full matrix product
            oracle = abs(np.conj(w) @ ch.h_matrix @ f) ** 2
            # factorized form of the rank-1 product
            factored = (abs(ch.gamma) ** 2
                        * abs(np.vdot(w, ch.rx_response)) ** 2
                        * abs(np.vdot(f, ch.sat_steering)) ** 2)
            assert res.watts == pytest.approx(oracle, rel=1e-12)
            assert res.watts == pytest.approx(factored, rel=1e-12)

    def test_dimension_mismatch_rejected(self):
        ch = small_channel(10.0)
        with pytest.raises(ValueError):
            rss(ch, np.ones(3), np.ones(16))


class TestExpectedReceiveGain:
    BROADSIDE = np.array([0.0, 0.0, 1.0])

    def test_closed_form_upa(self):
        ant = Upa(ArrayGeometry.upa(24, 24, LAMBDA))
        assert expected_receive_gain(ant, self.BROADSIDE, 10.0) == pytest.approx(576.1, rel=1e-9)

    def test_infinite_k_limit(self):
        ant = Upa(ArrayGeometry.upa(24, 24, LAMBDA))
        assert expected_receive_gain(ant, self.BROADSIDE, 1e15) == pytest.approx(576.0, rel=1e-9)

    def test_monte_carlo_agreement(self):
        # sample mean of |<a + a_R/sqrt(K), w>|^2 / ||w||^2 with w matched to a
        geom = ArrayGeometry.upa(8, 8, LAMBDA)
        ant = Upa(geom)
        k = 10.0
        n = geom.n_elements
        a = steering_vector(geom, self.BROADSIDE)
        w = a
        rng = np.random.default_rng(99)
        draws = 10000
        vals = np.empty(draws)
        for i in range(draws):
            a_r = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2.0)
            vals[i] = abs(np.vdot(w, a + a_r / math.sqrt(k))) ** 2 / n
        closed = expected_receive_gain(ant, self.BROADSIDE, k)
        assert float(np.mean(vals)) == pytest.approx(closed, rel=0.02)

    def test_bad_k_rejected(self):
        ant = Upa(ArrayGeometry.upa(2, 2, LAMBDA))
        with pytest.raises(ValueError):
            expected_receive_gain(ant, self.BROADSIDE, 0.0)


class TestInterference:
    BUDGET = LinkBudget(p_tx_dbw=15.0, lp_cable_db=0.0, g_tx_db=24.59,
                        lp_at_db=0.017, lp_fs_db=175.9, g_rx_db=27.6,
                        noise_temp_dbk=24.1, bandwidth_hz=250e6)

    def test_single_beam_sentinel(self):
        watts, dbw = interference_dbw(self.BUDGET, [24.59], 0)
        assert watts == 0.0
        assert dbw == -math.inf

    def test_four_way_corner_ceiling(self):
        # four equal-gain beams, one selected: SINR caps at 1/3 = -4.77 dB
        g = 20.0
        budget = self.BUDGET
        watts, _ = interference_dbw(budget, [g, g, g, g], 0)
        rss_w = from_db(budget.p_tx_dbw - budget.lp_cable_db + g
                        - budget.lp_at_db - budget.lp_fs_db + budget.g_rx_db)
        ratio = rss_w / watts
        assert to_db(ratio) == pytest.approx(10.0 * math.log10(1.0 / 3.0), abs=1e-9)

    def test_three_way_corner_ceiling(self):
        g = 20.0
        watts, _ = interference_dbw(self.BUDGET, [g, g, g], 0)
        rss_w = from_db(self.BUDGET.p_tx_dbw + g - self.BUDGET.lp_at_db
                        - self.BUDGET.lp_fs_db + self.BUDGET.g_rx_db)
        assert to_db(rss_w / watts) == pytest.approx(10.0 * math.log10(0.5), abs=1e-9)

    def test_empty_and_bad_index_rejected(self):
        with pytest.raises(ValueError):
            interference_dbw(self.BUDGET, [], 0)
        with pytest.raises(ValueError):
            interference_dbw(self.BUDGET, [1.0], 5)


class TestSinrAndSe:
    def test_no_interference_equals_snr(self):
        assert sinr(1e-12, 0.0, 1e-13) == pytest.approx(10.0, rel=1e-12)

    def test_interference_dominated(self):
        assert sinr(1e-12, 1e-6, 1e-13) < 1e-5

    def test_equal_rss_and_interference(self):
        assert to_db(sinr(1e-12, 1e-12, 1e-20)) == pytest.approx(0.0, abs=1e-6)

    def test_bad_noise_rejected(self):
        with pytest.raises(ValueError):
            sinr(1.0, 0.0, 0.0)

    @pytest.mark.parametrize("ratio,se", [(0.0, 0.0), (1.0, 1.0), (3.0, 2.0)])
    def test_spectral_efficiency_points(self, ratio, se):
        assert spectral_efficiency(ratio) == pytest.approx(se, abs=1e-12)

    def test_se_monotone(self):
        ratios = np.linspace(0.0, 100.0, 50)
        ses = [spectral_efficiency(r) for r in ratios]
        assert all(b > a for a, b in zip(ses, ses[1:]))

    def test_throughput_scales_with_bandwidth(self):
        assert throughput_bps(2.0, 250e6) == pytest.approx(5e8)
        with pytest.raises(ValueError):
            throughput_bps(1.0, 0.0)

    def test_negative_ratio_rejected(self):
        with pytest.raises(ValueError):
            spectral_efficiency(-0.1)

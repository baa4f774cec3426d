import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import best_pair
from wigig.beamforming import SectorChannel
from wigig.beamforming.beacon import a_bft_access, abft_success_probability, beacon_txss
from wigig.beamforming.refine import (RX_REFINE, TX_REFINE, BeamTrackAction, BrpState,
                                      beam_track_action, brp_setup, brp_transaction)
from wigig.beamforming.sls import ISS, RSS, SSW_ACK, SSW_FB, expected_message_count, run_sls
from wigig.errors import InvalidParameter, LinkFailure, ProtocolViolation


@st.composite
def channels(draw, integer=False):
    ta, ra = draw(st.integers(1, 4)), draw(st.integers(1, 4))
    ts = draw(st.integers(1, 128 // ta))
    rs = draw(st.integers(1, 128 // ra))
    ts, rs = min(ts, 12), min(rs, 12)
    seed = draw(st.integers(0, 2 ** 32 - 1))
    rng = np.random.default_rng(seed)
    g = rng.normal(10, 8, (ta, ts, ra, rs))
    if integer:
        g = 4 * np.round(g / 4)   # many ties
    # keep the link above control-PHY sensitivity in quasi-omni mode
    g = np.maximum(g, 5.0)
    return SectorChannel(g)


def refine(ch):
    sls = run_sls(ch)
    st_ = brp_setup(BrpState())
    rx = brp_transaction(st_, RX_REFINE, ch, sls)
    return sls, (sls.initiator.antenna, sls.initiator.sector, sls.initiator.peer_rx_antenna, rx.sector)


class TestChannel:
    def test_limits(self):
        with pytest.raises(InvalidParameter):
            SectorChannel(np.zeros((5, 1, 1, 1)))
        with pytest.raises(InvalidParameter):
            SectorChannel(np.zeros((2, 65, 1, 1)))
        with pytest.raises(InvalidParameter):
            SectorChannel(np.zeros((1, 2, 2)))
        with pytest.raises(InvalidParameter):
            SectorChannel(np.full((1, 1, 1, 1), np.inf))

    def test_quasi_omni_below_directional(self, rng):
        ch = SectorChannel.random(rng, 2, 6, 3, 5)
        assert (ch.rx_quasi_omni() <= ch.gain_db.max(axis=3)).all()
        assert (ch.tx_quasi_omni() <= ch.gain_db.max(axis=1)).all()

    def test_csv_round_trip(self, tmp_path, rng):
        ch = SectorChannel.random(rng, 2, 3, 1, 4)
        ch.to_csv(tmp_path / "c.csv")
        back = SectorChannel.from_csv(tmp_path / "c.csv")
        assert np.array_equal(back.gain_db, ch.gain_db)

    def test_incomplete_csv(self, tmp_path):
        p = tmp_path / "c.csv"
        p.write_text("tx_ant,tx_sector,rx_ant,rx_sector,gain_db\n0,0,0,0,1\n0,1,0,1,2\n")
        with pytest.raises(InvalidParameter):
            SectorChannel.from_csv(p)

    def test_reverse(self, rng):
        ch = SectorChannel.random(rng, 1, 3, 2, 4)
        r = ch.reverse()
        assert r.gain_db.shape == (2, 4, 1, 3)
        assert r.snr(1, 2, 0, 1) == ch.snr(0, 1, 1, 2)


class TestSls:
    @given(channels())
    def test_global_argmax(self, ch):
        sls, pick = refine(ch)
        assert pick == best_pair(ch.gain_db) == ch.global_argmax()

    @given(channels(integer=True))
    def test_ties_to_lowest_index(self, ch):
        _, pick = refine(ch)
        assert pick == best_pair(ch.gain_db)

    @given(channels())
    def test_message_counts(self, ch):
        sls = run_sls(ch)
        assert sls.count(ISS) == ch.total_tx_sectors * ch.n_rx_antennas
        assert sls.count(RSS) == ch.total_rx_sectors * ch.n_tx_antennas
        assert sls.count(SSW_FB) == sls.count(SSW_ACK) == 1
        assert sls.message_count == expected_message_count(ch)

    @given(channels())
    def test_cdown_counts_to_zero(self, ch):
        sls = run_sls(ch)
        for phase in (ISS, RSS):
            cd = [m.cdown for m in sls.messages if m.phase == phase]
            assert cd == list(range(len(cd) - 1, -1, -1))

    def test_phase_order(self, rng):
        sls = run_sls(SectorChannel.random(rng))
        assert sls.phases == [ISS, RSS, SSW_FB, SSW_ACK, "done"]

    def test_responder_uses_reverse_link(self, rng):
        ch = SectorChannel.random(rng, 1, 4, 1, 6)
        sls = run_sls(ch)
        rev = ch.reverse()
        assert (sls.responder.antenna, sls.responder.sector) == rev.global_argmax()[:2]

    def test_dead_link(self):
        with pytest.raises(LinkFailure):
            run_sls(SectorChannel(np.full((1, 4, 1, 4), -40.0)))

    def test_noisy_channel_near_optimal(self):
        rng = np.random.default_rng(8)
        hits = 0
        for _ in range(50):
            g = rng.normal(10, 8, (1, 16, 1, 16))
            ch = SectorChannel(g, noise_std_db=0.5)
            sls = run_sls(ch, rng=rng)
            st_ = brp_setup(BrpState())
            rx = brp_transaction(st_, RX_REFINE, ch, sls, rng=rng)
            picked = g[sls.initiator.antenna, sls.initiator.sector, 0, rx.sector]
            hits += g.max() - picked < 3.0
        assert hits >= 45


class TestBrp:
    def test_setup_terminates_immediately(self):
        st_ = brp_setup(BrpState())
        assert st_.phase == "transactions"
        assert [m[2] for m in st_.messages] == [0, 0, 0]

    def test_setup_repeats_while_requested(self):
        st_ = brp_setup(BrpState(initiator_requests=1, responder_requests=2), run_mid=True)
        flags = [m[2] for m in st_.messages if m[1] == "BRP-setup"]
        assert flags == [1, 1, 0, 1, 0, 0, 0]
        assert ("initiator", "MID", 0) in st_.messages

    def test_transaction_needs_setup(self, rng):
        ch = SectorChannel.random(rng)
        with pytest.raises(ProtocolViolation):
            brp_transaction(BrpState(), TX_REFINE, ch, run_sls(ch))

    def test_constrained_neighbourhood(self):
        g = np.zeros((1, 8, 1, 8))
        g[0, 2, 0, 5] = 30       # global best
        g[0, 2, 0, 3] = 20
        g[0, 2, 0, 6] = 25
        ch = SectorChannel(g)
        sls = run_sls(ch)
        st_ = brp_setup(BrpState())
        out = brp_transaction(st_, RX_REFINE, ch, sls, candidates=[3, 4, 6])
        assert out.sector == 6
        full = brp_transaction(st_, RX_REFINE, ch, sls)
        assert full.sector == 5

    def test_tx_refine_full_set_matches_sls(self, rng):
        ch = SectorChannel.random(rng, 2, 8, 2, 8)
        sls = run_sls(ch)
        out = brp_transaction(brp_setup(BrpState()), TX_REFINE, ch, sls)
        assert out.sector == sls.initiator.sector

    def test_unknown_kind(self, rng):
        ch = SectorChannel.random(rng)
        with pytest.raises(ProtocolViolation):
            brp_transaction(brp_setup(BrpState()), "sideways", ch, run_sls(ch))


class TestBeamTracking:
    @pytest.mark.parametrize("pt,bt,tl,action", [
        (1, 1, 4, BeamTrackAction.SEND_TRN_T),
        (0, 0, 4, BeamTrackAction.SEND_TRN_R),
        (0, 1, 4, BeamTrackAction.REQUEST_TRN_R),
        (1, 0, 4, BeamTrackAction.UNSPECIFIED),
        (1, 1, 0, BeamTrackAction.NONE),
        (0, 0, 0, BeamTrackAction.NONE),
    ])
    def test_table(self, pt, bt, tl, action):
        assert beam_track_action(pt, bt, tl) == action

    @given(st.integers(0, 1), st.integers(0, 1), st.integers(0, 31))
    def test_total_and_pure(self, pt, bt, tl):
        a = beam_track_action(pt, bt, tl)
        assert a == beam_track_action(pt, bt, tl)
        assert (a == BeamTrackAction.NONE) == (tl == 0)


class TestBeacons:
    def test_four_sectors_one_bti(self):
        plan = beacon_txss([4], beacons_per_bti=8)
        assert [b.cdown for b in plan] == [3, 2, 1, 0]
        assert {b.bi for b in plan} == {0}

    def test_fragmented_over_two_bis(self):
        plan = beacon_txss([4], beacons_per_bti=2, n_bi=2)
        assert [b.bi for b in plan] == [0, 0, 1, 1]
        assert [b.cdown for b in plan] == [3, 2, 1, 0]

    @given(st.lists(st.integers(1, 10), min_size=1, max_size=4), st.integers(1, 12), st.integers(1, 12))
    def test_every_sector_once_per_sweep(self, sectors, per_bti, n_bi):
        plan = beacon_txss(sectors, per_bti, n_bi)
        total = sum(sectors)
        full = [s for s in {b.sweep for b in plan}
                if sum(b.sweep == s for b in plan) == total]
        for s in full:
            used = sorted((b.antenna, b.sector) for b in plan if b.sweep == s)
            assert used == sorted((a, k) for a, n in enumerate(sectors) for k in range(n))
        for bi in {b.bi for b in plan}:
            cfg = [(b.antenna, b.sector) for b in plan if b.bi == bi]
            assert len(cfg) == len(set(cfg))
            assert len({a for a, _ in cfg}) == 1

    def test_single_beacon_random_delay(self):
        plan = beacon_txss([1], 1, n_bi=5, rng=np.random.default_rng(3), max_start_delay_us=10)
        delays = [b.start_delay_us for b in plan]
        assert all(0 <= d <= 10 for d in delays) and len(set(delays)) == 5

    def test_bad_inputs(self):
        with pytest.raises(InvalidParameter):
            beacon_txss([0], 1)
        with pytest.raises(InvalidParameter):
            beacon_txss([4], 0)


class TestAbft:
    def test_single_station_always_succeeds(self, rng):
        for slots in (1, 3, 8):
            assert a_bft_access(["a"], slots, rng)["a"].success

    def test_one_slot_collides(self, rng):
        out = a_bft_access(["a", "b"], 1, rng)
        assert not out["a"].success and out["a"].colliders == ("b",)

    def test_exact_probability(self):
        assert abft_success_probability(2, 8) == 7 / 8
        assert abft_success_probability(1, 1) == 1.0

    def test_monte_carlo(self):
        rng = np.random.default_rng(77)
        n = 4000
        wins = sum(a_bft_access(["a", "b"], 8, rng)["a"].success for _ in range(n))
        p = 7 / 8
        assert abs(wins / n - p) <= 3 * np.sqrt(p * (1 - p) / n)

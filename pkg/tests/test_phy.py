from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import header_steps, lfsr_bits, plan_by_counting
from wigig.errors import InvalidCode, InvalidParameter, UnknownMcs, UnsupportedCoding
from wigig.phy import (CONTROL, LPSC, OFDM, SC, PlcpHeader, decode_data, derived_data_rate,
                       encode_data, encode_header, encode_header_bits, mcs_lookup,
                       ofdm_data_rate, payload_time, plan_data_encoding, pn_sequence,
                       ppdu_duration_exact, ppdu_duration_ns, sc_data_rate, scramble,
                       scramble_stream, surrogate_code)
from wigig.phy.ldpc import LdpcCodeDef
from wigig.phy.reception import DEFAULT_SNR_THRESHOLDS, best_sc_mcs, check_thresholds, frame_succeeds

# all-ones seed, one full period; frozen from the list-based register in oracles.py
PN_ALL_ONES = ("00001110111100101100100100000010001001100010111010110110000011"
               "00110101001110011110110100001010101111101001010001101110001111111")

# MCS 12, length 4096, seed 0x5D under the surrogate (672, 504) code
HEADER_GOLDEN = ("bab833d39ed0e5ba71cc33d39698a067a71c1da0cf4efc94c19e9eebb44afad1"
                 "b8fe53b6a52b87f96cc91899baf98fa48313908d6851f697")

ldpc_mcs = st.sampled_from([0] + list(range(1, 25)))


class TestTable:
    @pytest.mark.parametrize("idx,kind", [(0, CONTROL), (1, SC), (12, SC), (13, OFDM),
                                          (24, OFDM), (25, LPSC), (31, LPSC)])
    def test_partition(self, idx, kind):
        assert mcs_lookup(idx).phy_kind == kind

    def test_rows(self):
        m0 = mcs_lookup(0)
        assert (m0.modulation, m0.repetition, m0.code_rate, m0.data_rate) == \
            ("pi/2-BPSK", 32, Fraction(1, 2), 27.5e6)
        m12 = mcs_lookup(12)
        assert (m12.modulation, m12.code_rate, m12.data_rate) == ("pi/2-16QAM", Fraction(3, 4), 4620e6)
        m24 = mcs_lookup(24)
        assert (m24.modulation, m24.code_rate, m24.data_rate) == ("64QAM", Fraction(13, 16), 6756.75e6)

    @pytest.mark.parametrize("bad", [-1, 32, "x", None])
    def test_unknown(self, bad):
        with pytest.raises(UnknownMcs):
            mcs_lookup(bad)

    @pytest.mark.parametrize("idx,mbps", [(0, 27.5), (1, 385.0), (4, 1155.0), (9, 2502.5), (12, 4620.0)])
    def test_sc_rates(self, idx, mbps):
        assert sc_data_rate(mcs_lookup(idx)) == pytest.approx(mbps * 1e6, rel=1e-12)

    @pytest.mark.parametrize("idx,mbps", [(13, 693.0), (18, 2772.0), (24, 6756.75)])
    def test_ofdm_rates(self, idx, mbps):
        assert ofdm_data_rate(mcs_lookup(idx)) == pytest.approx(mbps * 1e6, rel=1e-12)

    def test_repetition_ratio(self):
        assert sc_data_rate(mcs_lookup(2)) / sc_data_rate(mcs_lookup(1)) == 2

    def test_wrong_kind(self):
        with pytest.raises(InvalidParameter):
            sc_data_rate(mcs_lookup(13))
        with pytest.raises(InvalidParameter):
            ofdm_data_rate(mcs_lookup(5))
        assert derived_data_rate(27) is None

    @pytest.mark.parametrize("idx", [i for i in range(25) if i not in (21, 22)])
    def test_table_consistent(self, idx):
        p = mcs_lookup(idx)
        assert derived_data_rate(p) == pytest.approx(p.data_rate, rel=1e-4)

    @pytest.mark.parametrize("idx,derived", [(21, 4504.5e6), (22, 5197.5e6)])
    def test_printed_rows_off(self, idx, derived):
        # the tabulated value disagrees with N_DBPS; the derivation is kept
        p = mcs_lookup(idx)
        assert derived_data_rate(p) == pytest.approx(derived, rel=1e-12)
        assert abs(derived_data_rate(p) - p.data_rate) / p.data_rate > 1e-4


class TestScrambler:
    @given(st.lists(st.integers(0, 1), max_size=300), st.integers(1, 127), st.integers(0, 40))
    def test_involution(self, bits, seed, offset):
        x = np.array(bits, dtype=np.uint8)
        y = scramble(x, seed, offset)
        assert np.array_equal(scramble(y, seed, offset), x)
        assert np.array_equal(y[:offset], x[:offset])

    @given(st.integers(1, 127), st.integers(0, 200))
    def test_zero_input_gives_pn(self, seed, n):
        out = scramble(np.zeros(n + 5, dtype=np.uint8), seed, 5)
        assert out[5:].tolist() == lfsr_bits(seed, n)

    @given(st.lists(st.integers(0, 1), max_size=200), st.lists(st.integers(0, 1), max_size=200),
           st.integers(1, 127))
    def test_continuity(self, a, b, seed):
        a, b = np.array(a, dtype=np.uint8), np.array(b, dtype=np.uint8)
        first, state = scramble_stream(a, seed)
        second, _ = scramble_stream(b, state)
        whole, _ = scramble_stream(np.concatenate([a, b]), seed)
        assert np.array_equal(np.concatenate([first, second]), whole)

    def test_all_ones_golden(self):
        assert "".join(map(str, pn_sequence(0x7F, 127))) == PN_ALL_ONES
        # maximal length: period 127
        assert np.array_equal(pn_sequence(0x7F, 254)[127:], pn_sequence(0x7F, 127))

    def test_zero_seed(self):
        with pytest.raises(InvalidParameter):
            scramble(np.zeros(8, dtype=np.uint8), 0)


class TestLdpc:
    @pytest.mark.parametrize("rate", ["1/2", "5/8", "3/4", "13/16"])
    def test_surrogate_shape(self, rate, rng):
        code = surrogate_code(rate)
        assert code.n == 672 and code.rate == Fraction(rate)
        info = rng.integers(0, 2, code.k, dtype=np.uint8)
        c = code.encode(info)
        assert np.array_equal(c[:code.k], info)
        assert code.is_codeword(c)
        c[0] ^= 1
        assert not code.is_codeword(c)

    def test_from_parity_check(self, rng):
        code = surrogate_code("3/4")
        again = LdpcCodeDef.from_parity_check(code.parity_check)
        info = rng.integers(0, 2, code.k, dtype=np.uint8)
        assert np.array_equal(again.encode(info), code.encode(info))

    def test_wrong_info_length(self):
        with pytest.raises(InvalidCode):
            surrogate_code("1/2").encode(np.zeros(10, dtype=np.uint8))


class TestHeader:
    def test_layout_round_trip(self):
        h = PlcpHeader(mcs=12, length=4096, training_length=3, packet_type=1, bt_request=1)
        bits = h.to_bits()
        assert bits.size == 64
        assert PlcpHeader.from_bits(bits) == h

    def test_reserved_without_training(self):
        h = PlcpHeader(mcs=1, length=10, packet_type=1, bt_request=1)
        back = PlcpHeader.from_bits(h.to_bits())
        assert back.packet_type == 0 and back.bt_request == 0

    def test_hcs_detects_flip(self):
        bits = PlcpHeader(mcs=3, length=77).to_bits()
        bits[20] ^= 1
        with pytest.raises(InvalidParameter):
            PlcpHeader.from_bits(bits)

    def test_field_overflow(self):
        with pytest.raises(InvalidParameter):
            PlcpHeader(mcs=40, length=1).to_bits()

    def test_golden(self):
        out = encode_header(PlcpHeader(mcs=12, length=4096, scrambler_init=0x5D))
        assert np.packbits(out).tobytes().hex() == HEADER_GOLDEN

    def test_golden_matches_step_script(self):
        code = surrogate_code("3/4")
        raw = PlcpHeader(mcs=12, length=4096, scrambler_init=0x5D).to_bits()
        ref = header_steps(raw, lambda info: code.encode(info)[504:])
        assert np.packbits(ref).tobytes().hex() == HEADER_GOLDEN

    @given(st.integers(0, 2 ** 64 - 1).filter(lambda v: v & 0x7F))
    def test_structure(self, value):
        code = surrogate_code("3/4")
        raw = np.array([(value >> i) & 1 for i in range(64)], dtype=np.uint8)
        out = encode_header_bits(raw, code)
        assert out.size == 448
        cs1, cs2 = out[:224], out[224:]
        q = scramble(raw, int(value & 0x7F), 7)
        assert np.array_equal(cs1[:64], q)
        unmasked = cs2 ^ pn_sequence(0x7F, 224)
        assert np.array_equal(unmasked[:64], q)
        # halves share p1..p152 and differ only in which 8 of p153..p168 survive
        assert np.array_equal(cs1[64:216], unmasked[64:216])
        p = code.encode(np.concatenate([q, np.zeros(440, dtype=np.uint8)]))[504:]
        assert np.array_equal(cs1[216:], p[152:160])
        assert np.array_equal(unmasked[216:], p[160:168])
        assert out.tolist() == header_steps(raw, lambda info: code.encode(info)[504:])

    def test_wrong_code(self):
        with pytest.raises(InvalidCode):
            encode_header(PlcpHeader(mcs=1, length=1), surrogate_code("1/2"))


class TestDataPlan:
    def test_mcs12_4096(self):
        p = plan_data_encoding(4096, 12)
        assert (p.l_cwd, p.n_cw, p.n_data_pad, p.n_cbpb, p.n_blk, p.n_blkpad) == \
            (504, 66, 496, 1792, 25, 448)

    def test_mcs1_100(self):
        p = plan_data_encoding(100, 1)
        assert (p.n_cw, p.n_data_pad) == (5, 40)

    def test_exact_fit(self):
        # 63 octets = 504 bits at rate 3/4
        assert plan_data_encoding(63, 12).n_data_pad == 0

    @given(st.integers(1, 20000), ldpc_mcs)
    def test_against_counting(self, length, idx):
        m = mcs_lookup(idx)
        p = plan_data_encoding(length, m)
        assert (p.n_cw, p.n_data_pad, p.n_blk, p.n_blkpad) == \
            plan_by_counting(length, m.code_rate, m.code_repetition, m.n_cbpb)
        assert 0 <= p.n_data_pad < p.l_cwd // p.repetition
        assert 0 <= p.n_blkpad < p.n_cbpb
        assert p.n_blk * p.n_cbpb == p.n_cw * 672 + p.n_blkpad

    def test_errors(self):
        with pytest.raises(UnsupportedCoding):
            plan_data_encoding(10, 25)
        with pytest.raises(InvalidParameter):
            plan_data_encoding(0, 1)


class TestDataEncode:
    @given(st.binary(min_size=1, max_size=600), ldpc_mcs, st.integers(1, 127))
    def test_loopback(self, psdu, idx, seed):
        coded = encode_data(psdu, idx, seed=seed)
        plan = plan_data_encoding(len(psdu), idx)
        assert coded.size == plan.n_blk * plan.n_cbpb
        code = surrogate_code(mcs_lookup(idx).code_rate)
        for w in coded[:plan.n_cw * 672].reshape(-1, 672):
            assert code.is_codeword(w)
        assert decode_data(coded, len(psdu), idx, seed=seed) == psdu

    def test_repetition_duplicates(self):
        coded = encode_data(bytes(range(40)), 1)
        w = coded[:672]
        assert np.array_equal(w[:168], w[168:336])

    def test_block_pad_continues_scrambler(self):
        psdu = bytes(5)
        plan = plan_data_encoding(len(psdu), 12)
        coded = encode_data(psdu, 12, seed=0x2B)
        stream = lfsr_bits(0x2B, plan.n_cw * plan.bits_per_codeword + plan.n_blkpad)
        assert coded[plan.n_cw * 672:].tolist() == stream[plan.n_cw * plan.bits_per_codeword:]

    def test_corrupt_stream_rejected(self):
        coded = encode_data(b"hello", 6)
        coded[3] ^= 1
        with pytest.raises(InvalidParameter):
            decode_data(coded, 5, 6)


class TestDuration:
    def test_no_training_adds_nothing(self):
        assert ppdu_duration_exact(12, 1000, 0) == ppdu_duration_exact(12, 1000)
        assert ppdu_duration_exact(12, 1000, 2) > ppdu_duration_exact(12, 1000)

    @given(st.sampled_from(range(0, 25)), st.integers(1, 50000), st.integers(0, 500))
    def test_monotone(self, idx, length, extra):
        assert ppdu_duration_exact(idx, length + extra) >= ppdu_duration_exact(idx, length)

    def test_mcs12_faster_than_mcs2(self):
        for n in (100, 1500, 65535):
            assert ppdu_duration_exact(12, n) < ppdu_duration_exact(2, n)

    def test_frozen_values(self):
        # preamble 17+9 blocks, header one SC block, 25 data blocks, all at 1760 MHz
        assert ppdu_duration_exact(12, 4096) == Fraction((17 + 9) * 128 + 26 * 512, 1760 * 10 ** 6)
        assert ppdu_duration_ns(12, 4096) == 9455
        assert ppdu_duration_ns(0, 14) == 18764

    def test_payload_zero(self):
        assert payload_time(5, 0) == 0


class TestReception:
    def test_thresholds_monotone(self):
        assert check_thresholds(DEFAULT_SNR_THRESHOLDS) == []
        bad = dict(DEFAULT_SNR_THRESHOLDS, **{"3": 0})
        bad = {int(k): v for k, v in bad.items()}
        assert check_thresholds(bad)

    def test_decision(self):
        assert frame_succeeds(18.0, 12) and not frame_succeeds(17.9, 12)
        assert best_sc_mcs(9.6) == 8
        assert best_sc_mcs(-3) is None
        with pytest.raises(InvalidParameter):
            frame_succeeds(10, 30)

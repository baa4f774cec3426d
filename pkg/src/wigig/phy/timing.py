"""PPDU airtime from preamble sample counts and the data-encoding plan.

Exact durations are kept as :class:`fractions.Fraction` seconds; the
``*_ns`` helpers round up to whole nanoseconds for the simulator.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from wigig import golay
from wigig.phy.data import plan_data_encoding
from wigig.phy.mcs import (CONTROL, OFDM, SC, SC_BLOCK_DATA, SC_BLOCK_GI, SC_CLOCK,
                           mcs_lookup, ofdm_symbol_time)
from wigig.errors import UnsupportedCoding

HEADER_BITS = 64
TRN_SUBFIELDS = 4


@lru_cache(maxsize=1)
def _sample_counts():
    pair = golay.default_pair()
    return {
        "control_stf": golay.build_control_stf(pair).sample_count,
        "stf": golay.build_stf(pair).sample_count,
        "cef": golay.build_cef(pair).sample_count,
        "trn": golay.build_trn_unit(pair, TRN_SUBFIELDS).sample_count,
    }


def preamble_time(mcs) -> Fraction:
    mcs = mcs_lookup(mcs)
    counts = _sample_counts()
    stf = counts["control_stf"] if mcs.phy_kind == CONTROL else counts["stf"]
    return Fraction(stf + counts["cef"], SC_CLOCK)


def header_time(mcs) -> Fraction:
    mcs = mcs_lookup(mcs)
    if mcs.phy_kind == CONTROL:
        chips = HEADER_BITS * (1 / mcs.code_rate) * mcs.spreading
        return Fraction(chips) / SC_CLOCK
    if mcs.phy_kind == OFDM:
        return ofdm_symbol_time()
    return Fraction(SC_BLOCK_DATA + SC_BLOCK_GI, SC_CLOCK)


def payload_time(mcs, length: int) -> Fraction:
    mcs = mcs_lookup(mcs)
    if length <= 0:
        return Fraction(0)
    plan = plan_data_encoding(length, mcs)
    if mcs.phy_kind == SC:
        return Fraction(plan.n_blk * (SC_BLOCK_DATA + SC_BLOCK_GI), SC_CLOCK)
    if mcs.phy_kind == OFDM:
        return plan.n_blk * ofdm_symbol_time()
    if mcs.phy_kind == CONTROL:
        return Fraction(plan.total_bits * mcs.spreading, SC_CLOCK)
    raise UnsupportedCoding(f"MCS {mcs.index} timing is not modelled")


def trn_time(training_length: int) -> Fraction:
    return Fraction(training_length * _sample_counts()["trn"], SC_CLOCK)


def ppdu_duration_exact(mcs, length: int, training_length: int = 0) -> Fraction:
    return (preamble_time(mcs) + header_time(mcs) + payload_time(mcs, length)
            + trn_time(training_length))


def ppdu_duration(mcs, length: int, training_length: int = 0) -> float:
    """Airtime in seconds."""
    return float(ppdu_duration_exact(mcs, length, training_length))


def to_ns(seconds: Fraction) -> int:
    return math.ceil(seconds * 1_000_000_000)


def ppdu_duration_ns(mcs, length: int, training_length: int = 0) -> int:
    return to_ns(ppdu_duration_exact(mcs, length, training_length))


def appdu_duration_exact(parts, training_length: int = 0) -> Fraction:
    """A-PPDU airtime: one preamble, then each part's header and payload back to back.

    ``parts`` is a sequence of ``(mcs, length)`` pairs.
    """
    parts = list(parts)
    if not parts:
        return Fraction(0)
    total = preamble_time(parts[0][0])
    for mcs, length in parts:
        total += header_time(mcs) + payload_time(mcs, length)
    return total + trn_time(training_length)

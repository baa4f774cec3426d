"""PSDU encoding: code-word planning, scrambling, LDPC, and block padding."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from wigig.errors import InvalidParameter, UnsupportedCoding
from wigig.phy.ldpc import LdpcCodeDef, surrogate_code
from wigig.phy.mcs import LDPC_CW, McsProfile, mcs_lookup
from wigig.phy.scrambler import scramble_stream

DEFAULT_SEED = 0x5D


@dataclass(frozen=True)
class DataEncodingPlan:
    n_cw: int
    l_cwd: int
    n_data_pad: int
    n_blk: int
    n_blkpad: int
    n_cbpb: int
    repetition: int = 1

    @property
    def bits_per_codeword(self) -> int:
        """Fresh (non-repeated) data bits carried by each code word."""
        return self.l_cwd // self.repetition

    @property
    def total_bits(self) -> int:
        return self.n_blk * self.n_cbpb


def _ldpc_profile(mcs) -> McsProfile:
    mcs = mcs_lookup(mcs)
    if not mcs.uses_ldpc:
        raise UnsupportedCoding(f"MCS {mcs.index} uses RS/block coding, which is not modelled")
    return mcs


def plan_data_encoding(length: int, mcs) -> DataEncodingPlan:
    mcs = _ldpc_profile(mcs)
    if length < 1:
        raise InvalidParameter("PSDU length must be at least one octet")
    rho, rate = mcs.code_repetition, mcs.code_rate
    l_cwd = LDPC_CW * rate
    if l_cwd.denominator != 1 or l_cwd.numerator % rho:
        raise InvalidParameter(f"code word of MCS {mcs.index} does not split into {rho} repetitions")
    l_cwd = int(l_cwd)
    per_cw = l_cwd // rho
    n_cw = math.ceil(length * 8 / per_cw)
    n_cbpb = mcs.n_cbpb
    n_blk = math.ceil(n_cw * LDPC_CW / n_cbpb)
    return DataEncodingPlan(
        n_cw=n_cw,
        l_cwd=l_cwd,
        n_data_pad=n_cw * per_cw - length * 8,
        n_blk=n_blk,
        n_blkpad=n_blk * n_cbpb - n_cw * LDPC_CW,
        n_cbpb=n_cbpb,
        repetition=rho,
    )


def octets_to_bits(data) -> np.ndarray:
    return np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8), bitorder="little")


def bits_to_octets(bits) -> bytes:
    return np.packbits(np.asarray(bits, dtype=np.uint8), bitorder="little").tobytes()


def _code_for(mcs, code):
    code = code or surrogate_code(mcs.code_rate)
    if code.n != LDPC_CW or code.rate != mcs.code_rate:
        raise InvalidParameter(f"code ({code.n}, {code.k}) does not match MCS {mcs.index} rate {mcs.code_rate}")
    return code


def encode_data(psdu, mcs, code: LdpcCodeDef | None = None, seed: int = DEFAULT_SEED) -> np.ndarray:
    """Coded bit stream of exactly ``n_blk * n_cbpb`` bits."""
    mcs = _ldpc_profile(mcs)
    plan = plan_data_encoding(len(psdu), mcs)
    code = _code_for(mcs, code)
    if seed == 0:
        raise InvalidParameter("an all-zero seed locks the LFSR")

    data = np.concatenate([octets_to_bits(psdu), np.zeros(plan.n_data_pad, dtype=np.uint8)])
    scrambled, state = scramble_stream(data, seed)
    words = scrambled.reshape(plan.n_cw, plan.bits_per_codeword)
    coded = [code.encode(np.tile(w, plan.repetition)) for w in words]
    pad, _ = scramble_stream(np.zeros(plan.n_blkpad, dtype=np.uint8), state)
    return np.concatenate(coded + [pad])


def decode_data(coded, length: int, mcs, code: LdpcCodeDef | None = None,
                seed: int = DEFAULT_SEED) -> bytes:
    """Loopback inverse of :func:`encode_data` for an error-free stream."""
    mcs = _ldpc_profile(mcs)
    plan = plan_data_encoding(length, mcs)
    code = _code_for(mcs, code)
    coded = np.asarray(coded, dtype=np.uint8)
    if coded.size != plan.total_bits:
        raise InvalidParameter(f"expected {plan.total_bits} coded bits, got {coded.size}")
    words = coded[:plan.n_cw * LDPC_CW].reshape(plan.n_cw, LDPC_CW)
    for w in words:
        if not code.is_codeword(w):
            raise InvalidParameter("parity check failed")
    fresh = words[:, :plan.bits_per_codeword].reshape(-1)
    data, _ = scramble_stream(fresh, seed)
    return bits_to_octets(data[:length * 8])

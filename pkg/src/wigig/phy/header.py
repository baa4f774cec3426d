"""PLCP header layout and the shortened/punctured header encoder."""

from __future__ import annotations

import binascii
from dataclasses import dataclass

import numpy as np

from wigig.errors import InvalidCode, InvalidParameter
from wigig.phy.ldpc import LdpcCodeDef, surrogate_code
from wigig.phy.scrambler import ALL_ONES, pn_sequence, scramble

HEADER_BITS = 64
HEADER_INFO = 504   # information bits of the rate-3/4 code word
HEADER_PARITY = 168

# (name, width) in transmission order, least significant bit first
LAYOUT = (
    ("scrambler_init", 7),
    ("mcs", 5),
    ("length", 18),
    ("additional_ppdu", 1),
    ("packet_type", 1),
    ("training_length", 5),
    ("aggregation", 1),
    ("bt_request", 1),
    ("last_rssi", 4),
    ("turnaround", 1),
    ("reserved", 4),
    ("hcs", 16),
)


def _hcs(bits48):
    return binascii.crc_hqx(np.packbits(bits48, bitorder="little").tobytes(), 0xFFFF)


@dataclass(frozen=True)
class PlcpHeader:
    mcs: int
    length: int
    scrambler_init: int = 0x5D
    packet_type: int = 0
    training_length: int = 0
    bt_request: int = 0
    additional_ppdu: int = 0
    aggregation: int = 0
    last_rssi: int = 0
    turnaround: int = 0

    def fields(self):
        values = {name: getattr(self, name, 0) for name, _ in LAYOUT}
        values["reserved"] = 0
        if self.training_length == 0:
            # both are reserved when no training is attached
            values["packet_type"] = 0
            values["bt_request"] = 0
        return values

    def to_bits(self) -> np.ndarray:
        values = self.fields()
        out = []
        for name, width in LAYOUT[:-1]:
            v = int(values[name])
            if not 0 <= v < (1 << width):
                raise InvalidParameter(f"{name}={v} does not fit in {width} bits")
            out.extend((v >> i) & 1 for i in range(width))
        bits = np.array(out, dtype=np.uint8)
        hcs = _hcs(bits)
        return np.concatenate([bits, np.array([(hcs >> i) & 1 for i in range(16)], dtype=np.uint8)])

    @property
    def bits(self) -> int:
        return int(sum(int(b) << i for i, b in enumerate(self.to_bits())))

    @classmethod
    def from_bits(cls, bits) -> "PlcpHeader":
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.size != HEADER_BITS:
            raise InvalidParameter(f"header must be {HEADER_BITS} bits")
        values, pos = {}, 0
        for name, width in LAYOUT:
            values[name] = int(sum(int(b) << i for i, b in enumerate(bits[pos:pos + width])))
            pos += width
        if values["hcs"] != _hcs(bits[:48]):
            raise InvalidParameter("header check sequence mismatch")
        del values["hcs"], values["reserved"]
        return cls(**values)


def encode_header_bits(bits, code: LdpcCodeDef | None = None) -> np.ndarray:
    """Encode 64 raw header bits into the 448-bit (cs1, cs2) sequence.

    The first seven bits are the scrambler seed and go out in clear.
    """
    code = code or surrogate_code("3/4")
    if code.n != 672 or code.k != HEADER_INFO:
        raise InvalidCode(f"header needs the (672, 504) code, got ({code.n}, {code.k})")
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.size != HEADER_BITS:
        raise InvalidParameter(f"header must be {HEADER_BITS} bits")
    seed = int(sum(int(b) << i for i, b in enumerate(bits[:7])))
    q = scramble(bits, seed, start_offset=7)
    c = code.encode(np.concatenate([q, np.zeros(HEADER_INFO - HEADER_BITS, dtype=np.uint8)]))
    p = c[HEADER_INFO:]
    cs1 = np.concatenate([q, p[:160]])
    cs2 = np.concatenate([q, p[:152], p[160:168]])
    cs2 ^= pn_sequence(ALL_ONES, cs2.size)
    return np.concatenate([cs1, cs2])


def encode_header(header: PlcpHeader, code: LdpcCodeDef | None = None) -> np.ndarray:
    return encode_header_bits(header.to_bits(), code)

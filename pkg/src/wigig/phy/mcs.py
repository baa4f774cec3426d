"""MCS table and first-principles data-rate derivation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from wigig.errors import InvalidParameter, UnknownMcs

CONTROL = "Control"
SC = "SC"
OFDM = "OFDM"
LPSC = "LPSC"

SYSTEM_CLOCK = 2_640_000_000          # Hz, OFDM sample clock
SC_CLOCK = SYSTEM_CLOCK * 2 // 3       # Hz, control / SC / LPSC chip clock (1760 MHz)
SC_BLOCK_DATA = 448                    # data symbols per SC block
SC_BLOCK_GI = 64                       # guard symbols per SC block
OFDM_NFFT = 512
OFDM_NCP = 128
LDPC_CW = 672

_BITS = {"pi/2-BPSK": 1, "pi/2-QPSK": 2, "pi/2-16QAM": 4,
         "SQPSK": 1, "QPSK": 2, "16QAM": 4, "64QAM": 6}

# index  modulation   N_CBPS  rep  rate   N_BPCS  N_DBPS/coding         Mbit/s
_TABLE = """
0   pi/2-BPSK     1     32  1/2    1  168                   27.5
1   pi/2-BPSK     1     2   1/2    1  168                   385.0
2   pi/2-BPSK     1     1   1/2    1  168                   770.0
3   pi/2-BPSK     1     1   5/8    1  168                   962.5
4   pi/2-BPSK     1     1   3/4    1  168                   1155.0
5   pi/2-BPSK     1     1   13/16  1  168                   1251.25
6   pi/2-QPSK     2     1   1/2    1  168                   1540.0
7   pi/2-QPSK     2     1   5/8    1  168                   1925.0
8   pi/2-QPSK     2     1   3/4    1  168                   2310.0
9   pi/2-QPSK     2     1   13/16  1  168                   2502.5
10  pi/2-16QAM    4     1   1/2    1  168                   3080.0
11  pi/2-16QAM    4     1   5/8    1  168                   3850.0
12  pi/2-16QAM    4     1   3/4    1  168                   4620.0
13  SQPSK         336   1   1/2    1  168                   693.0
14  SQPSK         336   1   5/8    1  210                   866.25
15  QPSK          672   1   1/2    2  336                   1386.0
16  QPSK          672   1   5/8    2  420                   1732.5
17  QPSK          672   1   3/4    2  504                   2079.0
18  16QAM         1344  1   1/2    4  672                   2772.0
19  16QAM         1344  1   5/8    4  840                   3465.0
20  16QAM         1344  1   3/4    4  1008                  4158.0
21  16QAM         1344  1   13/16  4  1092                  4504.0
22  64QAM         2016  1   5/8    6  1260                  5179.0
23  64QAM         2016  1   3/4    6  1512                  6237.0
24  64QAM         2016  1   13/16  6  1638                  6756.75
25  pi/2-BPSK     392   1   13/16  6  RS(224,208)+BS(16,8)  626.0
26  pi/2-BPSK     392   1   13/16  6  RS(224,208)+BS(12,8)  834.0
27  pi/2-BPSK     392   1   13/16  6  RS(224,208)+SPC(9,8)  1112.0
28  pi/2-QPSK     392   1   13/16  6  RS(224,208)+BS(16,8)  1251.0
29  pi/2-QPSK     392   1   13/16  6  RS(224,208)+BS(12,8)  1668.0
30  pi/2-QPSK     392   1   13/16  6  RS(224,208)+SPC(9,8)  2224.0
31  pi/2-QPSK     392   1   13/16  6  RS(224,208)+BC(8,8)   2503.0
"""


@dataclass(frozen=True)
class McsProfile:
    index: int
    phy_kind: str
    modulation: str
    bits_per_symbol: int
    n_cbps: int
    repetition: int
    code_rate: Fraction
    n_bpcs: int
    n_dbps_or_coding: int | str
    data_rate: float  # bit/s, as tabulated

    @property
    def uses_ldpc(self) -> bool:
        return self.phy_kind != LPSC

    @property
    def code_repetition(self) -> int:
        """Repetition applied inside LDPC code words (control spreading excluded)."""
        return 1 if self.phy_kind == CONTROL else self.repetition

    @property
    def spreading(self) -> int:
        """Chips per coded bit; 32 for the control PHY, else 1."""
        return self.repetition if self.phy_kind == CONTROL else 1

    @property
    def n_cbpb(self) -> int:
        """Coded bits per symbol block (SC block, OFDM symbol, or control code word)."""
        if self.phy_kind == SC:
            return SC_BLOCK_DATA * self.bits_per_symbol
        if self.phy_kind == OFDM:
            return self.n_cbps
        if self.phy_kind == CONTROL:
            return LDPC_CW
        raise InvalidParameter(f"MCS {self.index} has no LDPC block structure")


def _phy_kind(index):
    if index == 0:
        return CONTROL
    if index <= 12:
        return SC
    if index <= 24:
        return OFDM
    return LPSC


def _parse_table():
    rows = {}
    for line in _TABLE.strip().splitlines():
        idx, mod, ncbps, rep, rate, nbpcs, coding, mbps = line.split()
        idx = int(idx)
        rows[idx] = McsProfile(
            index=idx,
            phy_kind=_phy_kind(idx),
            modulation=mod,
            bits_per_symbol=_BITS[mod],
            n_cbps=int(ncbps),
            repetition=int(rep),
            code_rate=Fraction(rate),
            n_bpcs=int(nbpcs),
            n_dbps_or_coding=int(coding) if coding.isdigit() else coding,
            data_rate=float(mbps) * 1e6,
        )
    return rows


MCS_TABLE = _parse_table()


def mcs_lookup(index) -> McsProfile:
    if isinstance(index, McsProfile):
        return index
    try:
        return MCS_TABLE[int(index)]
    except (KeyError, ValueError, TypeError):
        raise UnknownMcs(f"unknown MCS {index!r}; valid indices are 0-31") from None


def sc_data_rate_exact(profile: McsProfile) -> Fraction:
    profile = mcs_lookup(profile)
    if profile.phy_kind == CONTROL:
        # no block guard interval on the control PHY
        return SC_CLOCK * profile.code_rate / profile.repetition
    if profile.phy_kind != SC:
        raise InvalidParameter(f"MCS {profile.index} is {profile.phy_kind}, not SC/Control")
    efficiency = Fraction(SC_BLOCK_DATA, SC_BLOCK_DATA + SC_BLOCK_GI)
    return (SC_CLOCK * efficiency * profile.bits_per_symbol
            * profile.code_rate / profile.repetition)


def sc_data_rate(profile: McsProfile) -> float:
    return float(sc_data_rate_exact(profile))


def ofdm_symbol_time() -> Fraction:
    """Seconds per OFDM symbol including cyclic prefix."""
    return Fraction(OFDM_NFFT + OFDM_NCP, SYSTEM_CLOCK)


def ofdm_data_rate_exact(profile: McsProfile) -> Fraction:
    profile = mcs_lookup(profile)
    if profile.phy_kind != OFDM:
        raise InvalidParameter(f"MCS {profile.index} is {profile.phy_kind}, not OFDM")
    return profile.n_dbps_or_coding / ofdm_symbol_time()


def ofdm_data_rate(profile: McsProfile) -> float:
    return float(ofdm_data_rate_exact(profile))


def derived_data_rate(profile) -> float | None:
    """Rate from first principles, or ``None`` for LPSC rows (table-only)."""
    profile = mcs_lookup(profile)
    if profile.phy_kind in (SC, CONTROL):
        return sc_data_rate(profile)
    if profile.phy_kind == OFDM:
        return ofdm_data_rate(profile)
    return None

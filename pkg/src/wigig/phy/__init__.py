"""Physical layer: MCS table, scrambler, LDPC pipelines and PPDU timing."""

from wigig.phy.data import (DataEncodingPlan, decode_data, encode_data, plan_data_encoding)
from wigig.phy.header import PlcpHeader, encode_header, encode_header_bits
from wigig.phy.ldpc import LdpcCodeDef, surrogate_code
from wigig.phy.mcs import (CONTROL, LPSC, MCS_TABLE, OFDM, SC, McsProfile, derived_data_rate,
                           mcs_lookup, ofdm_data_rate, sc_data_rate)
from wigig.phy.scrambler import lfsr_advance, pn_sequence, scramble, scramble_stream
from wigig.phy.timing import (appdu_duration_exact, header_time, payload_time, ppdu_duration,
                              ppdu_duration_exact, ppdu_duration_ns, preamble_time)

__all__ = [
    "CONTROL", "LPSC", "MCS_TABLE", "OFDM", "SC",
    "DataEncodingPlan", "LdpcCodeDef", "McsProfile", "PlcpHeader",
    "appdu_duration_exact", "decode_data", "derived_data_rate", "encode_data",
    "encode_header", "encode_header_bits", "header_time", "lfsr_advance", "mcs_lookup",
    "ofdm_data_rate", "payload_time", "plan_data_encoding", "pn_sequence",
    "ppdu_duration", "ppdu_duration_exact", "ppdu_duration_ns", "preamble_time",
    "sc_data_rate", "scramble", "scramble_stream", "surrogate_code",
]

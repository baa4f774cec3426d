"""Closed-form MAC throughput for Normal-ACK and A-MPDU exchanges.

Beacon-interval overheads (BTI, A-BFT, ATI) are left out by construction.
All airtimes are whole nanoseconds, exactly as the simulator sees them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from wigig.errors import InvalidParameter
from wigig.mac.aggregation import AMPDU_DELIMITER, MAX_AMPDU_SUBFRAMES
from wigig.mac.frames import CONTROL_FRAME_OCTETS, FCS_OCTETS, MAC_HEADER_OCTETS, FrameType
from wigig.phy.mcs import mcs_lookup
from wigig.phy.timing import ppdu_duration_ns

MPDU_OVERHEAD = MAC_HEADER_OCTETS + FCS_OCTETS


@dataclass(frozen=True)
class TimingParams:
    sifs_ns: int = 3000
    slot_ns: int = 5000
    response_mcs: int = 0
    ack_octets: int = CONTROL_FRAME_OCTETS[FrameType.ACK]
    bar_octets: int = CONTROL_FRAME_OCTETS[FrameType.BAR]
    ba_octets: int = CONTROL_FRAME_OCTETS[FrameType.BA]
    backoff_ns: int = 0          # mean contention overhead per exchange

    def __post_init__(self):
        if min(self.sifs_ns, self.slot_ns, self.backoff_ns) < 0:
            raise InvalidParameter("timing parameters must be non-negative")

    @property
    def t_ack(self) -> int:
        return ppdu_duration_ns(self.response_mcs, self.ack_octets)

    @property
    def t_bar(self) -> int:
        return ppdu_duration_ns(self.response_mcs, self.bar_octets)

    @property
    def t_ba(self) -> int:
        return ppdu_duration_ns(self.response_mcs, self.ba_octets)


DEFAULT_TIMING = TimingParams()


def ampdu_length(subframe_octets: int, n_subframes: int, delimiter: int = AMPDU_DELIMITER) -> int:
    """PSDU octets of ``n_subframes`` equal MPDUs, each padded to 4 octets but the last."""
    mpdu = subframe_octets + MPDU_OVERHEAD + delimiter
    return (n_subframes - 1) * (mpdu + (-mpdu) % 4) + mpdu


def normal_ack_exchange_ns(mcs, payload_octets: int, timing: TimingParams = DEFAULT_TIMING) -> int:
    t_data = ppdu_duration_ns(mcs, payload_octets + MPDU_OVERHEAD)
    return timing.backoff_ns + t_data + timing.sifs_ns + timing.t_ack + timing.sifs_ns


def ampdu_exchange_ns(mcs, subframe_octets: int, n_subframes: int,
                      timing: TimingParams = DEFAULT_TIMING, delimiter: int = AMPDU_DELIMITER) -> int:
    t_data = ppdu_duration_ns(mcs, ampdu_length(subframe_octets, n_subframes, delimiter))
    if n_subframes == 1:
        # a lone MPDU in an A-MPDU is acknowledged with a plain ACK
        return timing.backoff_ns + t_data + timing.sifs_ns + timing.t_ack + timing.sifs_ns
    return (timing.backoff_ns + t_data + timing.sifs_ns + timing.t_bar + timing.sifs_ns
            + timing.t_ba + timing.sifs_ns)


def throughput_normal_ack(mcs, payload_octets: int, timing: TimingParams = DEFAULT_TIMING) -> float:
    """bit/s of back-to-back DATA + ACK exchanges."""
    if payload_octets <= 0:
        return 0.0
    return 8e9 * payload_octets / normal_ack_exchange_ns(mcs, payload_octets, timing)


def throughput_ampdu(mcs, subframe_octets: int, n_subframes: int,
                     timing: TimingParams = DEFAULT_TIMING, delimiter: int = AMPDU_DELIMITER) -> float:
    """bit/s of back-to-back A-MPDU + BAR + BA exchanges."""
    if not 1 <= n_subframes <= MAX_AMPDU_SUBFRAMES:
        raise InvalidParameter(f"n_subframes must be 1..{MAX_AMPDU_SUBFRAMES}")
    if subframe_octets <= 0:
        return 0.0
    total = ampdu_exchange_ns(mcs, subframe_octets, n_subframes, timing, delimiter)
    return 8e9 * subframe_octets * n_subframes / total


def asymptote(mcs) -> float:
    """Limit of either curve as the payload grows: the PHY data rate."""
    return float(mcs_lookup(mcs).data_rate)


def curve(mcs, sizes, policy: str = "ack", n_subframes: int = MAX_AMPDU_SUBFRAMES,
          timing: TimingParams = DEFAULT_TIMING) -> np.ndarray:
    """Throughput (bit/s) over ``sizes``; for ``ampdu`` a size is the total payload."""
    out = []
    for s in sizes:
        s = int(s)
        if policy == "ack":
            out.append(throughput_normal_ack(mcs, s, timing))
        elif policy == "ampdu":
            out.append(throughput_ampdu(mcs, max(s // n_subframes, 0), n_subframes, timing))
        else:
            raise InvalidParameter(f"unknown policy {policy!r}")
    return np.asarray(out, dtype=float)


def default_sizes(lo: int = 256, hi: int = 262144, n: int = 11) -> np.ndarray:
    return np.unique(np.round(np.geomspace(lo, hi, n)).astype(int))


def sim_vs_model(scenario) -> dict:
    """Run a single contention-free SP scenario and compare with the model.

    Returns ``{"sim": bit/s, "model": bit/s, "rel_error": float}``.
    """
    from wigig.sim.kernel import run
    from wigig.sim.scenario import as_scenario

    scenario = as_scenario(scenario)
    flows = list(scenario.flows.values())
    if len(flows) != 1:
        raise InvalidParameter("sim_vs_model needs exactly one flow")
    flow = flows[0]
    timing = TimingParams(sifs_ns=scenario.sifs_ns, slot_ns=scenario.slot_ns)
    if flow.policy == "ampdu":
        model = throughput_ampdu(flow.mcs, flow.payload, flow.n_subframes, timing)
    else:
        model = throughput_normal_ack(flow.mcs, flow.payload, timing)
    result = run(scenario)
    sim = result.metrics.exchange_throughput(flow.name)
    if model == 0:
        rel = 0.0 if sim == 0 else float("inf")
    else:
        rel = abs(sim - model) / model
    return {"sim": sim, "model": model, "rel_error": rel}

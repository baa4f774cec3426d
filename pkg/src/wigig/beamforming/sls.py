"""Sector-level sweep: ISS, RSS, SSW-Feedback and SSW-ACK."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from wigig.beamforming.channel import SectorChannel
from wigig.errors import LinkFailure
from wigig.phy.reception import DEFAULT_SNR_THRESHOLDS

ISS = "ISS"
RSS = "RSS"
SSW_FB = "SSW_FB"
SSW_ACK = "SSW_ACK"
DONE = "done"
PHASES = (ISS, RSS, SSW_FB, SSW_ACK, DONE)


@dataclass(frozen=True)
class SswFrame:
    phase: str
    sender: str
    antenna: int
    sector: int
    cdown: int
    rx_antenna: int
    feedback: tuple | None = None   # (antenna, sector, snr) reported back


@dataclass(frozen=True)
class SectorChoice:
    antenna: int
    sector: int
    peer_rx_antenna: int
    snr_db: float


@dataclass
class SlsResult:
    initiator: SectorChoice          # best sector of the initiator link
    responder: SectorChoice          # best sector of the responder link
    messages: list = field(default_factory=list)
    phases: list = field(default_factory=list)

    @property
    def message_count(self) -> int:
        return len(self.messages)

    def count(self, phase) -> int:
        return sum(1 for m in self.messages if m.phase == phase)


def _sweep(channel: SectorChannel, phase, sender, rng, feedback=None):
    """TXSS: every tx sector once per receive antenna, receiver quasi-omni."""
    frames = []
    total = channel.total_tx_sectors * channel.n_rx_antennas
    quality = channel.measure(channel.rx_quasi_omni(), rng)
    for rx_ant in range(channel.n_rx_antennas):
        for tx_ant in range(channel.n_tx_antennas):
            for sec in range(channel.n_tx_sectors):
                frames.append(SswFrame(phase, sender, tx_ant, sec, total - len(frames) - 1,
                                       rx_ant, feedback))
    # first maximum in (tx_ant, tx_sector, rx_ant) order is the lowest index
    tx_ant, sec, rx_ant = np.unravel_index(np.argmax(quality), quality.shape)
    best = SectorChoice(int(tx_ant), int(sec), int(rx_ant), float(quality[tx_ant, sec, rx_ant]))
    return frames, best


def run_sls(channel: SectorChannel, initiator="initiator", responder="responder",
            reverse: SectorChannel | None = None, rng=None,
            sensitivity_db=DEFAULT_SNR_THRESHOLDS[0]) -> SlsResult:
    """Run a full SLS.  ``reverse`` defaults to the reciprocal of ``channel``."""
    reverse = channel.reverse() if reverse is None else reverse
    result_msgs, phases = [], []

    phases.append(ISS)
    iss, best_i = _sweep(channel, ISS, initiator, rng)
    result_msgs += iss
    if best_i.snr_db < sensitivity_db:
        raise LinkFailure(f"initiator link best SNR {best_i.snr_db:.1f} dB is below MCS 0 sensitivity")

    phases.append(RSS)
    fb = (best_i.antenna, best_i.sector, best_i.snr_db)
    rss, best_r = _sweep(reverse, RSS, responder, rng, feedback=fb)
    result_msgs += rss
    if best_r.snr_db < sensitivity_db:
        raise LinkFailure(f"responder link best SNR {best_r.snr_db:.1f} dB is below MCS 0 sensitivity")

    phases.append(SSW_FB)
    result_msgs.append(SswFrame(SSW_FB, initiator, best_i.antenna, best_i.sector, 0,
                                best_i.peer_rx_antenna,
                                (best_r.antenna, best_r.sector, best_r.snr_db)))
    phases.append(SSW_ACK)
    result_msgs.append(SswFrame(SSW_ACK, responder, best_r.antenna, best_r.sector, 0,
                                best_r.peer_rx_antenna, fb))
    phases.append(DONE)
    return SlsResult(best_i, best_r, result_msgs, phases)


def expected_message_count(channel: SectorChannel) -> int:
    """ISS + RSS + feedback + ACK on the deterministic path."""
    return (channel.total_tx_sectors * channel.n_rx_antennas
            + channel.total_rx_sectors * channel.n_tx_antennas + 2)

"""Beam refinement (BRP) transactions and beam-tracking signalling."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from wigig.beamforming.channel import SectorChannel
from wigig.beamforming.sls import SlsResult
from wigig.errors import ProtocolViolation

SETUP = "setup"
MID = "MID"
BC = "BC"
TRANSACTIONS = "transactions"
DONE = "done"

TX_REFINE = "tx-refine"
RX_REFINE = "rx-refine"


@dataclass
class BrpState:
    """BRP session between an SLS initiator and responder.

    ``initiator_requests`` / ``responder_requests`` are how many setup
    exchanges each side keeps its capability-request bit set for.
    """

    initiator_requests: int = 0
    responder_requests: int = 0
    phase: str = SETUP
    messages: list = field(default_factory=list)
    pending_trn_t: int = 0
    pending_trn_r: int = 0


def brp_setup(state: BrpState, run_mid=False, run_bc=False) -> BrpState:
    """Exchange setup frames until the responder clears capability-request,
    then the initiator answers with it cleared too.  MID and BC are
    pass-through phases."""
    if state.phase != SETUP:
        raise ProtocolViolation(f"BRP setup in phase {state.phase}")
    i_left, r_left = state.initiator_requests, state.responder_requests
    while True:
        state.messages.append(("initiator", "BRP-setup", int(i_left > 0)))
        i_left = max(0, i_left - 1)
        r_flag = int(r_left > 0)
        state.messages.append(("responder", "BRP-setup", r_flag))
        r_left = max(0, r_left - 1)
        if not r_flag:
            state.messages.append(("initiator", "BRP-setup", 0))
            break
    if run_mid:
        state.phase = MID
        state.messages.append(("initiator", "MID", 0))
    if run_bc:
        state.phase = BC
        state.messages.append(("initiator", "BC", 0))
    state.phase = TRANSACTIONS
    return state


@dataclass(frozen=True)
class BrpResult:
    kind: str
    antenna: int
    sector: int
    snr_db: float
    candidates: tuple


def brp_transaction(state: BrpState, kind: str, channel: SectorChannel, sls: SlsResult,
                    candidates=None, rng=None) -> BrpResult:
    """Refine the initiator link found by ``sls``.

    ``tx-refine`` sweeps TRN-T over candidate transmit sectors with the
    receiver on its SLS antenna in quasi-omni mode; ``rx-refine`` has the
    receiver sweep TRN-R over candidate receive sectors while the
    transmitter holds its SLS sector.  ``candidates`` defaults to every
    sector of the relevant antenna.
    """
    if state.phase != TRANSACTIONS:
        raise ProtocolViolation("BRP transaction before setup completed")
    tx_ant, tx_sec = sls.initiator.antenna, sls.initiator.sector
    rx_ant = sls.initiator.peer_rx_antenna
    if kind == TX_REFINE:
        if candidates is None:
            candidates = range(channel.n_tx_sectors)
        candidates = tuple(int(c) for c in candidates)
        q = channel.measure(channel.rx_quasi_omni()[tx_ant, list(candidates), rx_ant], rng)
        state.pending_trn_t = len(candidates)
        state.messages.append(("initiator", "BRP+TRN-T", len(candidates)))
        state.messages.append(("responder", "BRP-feedback", 0))
        best = int(np.argmax(q))
        state.pending_trn_t = 0
        return BrpResult(kind, tx_ant, candidates[best], float(q[best]), candidates)
    if kind == RX_REFINE:
        if candidates is None:
            candidates = range(channel.n_rx_sectors)
        candidates = tuple(int(c) for c in candidates)
        q = channel.measure(channel.gain_db[tx_ant, tx_sec, rx_ant, list(candidates)], rng)
        state.pending_trn_r = len(candidates)
        state.messages.append(("initiator", "BRP-request-rx", 0))
        state.messages.append(("initiator", "BRP+TRN-R", len(candidates)))
        best = int(np.argmax(q))
        state.pending_trn_r = 0
        return BrpResult(kind, rx_ant, candidates[best], float(q[best]), candidates)
    raise ProtocolViolation(f"unknown refinement request {kind!r}")


class BeamTrackAction(enum.Enum):
    NONE = "None"
    SEND_TRN_T = "SendTrnT"
    SEND_TRN_R = "SendTrnR"
    REQUEST_TRN_R = "RequestTrnR"
    UNSPECIFIED = "Unspecified"


def beam_track_action(packet_type: int, bt_request: int, training_length: int) -> BeamTrackAction:
    """Beam-tracking type signalled by the PLCP header fields."""
    if training_length == 0:
        return BeamTrackAction.NONE
    if bt_request and packet_type:
        return BeamTrackAction.SEND_TRN_T
    if not bt_request and not packet_type:
        return BeamTrackAction.SEND_TRN_R
    if bt_request and not packet_type:
        return BeamTrackAction.REQUEST_TRN_R
    return BeamTrackAction.UNSPECIFIED

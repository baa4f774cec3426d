"""Sector-level sweep, A-BFT, beam refinement and beam tracking."""

from wigig.beamforming.beacon import (AbftOutcome, BeaconTx, a_bft_access,
                                      abft_success_probability, beacon_txss)
from wigig.beamforming.channel import SectorChannel
from wigig.beamforming.refine import (RX_REFINE, TX_REFINE, BeamTrackAction, BrpResult, BrpState,
                                      beam_track_action, brp_setup, brp_transaction)
from wigig.beamforming.sls import SlsResult, SswFrame, expected_message_count, run_sls

__all__ = [
    "RX_REFINE", "TX_REFINE",
    "AbftOutcome", "BeaconTx", "BeamTrackAction", "BrpResult", "BrpState", "SectorChannel",
    "SlsResult", "SswFrame",
    "a_bft_access", "abft_success_probability", "beacon_txss", "beam_track_action",
    "brp_setup", "brp_transaction", "expected_message_count", "run_sls",
]

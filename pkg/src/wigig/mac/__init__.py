"""MAC layer: frames, EDCA, NAV, beacon-interval schedule, aggregation, block ACK."""

from wigig.mac.aggregation import (Amsdu, Ampdu, Appdu, Msdu, aggregate, build_amsdu, build_ampdu,
                                   build_appdu)
from wigig.mac.blockack import BlockAckState, block_ack_flow, format_bitmap, retransmission_set
from wigig.mac.edca import (DEFAULT_EDCA, AcParams, EdcaState, MacTiming, check_priority_order,
                            cw_after_failures)
from wigig.mac.frames import (AC, AccessCategory, AckPolicy, FrameType, MacHeader, Mpdu,
                              control_frame, up_to_ac)
from wigig.mac.nav import NavState, medium_busy, nav_update
from wigig.mac.schedule import (CBAP, SP, Allocation, BeaconIntervalSchedule, allocate_dynamic_sp,
                                extend_sp, sp_manage, truncate_sp)

__all__ = [
    "AC", "CBAP", "DEFAULT_EDCA", "SP",
    "AcParams", "AccessCategory", "AckPolicy", "Allocation", "Amsdu", "Ampdu", "Appdu",
    "BeaconIntervalSchedule", "BlockAckState", "EdcaState", "FrameType", "MacHeader",
    "MacTiming", "Mpdu", "Msdu", "NavState",
    "aggregate", "allocate_dynamic_sp", "block_ack_flow", "build_amsdu", "build_ampdu",
    "build_appdu", "check_priority_order", "control_frame", "cw_after_failures", "extend_sp",
    "format_bitmap", "medium_busy", "nav_update", "retransmission_set", "sp_manage",
    "truncate_sp", "up_to_ac",
]

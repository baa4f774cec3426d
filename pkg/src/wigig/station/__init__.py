"""Per-station management: power save and fast session transfer."""

from wigig.station.bands import DEFAULT_PROFILES, BandChoice, BandProfile, band_select
from wigig.station.fst import (ACK_CONFIRMED, IDLE, SETUP, SWITCH_PENDING, TRANSITIONED, Channel,
                               FstSession, FstTrigger, fst_run)
from wigig.station.power import (ACTIVE, AWAKE, BUFFERED, DELIVERED, DOZE, ENTER_PS, EXIT_PS,
                                 INFO_REQUEST, POWER_SAVE, PowerSaveBuffer, PowerStatus,
                                 WakeupSchedule, beacon_carries_wakeup_schedule, ps_transition)

__all__ = [
    "ACK_CONFIRMED", "ACTIVE", "AWAKE", "BUFFERED", "DEFAULT_PROFILES", "DELIVERED", "DOZE",
    "ENTER_PS", "EXIT_PS", "IDLE", "INFO_REQUEST", "POWER_SAVE", "SETUP", "SWITCH_PENDING",
    "TRANSITIONED",
    "BandChoice", "BandProfile", "Channel", "FstSession", "FstTrigger", "PowerSaveBuffer",
    "PowerStatus", "WakeupSchedule",
    "band_select", "beacon_carries_wakeup_schedule", "fst_run", "ps_transition",
]

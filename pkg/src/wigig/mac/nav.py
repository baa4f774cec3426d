"""Virtual carrier sense: one NAV per station or one per antenna sector."""

from __future__ import annotations

import copy

from wigig.errors import InvalidParameter
from wigig.mac.frames import FrameType, Mpdu

SINGLE = "single"
PER_SECTOR = "per-sector"


class NavState:
    def __init__(self, mode=SINGLE, sectors=1):
        if mode not in (SINGLE, PER_SECTOR):
            raise InvalidParameter(f"unknown NAV mode {mode!r}")
        if mode == SINGLE:
            sectors = 1
        if sectors < 1:
            raise InvalidParameter("need at least one NAV timer")
        self.mode = mode
        self.timers = [0] * sectors   # microseconds remaining

    @property
    def busy(self) -> bool:
        return any(t > 0 for t in self.timers)

    def advance(self, elapsed_us):
        self.timers = [max(0, t - elapsed_us) for t in self.timers]
        return self

    def update(self, frame: Mpdu, own_address, sector=0):
        """Apply a correctly received frame in place and return ``self``."""
        if not frame.fcs_ok:
            return self
        idx = sector if self.mode == PER_SECTOR else 0
        if not 0 <= idx < len(self.timers):
            raise InvalidParameter(f"no NAV timer for sector {sector}")
        hdr = frame.header
        if hdr.destination == own_address or hdr.receiver == own_address:
            return self
        if hdr.frame_type in (FrameType.RTS, FrameType.DMG_CTS):
            self.timers[idx] = hdr.duration
        elif hdr.duration > self.timers[idx]:
            self.timers[idx] = hdr.duration
        return self

    def __repr__(self):
        return f"NavState(mode={self.mode!r}, timers={self.timers})"


def nav_update(nav: NavState, frame: Mpdu, own_address, sector=0) -> NavState:
    """Functional form of :meth:`NavState.update`; ``nav`` is left untouched."""
    return copy.deepcopy(nav).update(frame, own_address, sector)


def medium_busy(cca_busy: bool, nav: NavState) -> bool:
    return bool(cca_busy) or nav.busy

"""Power-management modes, doze/awake states and frame buffering for dozing peers."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace

from wigig.errors import InvalidParameter, ProtocolViolation

ACTIVE = "active"
POWER_SAVE = "power_save"
AWAKE = "awake"
DOZE = "doze"

ENTER_PS = "enter_ps"
EXIT_PS = "exit_ps"

DELIVERED = "delivered"
BUFFERED = "buffered"
INFO_REQUEST = "info_request"


@dataclass(frozen=True)
class WakeupSchedule:
    """Awake for ``window_us`` from ``window_start_us`` in every ``period_bi``-th BI."""

    period_bi: int = 1
    offset_bi: int = 0
    window_start_us: int = 0
    window_us: int = 100

    def __post_init__(self):
        if self.period_bi < 1 or self.window_us <= 0:
            raise InvalidParameter("wakeup schedule needs period >= 1 and a positive window")

    def awake_bi(self, bi: int) -> bool:
        return (bi - self.offset_bi) % self.period_bi == 0

    def awake_at(self, bi: int, t_us: float) -> bool:
        return (self.awake_bi(bi)
                and self.window_start_us <= t_us < self.window_start_us + self.window_us)

    def next_window(self, bi: int, t_us: float):
        """``(bi, start_us)`` of the first awake instant at or after ``(bi, t_us)``."""
        if self.awake_at(bi, t_us):
            return bi, t_us
        if self.awake_bi(bi) and t_us < self.window_start_us:
            return bi, self.window_start_us
        b = bi + 1
        while not self.awake_bi(b):
            b += 1
        return b, self.window_start_us

    def awake_fraction(self, bi_duration_us: int) -> float:
        return min(self.window_us, bi_duration_us) / bi_duration_us / self.period_bi


@dataclass(frozen=True)
class PowerStatus:
    mode: str = ACTIVE
    state: str = AWAKE
    wakeup_schedule: WakeupSchedule | None = None

    def awake_at(self, bi: int, t_us: float) -> bool:
        if self.mode == ACTIVE or self.wakeup_schedule is None:
            return True
        return self.wakeup_schedule.awake_at(bi, t_us)

    def at(self, bi: int, t_us: float) -> "PowerStatus":
        """Status with ``state`` evaluated at the given instant."""
        return replace(self, state=AWAKE if self.awake_at(bi, t_us) else DOZE)


def ps_transition(status: PowerStatus, request: str, schedule: WakeupSchedule | None = None,
                  ack_received: bool = True) -> PowerStatus:
    """Apply a power-save configuration request; nothing changes until it is ACKed."""
    if request == ENTER_PS:
        if schedule is None:
            raise ProtocolViolation("entering power save requires a wakeup schedule element")
        if not ack_received:
            return status
        return PowerStatus(POWER_SAVE, AWAKE, schedule)
    if request == EXIT_PS:
        if not ack_received:
            return status
        return PowerStatus(ACTIVE, AWAKE, None)
    raise InvalidParameter(f"unknown power-save request {request!r}")


def beacon_carries_wakeup_schedule(pcp_status: PowerStatus) -> bool:
    """A PCP/AP advertises its own schedule in beacons only while in power save."""
    return pcp_status.mode == POWER_SAVE


class PowerSaveBuffer:
    """Per-peer buffering for frames addressed to dozing stations.

    Used by the PCP/AP for its associated stations and by any station that
    has learned a peer's schedule.  An unknown peer triggers an information
    request before anything can be sent.
    """

    def __init__(self):
        self.peers = {}
        self.queues = {}

    def learn(self, peer, status: PowerStatus):
        self.peers[peer] = status

    def forget(self, peer):
        self.peers.pop(peer, None)

    def deliver_or_buffer(self, frame, peer, bi: int, t_us: float) -> str:
        q = self.queues.setdefault(peer, deque())
        status = self.peers.get(peer)
        if status is None:
            q.append(frame)
            return INFO_REQUEST
        if status.awake_at(bi, t_us) and not q:
            return DELIVERED
        q.append(frame)
        return BUFFERED

    def release(self, peer, bi: int, t_us: float) -> list:
        """Frames for ``peer`` in FIFO order if it is awake now, else nothing."""
        status = self.peers.get(peer)
        q = self.queues.get(peer)
        if status is None or not q or not status.awake_at(bi, t_us):
            return []
        out = list(q)
        q.clear()
        return out

    def pending(self, peer) -> int:
        return len(self.queues.get(peer, ()))

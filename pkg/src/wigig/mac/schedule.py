"""Beacon-interval layout and service-period management.

All times are integer microseconds measured from the start of the beacon
interval.  Schedules are immutable; every operation returns a new one.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from wigig.errors import InvalidParameter, ProtocolViolation, ScheduleConflict

SP = "SP"
CBAP = "CBAP"


@dataclass(frozen=True)
class Allocation:
    alloc_id: str
    kind: str
    source: str | None
    destination: str | None
    start: int
    duration: int
    pseudo_static: bool = False
    spatial_share: bool = False
    dynamic: bool = False

    def __post_init__(self):
        if self.kind not in (SP, CBAP):
            raise InvalidParameter(f"allocation kind must be SP or CBAP, got {self.kind!r}")
        if self.duration < 0 or self.start < 0:
            raise InvalidParameter("allocation start/duration must be non-negative")
        if self.kind == SP and (self.source is None or self.destination is None):
            raise InvalidParameter("an SP needs a source and a destination")

    @property
    def end(self) -> int:
        return self.start + self.duration

    def overlaps(self, other: "Allocation") -> bool:
        return self.start < other.end and other.start < self.end

    def stations(self):
        return {s for s in (self.source, self.destination) if s is not None}


def may_overlap(a: Allocation, b: Allocation) -> bool:
    """Only spatially shared SPs between disjoint station pairs may run concurrently."""
    return (a.kind == SP and b.kind == SP and a.spatial_share and b.spatial_share
            and not (a.stations() & b.stations()))


@dataclass(frozen=True)
class BeaconIntervalSchedule:
    duration: int = 1000
    bti: int = 50
    abft: tuple | None = None        # (slot_count, slot_duration)
    ati: int | None = None
    allocations: tuple = field(default_factory=tuple)

    @property
    def abft_duration(self) -> int:
        return 0 if self.abft is None else self.abft[0] * self.abft[1]

    @property
    def dti_start(self) -> int:
        return self.bti + self.abft_duration + (self.ati or 0)

    def get(self, alloc_id) -> Allocation:
        for a in self.allocations:
            if a.alloc_id == alloc_id:
                return a
        raise InvalidParameter(f"no allocation {alloc_id!r}")

    def conflicts(self) -> list[str]:
        errors = []
        if self.dti_start > self.duration:
            errors.append("BTI, A-BFT and ATI exceed the beacon interval")
        for a in self.allocations:
            if a.start < self.dti_start or a.end > self.duration:
                errors.append(f"allocation {a.alloc_id} lies outside the DTI "
                              f"[{self.dti_start}, {self.duration})")
        allocs = sorted(self.allocations, key=lambda a: (a.start, a.alloc_id))
        for i, a in enumerate(allocs):
            for b in allocs[i + 1:]:
                if b.start >= a.end:
                    break
                if a.overlaps(b) and not may_overlap(a, b):
                    errors.append(f"schedule conflict: {a.kind} {a.alloc_id} overlaps "
                                  f"{b.kind} {b.alloc_id}")
        return errors

    def validate(self):
        errors = self.conflicts()
        if errors:
            raise ScheduleConflict("; ".join(errors))
        return self

    def free_intervals(self):
        """Gaps in the DTI not covered by any allocation."""
        gaps, cursor = [], self.dti_start
        for a in sorted(self.allocations, key=lambda a: a.start):
            if a.start > cursor:
                gaps.append((cursor, a.start))
            cursor = max(cursor, a.end)
        if cursor < self.duration:
            gaps.append((cursor, self.duration))
        return gaps

    def _replace_alloc(self, old, new_allocs):
        allocs = [a for a in self.allocations if a.alloc_id != old.alloc_id]
        return replace(self, allocations=tuple(allocs + list(new_allocs)))


def _require_source(alloc, requester):
    if alloc.kind != SP:
        raise ProtocolViolation(f"{alloc.alloc_id} is not a service period")
    if requester != alloc.source:
        raise ProtocolViolation(f"only the SP source {alloc.source} may modify {alloc.alloc_id}")


def truncate_sp(schedule, alloc_id, at, requester) -> BeaconIntervalSchedule:
    """The source relinquishes the SP from time ``at`` onwards."""
    sp = schedule.get(alloc_id)
    _require_source(sp, requester)
    if not sp.start <= at <= sp.end:
        raise InvalidParameter(f"truncation point {at} is outside {alloc_id}")
    return schedule._replace_alloc(sp, [replace(sp, duration=at - sp.start)])


def extend_sp(schedule, alloc_id, extra, requester) -> BeaconIntervalSchedule:
    sp = schedule.get(alloc_id)
    _require_source(sp, requester)
    if extra < 0:
        raise InvalidParameter("extension must be non-negative")
    new = schedule._replace_alloc(sp, [replace(sp, duration=sp.duration + extra)])
    errors = new.conflicts()
    if errors:
        raise ScheduleConflict("; ".join(errors))
    return new


def allocate_dynamic_sp(schedule, alloc: Allocation, during) -> BeaconIntervalSchedule:
    """Insert an SP negotiated during the existing allocation ``during``.

    The new SP may not start before that allocation does.  A CBAP it
    overlaps gives up the overlapped time; any other overlap is a conflict.
    """
    host = schedule.get(during)
    if alloc.kind != SP:
        raise InvalidParameter("dynamic allocations are service periods")
    if alloc.start < host.start:
        raise ProtocolViolation("a dynamic SP cannot start before the period it was scheduled in")
    alloc = replace(alloc, dynamic=True)
    allocs = []
    for a in schedule.allocations:
        if a.kind == CBAP and a.overlaps(alloc):
            if a.start < alloc.start:
                allocs.append(replace(a, duration=alloc.start - a.start))
            if a.end > alloc.end:
                allocs.append(replace(a, alloc_id=f"{a.alloc_id}+", start=alloc.end,
                                      duration=a.end - alloc.end))
        else:
            allocs.append(a)
    new = replace(schedule, allocations=tuple(allocs + [alloc]))
    errors = new.conflicts()
    if errors:
        raise ScheduleConflict("; ".join(errors))
    return new


def sp_manage(schedule, action, **kwargs) -> BeaconIntervalSchedule:
    """Dispatch ``allocate_dynamic``, ``truncate`` or ``extend``."""
    ops = {"allocate_dynamic": allocate_dynamic_sp, "truncate": truncate_sp, "extend": extend_sp}
    try:
        op = ops[action]
    except KeyError:
        raise InvalidParameter(f"unknown SP action {action!r}") from None
    return op(schedule, **kwargs)

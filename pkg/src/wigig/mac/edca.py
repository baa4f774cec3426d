"""EDCA contention: per-AC contention windows, AIFS, backoff and TXOP grants."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from wigig.errors import InvalidParameter
from wigig.mac.frames import AC, AccessCategory, Mpdu


@dataclass(frozen=True)
class MacTiming:
    slot_ns: int = 5_000
    sifs_ns: int = 3_000

    def aifs_ns(self, params: "AcParams") -> int:
        return self.sifs_ns + params.aifs * self.slot_ns


@dataclass(frozen=True)
class AcParams:
    ac: AccessCategory
    cw_min: int
    cw_max: int
    aifs: int               # idle slots after SIFS
    txop_limit: int = 0     # microseconds; 0 allows a single exchange

    def __post_init__(self):
        for name in ("cw_min", "cw_max"):
            v = getattr(self, name)
            if v < 0 or (v + 1) & v:
                raise InvalidParameter(f"{name}={v} is not of the form 2^m - 1")
        if self.cw_min > self.cw_max:
            raise InvalidParameter("cw_min exceeds cw_max")


DEFAULT_EDCA = {
    AC.BK: AcParams(AC.BK, 15, 1023, 7, 0),
    AC.BE: AcParams(AC.BE, 15, 1023, 3, 0),
    AC.VI: AcParams(AC.VI, 7, 15, 2, 3008),
    AC.VO: AcParams(AC.VO, 3, 7, 2, 1504),
}


def check_priority_order(params) -> list[str]:
    """Higher ACs must not get larger AIFS or CW_min than lower ones."""
    errors = []
    ordered = sorted(params.values(), key=lambda p: p.ac)
    for lo, hi in zip(ordered, ordered[1:]):
        if hi.aifs > lo.aifs:
            errors.append(f"AIFS[{hi.ac.name}] > AIFS[{lo.ac.name}]")
        if hi.cw_min > lo.cw_min:
            errors.append(f"CWmin[{hi.ac.name}] > CWmin[{lo.ac.name}]")
    return errors


def cw_after_failures(cw_min: int, cw_max: int, j: int) -> int:
    return min((1 << j) * (cw_min + 1) - 1, cw_max)


@dataclass
class AcState:
    params: AcParams
    cw: int = 0
    backoff: int = 0
    retries: int = 0
    aifs_remaining: int = 0
    queue: deque = field(default_factory=deque)

    def __post_init__(self):
        self.cw = self.params.cw_min
        self.aifs_remaining = self.params.aifs


class EdcaState:
    """Contention state of one station; advanced one slot at a time.

    ``retry_limit`` of ``None`` never drops frames.
    """

    def __init__(self, params=None, rng=None, be_only=False, retry_limit=7):
        params = dict(params or DEFAULT_EDCA)
        if be_only:
            params = {AC.BE: params[AC.BE]}
        self.rng = rng if rng is not None else np.random.default_rng(0)
        self.retry_limit = retry_limit
        self.acs = {ac: AcState(p) for ac, p in sorted(params.items())}
        for st in self.acs.values():
            self._draw(st)

    def _draw(self, st):
        st.backoff = int(self.rng.integers(0, st.cw + 1))

    def _map(self, ac):
        ac = AccessCategory(ac)
        if ac not in self.acs:
            # BE-only stations carry every UP on BE
            return AC.BE
        return ac

    def enqueue(self, mpdu: Mpdu, ac=None):
        ac = self._map(mpdu.header.ac if ac is None else ac)
        self.acs[ac].queue.append(mpdu)
        return ac

    def has_traffic(self) -> bool:
        return any(st.queue for st in self.acs.values())

    def cw_on_failure(self, ac) -> bool:
        """Double CW (capped).  Returns True when the head frame is dropped."""
        st = self.acs[self._map(ac)]
        st.retries += 1
        if self.retry_limit is not None and st.retries > self.retry_limit:
            if st.queue:
                st.queue.popleft()
            st.retries = 0
            st.cw = st.params.cw_min
            self._draw(st)
            return True
        st.cw = min(2 * st.cw + 1, st.params.cw_max)
        self._draw(st)
        return False

    def cw_on_success(self, ac):
        st = self.acs[self._map(ac)]
        st.retries = 0
        st.cw = st.params.cw_min
        self._draw(st)

    def medium_busy(self):
        """A busy slot: counters freeze and AIFS must be observed again."""
        for st in self.acs.values():
            st.aifs_remaining = st.params.aifs

    def slot_tick(self, busy: bool = False):
        """Advance one slot.  Returns the granted AC, if any.

        When several ACs expire together the highest priority wins and the
        others back off as after an external collision.
        """
        if busy:
            self.medium_busy()
            return None
        ready = []
        for ac, st in self.acs.items():
            if not st.queue:
                continue
            if st.aifs_remaining > 0:
                st.aifs_remaining -= 1
                if st.aifs_remaining == 0 and st.backoff == 0:
                    ready.append(ac)
            elif st.backoff > 0:
                st.backoff -= 1
                if st.backoff == 0:
                    ready.append(ac)
            else:
                ready.append(ac)
        if not ready:
            return None
        winner = max(ready)
        for ac in ready:
            if ac != winner:
                self.cw_on_failure(ac)
        return winner

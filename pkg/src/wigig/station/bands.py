"""Rate-versus-distance profiles per band and band/channel selection."""

from __future__ import annotations

from dataclasses import dataclass

from wigig.errors import InvalidParameter, NoLink
from wigig.station.fst import Channel


@dataclass(frozen=True)
class BandProfile:
    """``steps`` holds ``(max_distance_m, rate_bps, mcs)``; a step applies
    for distances strictly below its bound."""

    band: str
    channels: tuple
    steps: tuple

    def __post_init__(self):
        bounds = [s[0] for s in self.steps]
        rates = [s[1] for s in self.steps]
        if bounds != sorted(bounds) or any(b < a for a, b in zip(rates[1:], rates)):
            raise InvalidParameter(f"{self.band} profile must be a non-increasing step table")
        if not self.channels:
            raise InvalidParameter(f"{self.band} profile has no channels")

    @property
    def max_range(self) -> float:
        return self.steps[-1][0] if self.steps else 0.0

    def step_at(self, distance):
        for step in self.steps:
            if distance < step[0]:
                return step
        return None

    def rate_at(self, distance) -> float:
        step = self.step_at(distance)
        return 0.0 if step is None else step[1]


DEFAULT_PROFILES = (
    BandProfile("60GHz", (2, 1, 3, 4), ((3.0, 4.62e9, 12), (10.0, 1.54e9, 6))),
    BandProfile("5GHz", (4,), ((15.0, 433.3e6, None), (30.0, 200.0e6, None))),
    BandProfile("2.4GHz", (6,), ((100.0, 144.4e6, None),)),
)


@dataclass(frozen=True)
class BandChoice:
    channel: Channel
    rate: float
    mcs: int | None = None

    @property
    def band(self) -> str:
        return self.channel.band


def band_select(profiles=DEFAULT_PROFILES, distance: float = 1.0, congested=()) -> BandChoice:
    """Highest-rate feasible band; within a band the first uncongested channel."""
    congested = {(c.band, c.number) if isinstance(c, Channel) else tuple(c) for c in congested}
    best = None
    for prof in profiles:
        step = prof.step_at(distance)
        if step is None:
            continue
        free = [ch for ch in prof.channels if (prof.band, ch) not in congested]
        if not free:
            continue
        if best is None or step[1] > best.rate:
            best = BandChoice(Channel(prof.band, free[0]), step[1], step[2])
    if best is None:
        raise NoLink(f"no band reaches {distance} m")
    return best

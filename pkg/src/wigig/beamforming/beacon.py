"""BTI beacon sweeps and A-BFT slotted access."""

from __future__ import annotations

from dataclasses import dataclass

from wigig.errors import InvalidParameter


@dataclass(frozen=True)
class BeaconTx:
    bi: int
    sweep: int
    antenna: int
    sector: int
    cdown: int
    start_delay_us: float = 0.0


def sweep_order(n_sectors: int, sweep: int):
    """Sector order for one antenna; rotated every sweep so it changes across BIs."""
    shift = sweep % n_sectors
    return list(range(shift, n_sectors)) + list(range(shift))


def beacon_txss(sectors_per_antenna, beacons_per_bti: int, n_bi: int = 1, rng=None,
                max_start_delay_us: float = 0.0):
    """Plan beacon transmissions over ``n_bi`` beacon intervals.

    Each BTI carries beacons from a single antenna; a sweep that does not
    fit is fragmented over consecutive BIs and ``cdown`` keeps counting
    down across the fragments.  When only one beacon exists per sweep the
    PCP/AP waits for a random delay (uniform up to ``max_start_delay_us``).
    """
    sectors_per_antenna = [int(s) for s in sectors_per_antenna]
    if not sectors_per_antenna or min(sectors_per_antenna) < 1:
        raise InvalidParameter("every antenna needs at least one sector")
    if beacons_per_bti < 1:
        raise InvalidParameter("the BTI must fit at least one beacon")
    total = sum(sectors_per_antenna)

    # the fragments of one sweep, as lists of (antenna, sector)
    def fragments(sweep):
        out = []
        for ant, n in enumerate(sectors_per_antenna):
            order = [(ant, s) for s in sweep_order(n, sweep)]
            out += [order[i:i + beacons_per_bti] for i in range(0, n, beacons_per_bti)]
        return out

    plan, bi, sweep = [], 0, 0
    while bi < n_bi:
        sent = 0
        for frag in fragments(sweep):
            if bi >= n_bi:
                break
            delay = 0.0
            if total == 1 and rng is not None:
                delay = float(rng.uniform(0.0, max_start_delay_us))
            for ant, sec in frag:
                sent += 1
                plan.append(BeaconTx(bi, sweep, ant, sec, total - sent, delay))
            bi += 1
        sweep += 1
    return plan


@dataclass(frozen=True)
class AbftOutcome:
    station: str
    slot: int
    success: bool
    colliders: tuple = ()


def a_bft_access(stations, slot_count: int, rng):
    """Each station draws a slot uniformly; a slot with two or more stations fails for all.

    Successful stations complete RSS and SSW-Feedback; SSW-ACK is skipped.
    """
    if slot_count < 1:
        raise InvalidParameter("A-BFT needs at least one slot")
    stations = list(stations)
    picks = {s: int(rng.integers(0, slot_count)) for s in stations}
    by_slot = {}
    for s, slot in picks.items():
        by_slot.setdefault(slot, []).append(s)
    out = {}
    for s, slot in picks.items():
        others = tuple(o for o in by_slot[slot] if o != s)
        out[s] = AbftOutcome(s, slot, not others, others)
    return out


def abft_success_probability(n_stations: int, slot_count: int) -> float:
    """Exact probability that a given station is alone in its slot."""
    return ((slot_count - 1) / slot_count) ** (n_stations - 1)

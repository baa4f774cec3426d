"""A-MSDU, A-MPDU and A-PPDU construction and length accounting."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from wigig.errors import AggregationOverflow, InvalidParameter
from wigig.mac.frames import Mpdu
from wigig.phy.timing import appdu_duration_exact, ppdu_duration_exact

AMSDU_SUBFRAME_HEADER = 14   # DA, SA, length
AMPDU_DELIMITER = 4
MAX_AMSDU = 7935
MAX_AMPDU = 262143
MAX_AMPDU_SUBFRAMES = 64


def _pad4(n):
    return (-n) % 4


@dataclass(frozen=True)
class Msdu:
    da: str
    sa: str
    length: int
    up: int = 0
    tag: object = None


@dataclass(frozen=True)
class Amsdu:
    subframes: tuple

    @property
    def length(self) -> int:
        return _packed_length([AMSDU_SUBFRAME_HEADER + m.length for m in self.subframes])

    @property
    def overhead(self) -> int:
        return self.length - sum(m.length for m in self.subframes)


@dataclass(frozen=True)
class Ampdu:
    mpdus: tuple

    @property
    def length(self) -> int:
        return _packed_length([AMPDU_DELIMITER + m.length for m in self.mpdus])


@dataclass(frozen=True)
class Appdu:
    parts: tuple   # (mcs, psdu length) per PPDU

    def airtime(self) -> Fraction:
        return appdu_duration_exact(self.parts)

    def separate_airtime(self) -> Fraction:
        """Airtime of the same PPDUs sent individually (without IFS)."""
        return sum((ppdu_duration_exact(m, n) for m, n in self.parts), Fraction(0))


def _packed_length(sizes):
    # every subframe but the last is padded to a 4-octet boundary
    total = 0
    for i, s in enumerate(sizes):
        total += s if i == len(sizes) - 1 else s + _pad4(s)
    return total


def _admit(items, sizes, limit, max_count, what):
    admitted = []
    for i, item in enumerate(items):
        trial = sizes[:i + 1]
        if _packed_length(trial) > limit or len(trial) > max_count:
            raise AggregationOverflow(
                f"{what} limit exceeded at element {i} (limit {limit} octets / {max_count} elements)",
                admitted)
        admitted.append(item)
    return admitted


def build_amsdu(msdus, limit=MAX_AMSDU) -> Amsdu:
    msdus = list(msdus)
    if not msdus:
        raise InvalidParameter("nothing to aggregate")
    if len({m.da for m in msdus}) != 1:
        raise InvalidParameter("A-MSDU constituents must share the receiver")
    sizes = [AMSDU_SUBFRAME_HEADER + m.length for m in msdus]
    return Amsdu(tuple(_admit(msdus, sizes, limit, len(msdus), "A-MSDU")))


def build_ampdu(mpdus, limit=MAX_AMPDU, max_subframes=MAX_AMPDU_SUBFRAMES) -> Ampdu:
    mpdus = list(mpdus)
    if not mpdus:
        raise InvalidParameter("nothing to aggregate")
    if len({m.header.receiver for m in mpdus}) != 1:
        raise InvalidParameter("A-MPDU constituents must share the receiver")
    sizes = [AMPDU_DELIMITER + m.length for m in mpdus]
    return Ampdu(tuple(_admit(mpdus, sizes, limit, max_subframes, "A-MPDU")))


def build_appdu(parts) -> Appdu:
    parts = tuple((m, int(n)) for m, n in parts)
    if not parts:
        raise InvalidParameter("nothing to aggregate")
    return Appdu(parts)


def aggregate(items, kind, **limits):
    """Dispatch to :func:`build_amsdu`, :func:`build_ampdu` or :func:`build_appdu`."""
    builders = {"amsdu": build_amsdu, "ampdu": build_ampdu, "appdu": build_appdu}
    try:
        return builders[kind.lower().replace("-", "")](items, **limits)
    except KeyError:
        raise InvalidParameter(f"unknown aggregate kind {kind!r}") from None


def amsdu_to_mpdu(amsdu: Amsdu, header) -> Mpdu:
    return Mpdu(header, payload=amsdu.length)

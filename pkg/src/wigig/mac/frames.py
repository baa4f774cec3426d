"""MAC frame records, access categories and frame-size accounting."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from wigig.errors import InvalidParameter

MAC_HEADER_OCTETS = 26
FCS_OCTETS = 4
GCMP_HEADER_OCTETS = 8
MIC_OCTETS = 16
BROADCAST = "ff:ff:ff:ff:ff:ff"


class AccessCategory(enum.IntEnum):
    """Ordered by priority: ``BK < BE < VI < VO``."""
    BK = 0
    BE = 1
    VI = 2
    VO = 3


AC = AccessCategory

_UP_TO_AC = {1: AC.BK, 2: AC.BK, 0: AC.BE, 3: AC.BE, 4: AC.VI, 5: AC.VI, 6: AC.VO, 7: AC.VO}


def up_to_ac(up: int) -> AccessCategory:
    try:
        return _UP_TO_AC[int(up)]
    except KeyError:
        raise InvalidParameter(f"user priority must be 0-7, got {up}") from None


class AckPolicy(enum.Enum):
    NORMAL = "Normal"
    BLOCK_ACK = "BlockAck"
    NO_ACK = "NoAck"


class FrameType(str, enum.Enum):
    DATA = "DATA"
    ACK = "ACK"
    RTS = "RTS"
    DMG_CTS = "DMG_CTS"
    BAR = "BAR"
    BA = "BA"
    BEACON = "BEACON"
    SSW = "SSW"
    SSW_FB = "SSW_FB"
    SSW_ACK = "SSW_ACK"
    BRP = "BRP"
    ANNOUNCE = "ANNOUNCE"
    FST_SETUP_REQ = "FST_SETUP_REQ"
    FST_SETUP_RESP = "FST_SETUP_RESP"
    FST_ACK_REQ = "FST_ACK_REQ"
    FST_ACK_RESP = "FST_ACK_RESP"
    PS_CONFIG_REQ = "PS_CONFIG_REQ"


CONTROL_FRAME_OCTETS = {
    FrameType.ACK: 14,
    FrameType.RTS: 20,
    FrameType.DMG_CTS: 26,
    FrameType.BAR: 24,
    FrameType.BA: 32,
    FrameType.SSW: 26,
    FrameType.SSW_FB: 28,
    FrameType.SSW_ACK: 28,
    FrameType.BEACON: 64,
    FrameType.ANNOUNCE: 64,
}


@dataclass
class MacHeader:
    transmitter: str
    receiver: str
    destination: str | None = None
    duration: int = 0          # microseconds
    sequence: int = 0
    up: int = 0
    ack_policy: AckPolicy = AckPolicy.NORMAL
    frame_type: FrameType = FrameType.DATA

    def __post_init__(self):
        if self.duration < 0:
            raise InvalidParameter("duration must be non-negative")
        up_to_ac(self.up)
        if self.destination is None:
            self.destination = self.receiver

    @property
    def ac(self) -> AccessCategory:
        return up_to_ac(self.up)


@dataclass
class Mpdu:
    header: MacHeader
    payload: int = 0           # MSDU octets
    fcs_ok: bool = True
    encrypted: bool = False
    fixed_length: int | None = None    # control frames carry no MSDU
    tag: object = field(default=None, compare=False)

    @property
    def length(self) -> int:
        """Octets on air, including header, FCS and GCMP overhead."""
        if self.fixed_length is not None:
            return self.fixed_length
        n = MAC_HEADER_OCTETS + self.payload + FCS_OCTETS
        if self.encrypted:
            n += GCMP_HEADER_OCTETS + MIC_OCTETS
        return n


def control_frame(kind: FrameType, transmitter: str, receiver: str, duration: int = 0) -> Mpdu:
    """A control/management frame whose length comes from ``CONTROL_FRAME_OCTETS``."""
    hdr = MacHeader(transmitter, receiver, duration=duration, frame_type=kind,
                    ack_policy=AckPolicy.NO_ACK)
    return Mpdu(hdr, fixed_length=CONTROL_FRAME_OCTETS.get(kind, 32))

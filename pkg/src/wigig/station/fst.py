"""Fast session transfer between bands/channels."""

from __future__ import annotations

from dataclasses import dataclass, field

from wigig.errors import InvalidParameter, ProtocolViolation

IDLE = "idle"
SETUP = "setup"
SWITCH_PENDING = "switch_pending"
TRANSITIONED = "transitioned"
ACK_CONFIRMED = "ack_confirmed"

ACK_RETRY_LIMIT = 3


@dataclass(frozen=True)
class Channel:
    band: str        # "2.4GHz", "5GHz" or "60GHz"
    number: int

    def __str__(self):
        return f"{self.band}/ch{self.number}"


@dataclass
class FstSession:
    old: Channel
    new: Channel | None = None
    mac_old: str = "00:00:00:00:00:01"
    mac_new: str | None = None
    streams: set = field(default_factory=set)
    moved: set = field(default_factory=set)
    state: str = IDLE
    discovered: bool = True
    switch_time: int | None = None
    ack_retry_limit: int = ACK_RETRY_LIMIT
    log: list = field(default_factory=list)   # (event, channel)
    _attempts: int = field(default=0, repr=False)

    @property
    def transparent(self) -> bool:
        return self.mac_new is None or self.mac_new == self.mac_old

    def channel_of(self, stream) -> Channel:
        if stream not in self.streams:
            raise InvalidParameter(f"unknown stream {stream!r}")
        if stream in self.moved and self.state in (TRANSITIONED, ACK_CONFIRMED):
            return self.new
        return self.old

    # -- stepwise protocol -------------------------------------------------

    def request_setup(self, new: Channel, streams=None):
        if not self.discovered:
            raise ProtocolViolation("multi-band capability has not been discovered")
        if self.state not in (IDLE, SETUP, ACK_CONFIRMED):
            raise ProtocolViolation(f"FST setup in state {self.state}")
        if self.state == ACK_CONFIRMED:
            # the confirmed channel becomes the current one
            self.old, self.moved = self.new, set()
        self.new = new
        self.moved = set(self.streams if streams is None else streams)
        if not self.moved <= self.streams:
            raise InvalidParameter("cannot move streams the session does not carry")
        self.state = SETUP
        self.log.append(("setup_request", self.old))

    def respond_setup(self, switch_time: int):
        if self.state != SETUP:
            raise ProtocolViolation("setup response without a request")
        self.switch_time = switch_time
        self.state = SWITCH_PENDING
        self.log.append(("setup_response", self.old))

    def switch(self):
        if self.state != SWITCH_PENDING:
            raise ProtocolViolation("switch without an agreed setup")
        self.state = TRANSITIONED
        self.log.append(("switch", self.new))

    def ack_attempt(self, lost: bool) -> str:
        """One FST ACK request/response on the new channel.

        Returns ``"confirmed"``, ``"retry"`` or ``"rollback"``; after
        ``ack_retry_limit`` lost attempts the streams fall back to the old
        channel and the session returns to setup.
        """
        if self.state != TRANSITIONED:
            raise ProtocolViolation("FST ACK before the switch")
        self.log.append(("fst_ack_request", self.new))
        if not lost:
            self.log.append(("fst_ack_response", self.new))
            self.state = ACK_CONFIRMED
            self._attempts = 0
            return "confirmed"
        self.log.append(("fst_ack_timeout", self.new))
        self._attempts += 1
        if self._attempts < self.ack_retry_limit:
            return "retry"
        self._attempts = 0
        self.log.append(("rollback", self.old))
        self.state = SETUP
        return "rollback"

    def ack_exchange(self, lost_attempts) -> bool:
        """Run ACK attempts until confirmation or rollback; True when confirmed.

        ``lost_attempts`` yields one bool per attempt (True = lost); once it
        is exhausted attempts succeed.
        """
        it = iter(lost_attempts)
        while True:
            outcome = self.ack_attempt(next(it, False))
            if outcome != "retry":
                return outcome == "confirmed"


@dataclass(frozen=True)
class FstTrigger:
    new: Channel
    switch_time: int = 0
    streams: frozenset | None = None


def fst_run(session: FstSession, trigger: FstTrigger, ack_loss=()) -> FstSession:
    """Walk setup, switch and ACK confirmation for one trigger."""
    session.request_setup(trigger.new, trigger.streams)
    session.respond_setup(trigger.switch_time)
    session.switch()
    session.ack_exchange(ack_loss)
    return session

"""Block acknowledgement: recipient scoreboard and retransmission logic."""

from __future__ import annotations

from wigig.errors import ProtocolViolation

WINDOW = 64
SEQ_MOD = 4096


class BlockAckState:
    """Recipient scoreboard.  Bit ``i`` of the bitmap is sequence ``window_start + i``."""

    def __init__(self, window_start=0, window=WINDOW):
        self.window_start = window_start % SEQ_MOD
        self.window = window
        self.bitmap = 0
        self.reorder_buffer = {}

    def offset(self, seq) -> int:
        off = (seq - self.window_start) % SEQ_MOD
        if off >= self.window:
            raise ProtocolViolation(f"sequence {seq} is outside window starting at {self.window_start}")
        return off

    def record(self, seq, payload=None):
        self.bitmap |= 1 << self.offset(seq)
        self.reorder_buffer[seq % SEQ_MOD] = payload

    def received(self, seq) -> bool:
        return bool(self.bitmap >> self.offset(seq) & 1)

    def release_in_order(self):
        """Pop the in-order prefix and slide the window past it."""
        out = []
        while self.bitmap & 1:
            out.append((self.window_start, self.reorder_buffer.pop(self.window_start, None)))
            self.bitmap >>= 1
            self.window_start = (self.window_start + 1) % SEQ_MOD
        return out

    def advance_to(self, new_start):
        """Slide the window (block-ACK request starting sequence)."""
        shift = (new_start - self.window_start) % SEQ_MOD
        if shift >= SEQ_MOD // 2:
            return
        self.bitmap >>= shift
        for s in range(shift):
            self.reorder_buffer.pop((self.window_start + s) % SEQ_MOD, None)
        self.window_start = new_start % SEQ_MOD


def retransmission_set(window_start, bitmap, sent) -> set:
    """Sequences in ``sent`` whose bit in ``bitmap`` is clear."""
    out = set()
    for seq in sent:
        off = (seq - window_start) % SEQ_MOD
        if off >= WINDOW:
            raise ProtocolViolation(f"sequence {seq} was sent outside the block-ACK window")
        if not bitmap >> off & 1:
            out.add(seq)
    return out


def format_bitmap(bitmap, n) -> str:
    """First ``n`` bits, lowest sequence first."""
    return "".join("1" if bitmap >> i & 1 else "0" for i in range(n))


def block_ack_flow(sequences, lost, window_start=None):
    """One burst: returns ``(bitmap, retransmit set)`` given the lost sequences."""
    sequences = list(sequences)
    if len(sequences) > WINDOW:
        raise ProtocolViolation(f"burst of {len(sequences)} exceeds the {WINDOW}-frame window")
    start = sequences[0] if window_start is None and sequences else (window_start or 0)
    rx = BlockAckState(start)
    lost = set(lost)
    for seq in sequences:
        rx.offset(seq)
        if seq not in lost:
            rx.record(seq)
    return rx.bitmap, retransmission_set(start, rx.bitmap, sequences)


def deliver_with_retries(n_frames, loss_p, rng, max_rounds=10_000):
    """Send ``n_frames`` in windowed bursts until every frame is acknowledged.

    Returns the number of burst rounds used.
    """
    pending = list(range(n_frames))
    rounds = 0
    while pending:
        rounds += 1
        if rounds > max_rounds:
            raise RuntimeError("delivery did not complete")
        burst = [s for s in pending if s - pending[0] < WINDOW]
        lost = {s for s in burst if rng.random() < loss_p}
        _, retx = block_ack_flow(burst, lost, window_start=burst[0])
        pending = sorted(retx | set(pending[len(burst):]))
    return rounds

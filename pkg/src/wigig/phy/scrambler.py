"""Seven-bit LFSR scrambler (default polynomial x^7 + x^4 + 1).

The LFSR state is a 7-bit integer whose bit ``i-1`` holds register ``x_i``.
Each step emits ``x_7 XOR x_4`` and shifts that bit in.  Callers hold the
state; :func:`lfsr_advance` returns the state to continue from.
"""

from __future__ import annotations

import numpy as np

from wigig.errors import InvalidParameter

DEFAULT_TAPS = (7, 4)
ALL_ONES = 0x7F


def lfsr_advance(state: int, n: int, taps=DEFAULT_TAPS):
    """Emit ``n`` PN bits from ``state``; returns ``(bits, new_state)``."""
    state = int(state)
    if not 0 <= state <= ALL_ONES:
        raise InvalidParameter(f"scrambler state must be 7 bits, got {state}")
    hi, lo = (t - 1 for t in taps)
    out = np.empty(n, dtype=np.uint8)
    for i in range(n):
        fb = ((state >> hi) ^ (state >> lo)) & 1
        state = ((state << 1) | fb) & ALL_ONES
        out[i] = fb
    return out, state


def pn_sequence(seed: int, n: int, taps=DEFAULT_TAPS) -> np.ndarray:
    return lfsr_advance(seed, n, taps)[0]


def scramble_stream(bits, state: int, taps=DEFAULT_TAPS):
    """XOR ``bits`` with the PN stream from ``state``; returns ``(out, new_state)``."""
    bits = np.asarray(bits, dtype=np.uint8)
    pn, state = lfsr_advance(state, bits.size, taps)
    return bits ^ pn, state


def scramble(bits, seed: int, start_offset: int = 0, taps=DEFAULT_TAPS) -> np.ndarray:
    """Scramble ``bits[start_offset:]``; earlier bits pass through unchanged."""
    if seed == 0:
        raise InvalidParameter("an all-zero seed locks the LFSR")
    bits = np.asarray(bits, dtype=np.uint8)
    out = bits.copy()
    out[start_offset:], _ = scramble_stream(bits[start_offset:], seed, taps)
    return out

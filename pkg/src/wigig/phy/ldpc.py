"""Pluggable systematic LDPC code definitions.

The standard's parity-check matrices are not bundled.  :func:`surrogate_code`
builds a quasi-cyclic stand-in of the right shape (n = 672, lifting size 42)
whose parity-check matrix is ``H = [P | I]``; real matrices can be loaded
with :meth:`LdpcCodeDef.from_parity_check`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from wigig.errors import InvalidCode

LIFT = 42


@dataclass(frozen=True, eq=False)
class LdpcCodeDef:
    n: int
    k: int
    parity: np.ndarray = field(repr=False)  # (n - k, k) over GF(2)

    def __post_init__(self):
        if self.parity.shape != (self.n - self.k, self.k):
            raise InvalidCode(f"parity rule shape {self.parity.shape} does not fit n={self.n}, k={self.k}")

    @property
    def rate(self) -> Fraction:
        return Fraction(self.k, self.n)

    @property
    def parity_check(self) -> np.ndarray:
        return np.hstack([self.parity, np.eye(self.n - self.k, dtype=np.uint8)])

    def encode(self, info) -> np.ndarray:
        info = np.asarray(info, dtype=np.uint8)
        if info.size != self.k:
            raise InvalidCode(f"expected {self.k} information bits, got {info.size}")
        p = (self.parity.astype(np.int64) @ info.astype(np.int64)) & 1
        return np.concatenate([info, p.astype(np.uint8)])

    def syndrome(self, codeword) -> np.ndarray:
        c = np.asarray(codeword, dtype=np.int64)
        return ((self.parity_check.astype(np.int64) @ c) & 1).astype(np.uint8)

    def is_codeword(self, codeword) -> bool:
        return not self.syndrome(codeword).any()

    @classmethod
    def from_parity_check(cls, h) -> "LdpcCodeDef":
        """Derive the systematic rule from ``H = [H_i | H_p]`` with invertible ``H_p``."""
        h = np.asarray(h, dtype=np.uint8) & 1
        m, n = h.shape
        k = n - m
        hp_inv = _gf2_inverse(h[:, k:])
        parity = (hp_inv.astype(np.int64) @ h[:, :k].astype(np.int64)) & 1
        return cls(n, k, parity.astype(np.uint8))


def _gf2_inverse(a):
    a = a.copy()
    m = a.shape[0]
    inv = np.eye(m, dtype=np.uint8)
    for col in range(m):
        pivots = np.nonzero(a[col:, col])[0]
        if pivots.size == 0:
            raise InvalidCode("parity part of H is singular over GF(2)")
        p = col + pivots[0]
        if p != col:
            a[[col, p]] = a[[p, col]]
            inv[[col, p]] = inv[[p, col]]
        rows = np.nonzero(a[:, col])[0]
        rows = rows[rows != col]
        a[rows] ^= a[col]
        inv[rows] ^= inv[col]
    return inv


def _circulant(shift):
    return np.roll(np.eye(LIFT, dtype=np.uint8), shift, axis=1)


@lru_cache(maxsize=None)
def surrogate_code(rate, n=672) -> LdpcCodeDef:
    """Quasi-cyclic surrogate with block shift ``(3i + 7j + i*j) mod 42``."""
    rate = Fraction(rate)
    k = n * rate
    if k.denominator != 1 or n % LIFT or int(k) % LIFT:
        raise InvalidCode(f"rate {rate} does not lift to n={n}")
    mb, kb = (n - int(k)) // LIFT, int(k) // LIFT
    parity = np.block([[_circulant((3 * i + 7 * j + i * j) % LIFT) for j in range(kb)]
                       for i in range(mb)])
    parity.flags.writeable = False
    return LdpcCodeDef(n, int(k), parity)

"""Golay complementary pairs and the preamble fields built from them.

A pair is generated with the delay/weight recursion

    A_k(n) = W_k A_{k-1}(n) + B_{k-1}(n - D_k)
    B_k(n) = W_k A_{k-1}(n) - B_{k-1}(n - D_k)

starting from the unit impulse.  Any permutation of the delays
{1, 2, ..., 2**(m-1)} with any +/-1 weights yields a complementary pair of
length 2**m.  The concrete 128-sample sequences of the standard are not
bundled; a code-definition file can supply them (see
:func:`load_code_definition`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from wigig.errors import InvalidParameter

BLOCK = 128
DEFAULT_DELAYS = (64, 32, 16, 8, 4, 2, 1)
DEFAULT_WEIGHTS = (1, 1, 1, 1, 1, 1, 1)

STF = "STF"
CEF = "CEF"
TRN = "TRN"


def _frozen(a):
    a = np.asarray(a, dtype=np.int8).copy()
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class GolayPair:
    seq_a: np.ndarray
    seq_b: np.ndarray
    delays: tuple = ()
    weights: tuple = ()

    @property
    def length(self) -> int:
        return int(self.seq_a.size)

    def __eq__(self, other):
        if not isinstance(other, GolayPair):
            return NotImplemented
        return (np.array_equal(self.seq_a, other.seq_a)
                and np.array_equal(self.seq_b, other.seq_b))

    __hash__ = None


@dataclass(frozen=True, eq=False)
class PreambleField:
    kind: str
    samples: np.ndarray = field(repr=False)

    @property
    def sample_count(self) -> int:
        return int(self.samples.size)

    def blocks(self, size=BLOCK):
        """Split into consecutive ``size``-sample blocks."""
        if self.sample_count % size:
            raise InvalidParameter(f"{self.sample_count} samples do not split into {size}-blocks")
        return self.samples.reshape(-1, size)


def _check_delays(delays, weights):
    if len(delays) != len(weights):
        raise InvalidParameter("delays and weights must have equal length")
    if any(int(w) not in (1, -1) for w in weights):
        raise InvalidParameter("weights must be +1 or -1")
    m = len(delays)
    if sorted(int(d) for d in delays) != [1 << i for i in range(m)]:
        raise InvalidParameter(
            f"delays must be distinct powers of two covering 1..{1 << max(m - 1, 0)}, got {list(delays)}")


def generate_golay_pair(delays=DEFAULT_DELAYS, weights=DEFAULT_WEIGHTS) -> GolayPair:
    """Build a complementary pair of length ``2**len(delays)``."""
    delays = tuple(int(d) for d in delays)
    weights = tuple(int(w) for w in weights)
    _check_delays(delays, weights)
    n = 1 << len(delays)
    a = np.zeros(n, dtype=np.int64)
    b = np.zeros(n, dtype=np.int64)
    a[0] = b[0] = 1
    for d, w in zip(delays, weights):
        shifted = np.zeros(n, dtype=np.int64)
        shifted[d:] = b[:n - d]
        a, b = w * a + shifted, w * a - shifted
    return GolayPair(_frozen(a), _frozen(b), delays, weights)


def autocorr_sum(pair: GolayPair) -> np.ndarray:
    """Sum of the aperiodic autocorrelations of both sequences, lags 0..N-1."""
    n = pair.length
    a = pair.seq_a.astype(np.int64)
    b = pair.seq_b.astype(np.int64)
    return (np.correlate(a, a, "full") + np.correlate(b, b, "full"))[n - 1:]


def _require_128(pair):
    if pair.length != BLOCK:
        raise InvalidParameter(f"expected a {BLOCK}-sample pair, got length {pair.length}")


def compose_gu512(pair128: GolayPair) -> PreambleField:
    _require_128(pair128)
    ga, gb = pair128.seq_a, pair128.seq_b
    return PreambleField(CEF, _frozen(np.concatenate([-gb, -ga, gb, ga])))


def compose_gv512(pair128: GolayPair) -> PreambleField:
    _require_128(pair128)
    ga, gb = pair128.seq_a, pair128.seq_b
    return PreambleField(CEF, _frozen(np.concatenate([-gb, ga, -gb, -ga])))


def gv128(pair128: GolayPair, block=3) -> np.ndarray:
    """Gv128 as one 128-sample block of Gv512 (the last one by default)."""
    if not 0 <= block < 4:
        raise InvalidParameter("Gv512 has four blocks")
    return compose_gv512(pair128).blocks()[block]


def build_control_stf(pair128: GolayPair) -> PreambleField:
    """48 copies of Gb128 followed by one -Gb128 (6272 samples)."""
    _require_128(pair128)
    gb = pair128.seq_b
    return PreambleField(STF, _frozen(np.concatenate([np.tile(gb, 48), -gb])))


def build_stf(pair128: GolayPair, repeats=16) -> PreambleField:
    """SC/OFDM short training field: ``repeats`` x Ga128 then -Ga128."""
    _require_128(pair128)
    ga = pair128.seq_a
    return PreambleField(STF, _frozen(np.concatenate([np.tile(ga, repeats), -ga])))


def build_cef(pair128: GolayPair, gv_block=3) -> PreambleField:
    """Gu512 || Gv512 || Gv128, 1152 samples (nine 128-blocks)."""
    samples = np.concatenate([compose_gu512(pair128).samples,
                              compose_gv512(pair128).samples,
                              gv128(pair128, gv_block)])
    return PreambleField(CEF, _frozen(samples))


def build_trn_unit(pair128: GolayPair, subfields=4) -> PreambleField:
    """One training unit: a CEF followed by ``subfields`` [Ga -Gb Ga Gb] groups."""
    _require_128(pair128)
    ga, gb = pair128.seq_a, pair128.seq_b
    sub = np.concatenate([ga, -gb, ga, gb])
    samples = np.concatenate([build_cef(pair128).samples, np.tile(sub, subfields)])
    return PreambleField(TRN, _frozen(samples))


def parse_code_definition(text: str):
    """Parse ``delays=``/``weights=`` lines; ``#`` starts a comment."""
    values = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise InvalidParameter(f"malformed line: {raw!r}")
        key = key.strip()
        if key not in ("delays", "weights"):
            raise InvalidParameter(f"unknown key {key!r}")
        items = [v.strip().replace("−", "-") for v in value.split(",") if v.strip()]
        try:
            values[key] = tuple(int(v) for v in items)
        except ValueError as exc:
            raise InvalidParameter(f"bad integer in {key}: {value!r}") from exc
    if set(values) != {"delays", "weights"}:
        raise InvalidParameter("code definition needs both delays= and weights=")
    return values["delays"], values["weights"]


def load_code_definition(path=None):
    """Read a code-definition file; ``None`` loads the shipped default."""
    if path is None:
        text = resources.files("wigig.data").joinpath("golay_default.txt").read_text()
    else:
        text = Path(path).read_text()
    return parse_code_definition(text)


def default_pair() -> GolayPair:
    return generate_golay_pair(*load_code_definition())

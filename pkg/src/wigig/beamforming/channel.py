"""Synthetic per-sector gain table between two stations."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from wigig.errors import InvalidParameter

MAX_ANTENNAS = 4
MAX_SECTORS = 128
QUASI_OMNI_OFFSET_DB = 10.0

CSV_COLUMNS = ("tx_ant", "tx_sector", "rx_ant", "rx_sector", "gain_db")


@dataclass(frozen=True, eq=False)
class SectorChannel:
    """Link SNR in dB for every (tx antenna, tx sector, rx antenna, rx sector).

    A quasi-omni pattern on either side is modelled as the best directional
    gain for the same antenna pair minus ``quasi_omni_offset_db``.
    ``noise_std_db`` adds Gaussian measurement noise when an ``rng`` is
    passed to :meth:`measure`.
    """

    gain_db: np.ndarray = field(repr=False)
    quasi_omni_offset_db: float = QUASI_OMNI_OFFSET_DB
    noise_std_db: float = 0.0

    def __post_init__(self):
        g = np.asarray(self.gain_db, dtype=float)
        if g.ndim != 4:
            raise InvalidParameter("gain table must be (tx_ant, tx_sector, rx_ant, rx_sector)")
        n_ta, n_ts, n_ra, n_rs = g.shape
        if min(g.shape) < 1:
            raise InvalidParameter("gain table has an empty dimension")
        if n_ta > MAX_ANTENNAS or n_ra > MAX_ANTENNAS:
            raise InvalidParameter(f"at most {MAX_ANTENNAS} antennas per side")
        if n_ta * n_ts > MAX_SECTORS or n_ra * n_rs > MAX_SECTORS:
            raise InvalidParameter(f"at most {MAX_SECTORS} sectors per side")
        if not np.all(np.isfinite(g)):
            raise InvalidParameter("gain table must be finite")
        g.flags.writeable = False
        object.__setattr__(self, "gain_db", g)

    @property
    def n_tx_antennas(self) -> int:
        return self.gain_db.shape[0]

    @property
    def n_tx_sectors(self) -> int:
        """Sectors per transmit antenna."""
        return self.gain_db.shape[1]

    @property
    def n_rx_antennas(self) -> int:
        return self.gain_db.shape[2]

    @property
    def n_rx_sectors(self) -> int:
        return self.gain_db.shape[3]

    @property
    def total_tx_sectors(self) -> int:
        return self.n_tx_antennas * self.n_tx_sectors

    @property
    def total_rx_sectors(self) -> int:
        return self.n_rx_antennas * self.n_rx_sectors

    def snr(self, tx_ant, tx_sector, rx_ant, rx_sector) -> float:
        return float(self.gain_db[tx_ant, tx_sector, rx_ant, rx_sector])

    def rx_quasi_omni(self) -> np.ndarray:
        """(tx_ant, tx_sector, rx_ant) SNR with the receiver in quasi-omni mode."""
        return self.gain_db.max(axis=3) - self.quasi_omni_offset_db

    def tx_quasi_omni(self) -> np.ndarray:
        """(tx_ant, rx_ant, rx_sector) SNR with the transmitter in quasi-omni mode."""
        return self.gain_db.max(axis=1) - self.quasi_omni_offset_db

    def measure(self, values, rng=None):
        values = np.asarray(values, dtype=float)
        if rng is None or self.noise_std_db == 0:
            return values
        return values + rng.normal(0.0, self.noise_std_db, size=values.shape)

    def reverse(self) -> "SectorChannel":
        """The reciprocal channel (roles of the two stations swapped)."""
        return SectorChannel(np.transpose(self.gain_db, (2, 3, 0, 1)),
                             self.quasi_omni_offset_db, self.noise_std_db)

    def global_argmax(self):
        """Best (tx_ant, tx_sector, rx_ant, rx_sector), lowest index on ties."""
        return tuple(int(i) for i in np.unravel_index(np.argmax(self.gain_db), self.gain_db.shape))

    @classmethod
    def random(cls, rng, n_tx_antennas=1, n_tx_sectors=8, n_rx_antennas=1, n_rx_sectors=8,
               mean_db=10.0, spread_db=8.0, **kwargs) -> "SectorChannel":
        shape = (n_tx_antennas, n_tx_sectors, n_rx_antennas, n_rx_sectors)
        return cls(mean_db + spread_db * rng.standard_normal(shape), **kwargs)

    @classmethod
    def from_csv(cls, path, **kwargs) -> "SectorChannel":
        with open(path, newline="") as fh:
            return cls.from_rows(csv.DictReader(fh), **kwargs)

    @classmethod
    def from_rows(cls, rows, **kwargs) -> "SectorChannel":
        entries = []
        for row in rows:
            try:
                key = tuple(int(row[c]) for c in CSV_COLUMNS[:4])
                entries.append((key, float(row["gain_db"])))
            except (KeyError, ValueError) as exc:
                raise InvalidParameter(f"bad channel row {row!r}") from exc
        if not entries:
            raise InvalidParameter("channel file has no rows")
        shape = tuple(max(k[i] for k, _ in entries) + 1 for i in range(4))
        g = np.full(shape, np.nan)
        for key, value in entries:
            g[key] = value
        if np.isnan(g).any():
            raise InvalidParameter("channel file does not cover every sector combination")
        return cls(g, **kwargs)

    def to_csv(self, path):
        with open(Path(path), "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_COLUMNS)
            for idx in np.ndindex(self.gain_db.shape):
                w.writerow([*idx, repr(float(self.gain_db[idx]))])

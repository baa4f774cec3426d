"""Threshold reception model: a frame at MCS m succeeds iff SNR >= threshold(m)."""

from __future__ import annotations

from wigig.errors import InvalidParameter

# dB; non-decreasing in MCS index within each PHY
DEFAULT_SNR_THRESHOLDS = {
    0: -6.0,
    1: 1.0, 2: 3.0, 3: 4.0, 4: 5.0, 5: 6.0, 6: 7.0,
    7: 8.0, 8: 9.5, 9: 11.0, 10: 14.0, 11: 16.0, 12: 18.0,
    13: 2.0, 14: 3.5, 15: 5.0, 16: 6.5, 17: 8.0, 18: 11.0,
    19: 12.5, 20: 14.5, 21: 16.0, 22: 18.5, 23: 20.5, 24: 22.0,
}


def check_thresholds(thresholds) -> list[str]:
    errors = []
    for lo, hi in ((1, 12), (13, 24)):
        seq = [thresholds[i] for i in range(lo, hi + 1) if i in thresholds]
        if any(b < a for a, b in zip(seq, seq[1:])):
            errors.append(f"SNR thresholds for MCS {lo}-{hi} are not monotone")
    return errors


def frame_succeeds(snr_db: float, mcs: int, thresholds=None) -> bool:
    thresholds = thresholds or DEFAULT_SNR_THRESHOLDS
    try:
        return snr_db >= thresholds[int(mcs)]
    except KeyError:
        raise InvalidParameter(f"no SNR threshold for MCS {mcs}") from None


def best_sc_mcs(snr_db: float, thresholds=None):
    """Highest SC MCS (1-12) the link supports, or ``None``."""
    thresholds = thresholds or DEFAULT_SNR_THRESHOLDS
    ok = [m for m in range(1, 13) if snr_db >= thresholds[m]]
    return max(ok) if ok else None

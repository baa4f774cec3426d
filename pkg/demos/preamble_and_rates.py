"""Build the Golay pair, check it, and lay out the preamble and rate table."""

import numpy as np

from wigig import golay
from wigig.phy import derived_data_rate, mcs_lookup, ppdu_duration_ns


def main():
    pair = golay.default_pair()
    s = golay.autocorr_sum(pair)
    print(f"Ga/Gb length {pair.length}: autocorr sum peak {s[0]}, sidelobes zero: {not s[1:].any()}")

    for name, field in [("control STF", golay.build_control_stf(pair)),
                        ("SC STF", golay.build_stf(pair)),
                        ("CEF", golay.build_cef(pair)),
                        ("TRN unit", golay.build_trn_unit(pair))]:
        print(f"{name:12s} {field.sample_count:5d} samples = {len(field.blocks()):2d} blocks")

    print("\nMCS  table Mbit/s  derived Mbit/s")
    for idx in range(25):
        m = mcs_lookup(idx)
        d = derived_data_rate(m)
        flag = "" if np.isclose(d, m.data_rate, rtol=1e-4) else "  <- table differs"
        print(f"{idx:3d}  {m.data_rate / 1e6:12.2f}  {d / 1e6:14.2f}{flag}")

    print("\nairtime of a 1500-octet PSDU:")
    for idx in (0, 1, 6, 12, 24):
        print(f"  MCS {idx:2d}: {ppdu_duration_ns(idx, 1500) / 1e3:8.2f} us")


if __name__ == "__main__":
    main()

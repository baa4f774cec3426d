"""Normal ACK vs A-MPDU throughput over packet size, checked against the simulator."""

import numpy as np

from wigig.sim import parse_scenario
from wigig.throughput import (asymptote, curve, default_sizes, sim_vs_model, throughput_ampdu,
                              throughput_normal_ack)

SP = """
sim.duration_us = 20000
bi.duration_us = 1000
bi.bti_us = 100
station.ap.role = pcp
station.sta.role = sta
alloc.sp.kind = SP
alloc.sp.source = ap
alloc.sp.destination = sta
alloc.sp.start_us = 100
alloc.sp.duration_us = 900
flow.f.src = ap
flow.f.dst = sta
flow.f.alloc = sp
flow.f.mcs = 12
flow.f.payload = 1500
flow.f.policy = ampdu
flow.f.subframes = 16
"""


def main():
    sizes = default_sizes()
    print("Mbit/s by total payload, one MPDU per exchange")
    print("octets     " + "  ".join(f"MCS {m:<6d}" for m in (1, 4, 8, 12)))
    table = np.column_stack([curve(m, sizes, "ack") for m in (1, 4, 8, 12)])
    for s, row in zip(sizes, table):
        print(f"{s:7d}  " + "  ".join(f"{v / 1e6:10.1f}" for v in row))
    print("PHY rates: " + ", ".join(f"MCS {m} {asymptote(m) / 1e6:.1f}" for m in (1, 4, 8, 12)))

    print("\nMCS 12, the same 64 MPDUs sent one by one vs as one aggregate")
    for s in (256, 1500, 4096):
        ack, agg = throughput_normal_ack(12, s), throughput_ampdu(12, s, 64)
        print(f"  {s:5d}-octet MPDUs: {ack / 1e6:7.1f} vs {agg / 1e6:7.1f} Mbit/s")

    out = sim_vs_model(parse_scenario(SP))
    print(f"\nsimulated SP link {out['sim'] / 1e6:.3f} Mbit/s, model {out['model'] / 1e6:.3f}, "
          f"relative error {out['rel_error']:.1e}")


if __name__ == "__main__":
    main()

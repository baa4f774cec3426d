"""Why 60 GHz needs directional antennas: omni capacity vs gain."""

from wigig import link


def main():
    base = link.LinkParams()
    delta = link.path_loss(60e9, base.dist) - link.path_loss(5e9, base.dist)
    print(f"extra free-space loss going from 5 to 60 GHz: {delta:.2f} dB")
    print(f"omni link at {base.dist:g} m: SNR {link.snr_db(base):.1f} dB, "
          f"capacity {link.shannon_capacity(base) / 1e9:.3f} Gbit/s")

    need = link.required_gain(1e9, base)
    print(f"combined antenna gain for 1 Gbit/s: {need:.1f} dB")

    print("\np_t dBm  capacity Gbit/s (omni, then 10+10 dBi)")
    for pt in (0, 10, 20, 30):
        omni = link.shannon_capacity(link.LinkParams(p_t=pt))
        direct = link.shannon_capacity(link.LinkParams(p_t=pt, g_t=10, g_r=10))
        print(f"{pt:7d}  {omni / 1e9:6.3f}  {direct / 1e9:6.3f}")


if __name__ == "__main__":
    main()

"""Walk two stations together and watch the video stream hop from 2.4 to 60 GHz."""

from dataclasses import replace

from wigig.sim import load_scenario, run


def show(sc, label):
    m = run(sc).metrics
    print(f"-- {label}")
    for t, event, band, ch in m.fst_log:
        print(f"  {t / 1e9:8.4f} s  {event:15s} {band} ch{ch}")
    f = m.flows["video"]
    print(f"  offered {f.offered}, delivered {f.delivered}, dropped {f.dropped}")


def main():
    sc = load_scenario("walk_fst")
    show(sc, "one FST ACK lost")
    show(replace(sc, fst=replace(sc.fst, ack_loss=(True, True, True))), "three FST ACKs lost")


if __name__ == "__main__":
    main()

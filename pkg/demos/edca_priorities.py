"""Four saturated access categories contending in one CBAP."""

from wigig.mac import DEFAULT_EDCA, cw_after_failures
from wigig.sim import run


def main():
    print("CW after j failures:")
    for ac, p in DEFAULT_EDCA.items():
        print(f"  {ac.name}: " + " ".join(str(cw_after_failures(p.cw_min, p.cw_max, j)) for j in range(7)))

    m = run("edca_4ac").metrics
    print(f"\n{m.total_grants()} channel grants in {m.duration_ns / 1e6:.0f} ms")
    for ac, d in sorted(m.median_delay_by_ac().items(), key=lambda kv: kv[1]):
        print(f"  {ac}: median access delay {d / 1e3:10.1f} us")


if __name__ == "__main__":
    main()

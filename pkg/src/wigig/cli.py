"""Command-line entry point: ``wigig <group> <command> [options]``.

Exit codes: 0 success, 1 invalid input or scenario, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from wigig import golay, link, throughput
from wigig.errors import InvalidParameter, ScenarioError, WigigError

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2


def _ints(text):
    return [int(x) for x in text.split(",") if x.strip()]


def _range(text, integer=True):
    """``a:b:step`` inclusive, or a comma list."""
    conv = int if integer else float
    if ":" in text:
        parts = [conv(x) for x in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0:
            raise InvalidParameter(f"range {text!r} must be a:b:step with step > 0")
        lo, hi, step = parts
        return list(np.arange(lo, hi + step / 2, step).astype(int if integer else float))
    return [conv(x) for x in text.split(",") if x.strip()]


def _writer():
    return csv.writer(sys.stdout, lineterminator="\n")


# -- golay -------------------------------------------------------------------

def cmd_golay_dump(args):
    if args.definition:
        delays, weights = golay.load_code_definition(args.definition)
    elif args.delays:
        delays = _ints(args.delays)
        weights = _ints(args.weights) if args.weights else [1] * len(delays)
    else:
        delays, weights = golay.load_code_definition()
    pair = golay.generate_golay_pair(delays, weights)
    fields = {
        "a": lambda: pair.seq_a,
        "b": lambda: pair.seq_b,
        "gu512": lambda: golay.compose_gu512(pair).samples,
        "gv512": lambda: golay.compose_gv512(pair).samples,
        "stf": lambda: golay.build_stf(pair).samples,
        "control-stf": lambda: golay.build_control_stf(pair).samples,
        "cef": lambda: golay.build_cef(pair).samples,
        "trn": lambda: golay.build_trn_unit(pair).samples,
    }
    sys.stdout.write("".join(f"{int(v)}\n" for v in fields[args.field]()))
    if args.check:
        s = golay.autocorr_sum(pair)
        ok = s[0] == 2 * pair.length and not np.any(s[1:])
        print(f"# complementary: {bool(ok)}", file=sys.stderr)
    return EXIT_OK


# -- phy ---------------------------------------------------------------------

def cmd_phy_rates(args):
    from wigig.phy.mcs import MCS_TABLE, derived_data_rate
    w = _writer()
    w.writerow(["index", "phy", "modulation", "code_rate", "repetition", "rate_mbps",
                "derived_rate_mbps"])
    for idx, p in sorted(MCS_TABLE.items()):
        d = derived_data_rate(p)
        w.writerow([idx, p.phy_kind, p.modulation, str(p.code_rate), p.repetition,
                    f"{p.data_rate / 1e6:.2f}", "" if d is None else f"{d / 1e6:.2f}"])
    return EXIT_OK


def cmd_phy_encode(args):
    from wigig.phy.data import bits_to_octets, encode_data, plan_data_encoding
    from wigig.phy.header import PlcpHeader, encode_header
    if args.infile:
        psdu = Path(args.infile).read_bytes()
        if args.length is not None:
            psdu = psdu[:args.length].ljust(args.length, b"\0")
    elif args.length is not None:
        psdu = bytes(args.length)
    else:
        raise InvalidParameter("give --len or --in")
    hdr = PlcpHeader(mcs=args.mcs, length=len(psdu), scrambler_init=args.seed)
    header_bits = encode_header(hdr)
    data_bits = encode_data(psdu, args.mcs, seed=args.seed)
    if args.outfile:
        Path(args.outfile).write_bytes(bits_to_octets(np.concatenate([header_bits, data_bits])))
    p = plan_data_encoding(len(psdu), args.mcs)
    print(f"header_bits={header_bits.size} data_bits={data_bits.size} n_cw={p.n_cw} "
          f"l_cwd={p.l_cwd} n_data_pad={p.n_data_pad} n_blk={p.n_blk} n_blkpad={p.n_blkpad}")
    return EXIT_OK


def cmd_phy_duration(args):
    from wigig.phy.timing import (header_time, payload_time, ppdu_duration_ns, preamble_time,
                                  to_ns, trn_time)
    if args.breakdown:
        print(f"preamble_ns={to_ns(preamble_time(args.mcs))}")
        print(f"header_ns={to_ns(header_time(args.mcs))}")
        print(f"payload_ns={to_ns(payload_time(args.mcs, args.length))}")
        print(f"trn_ns={to_ns(trn_time(args.trn))}")
    print(ppdu_duration_ns(args.mcs, args.length, args.trn))
    return EXIT_OK


# -- link --------------------------------------------------------------------

def _link_params(args, **override):
    kw = dict(p_t=args.p_t, g_t=args.g_t, g_r=args.g_r, freq=args.freq, dist=args.dist,
              bandwidth=args.bandwidth, noise_figure=args.nf, shadow_margin=args.shadow)
    kw.update(override)
    return link.LinkParams(**kw)


def cmd_link_capacity(args):
    p = _link_params(args)
    print(f"path_loss_db={link.path_loss(p.freq, p.dist):.2f}")
    print(f"rx_power_dbm={link.received_power(p):.2f}")
    print(f"noise_floor_dbm={link.noise_floor(p):.2f}")
    print(f"snr_db={link.snr_db(p):.2f}")
    print(f"capacity_gbps={link.shannon_capacity(p) / 1e9:.4f}")
    if args.target:
        print(f"required_gain_db={link.required_gain(args.target, p):.2f}")
    return EXIT_OK


def cmd_link_sweep(args):
    p = _link_params(args)
    w = _writer()
    w.writerow(["p_t_dbm", "rx_power_dbm", "snr_db", "capacity_gbps"])
    for pt, rx, snr, cap in link.capacity_sweep(p, _range(args.p_t_range, integer=False)):
        w.writerow([f"{pt:g}", f"{rx:.2f}", f"{snr:.2f}", f"{cap / 1e9:.4f}"])
    return EXIT_OK


# -- beamforming ----------------------------------------------------------------

def cmd_bf_sls(args):
    from wigig.beamforming import BrpState, SectorChannel, brp_setup, brp_transaction, run_sls
    from wigig.beamforming.refine import RX_REFINE
    if args.channel:
        ch = SectorChannel.from_csv(args.channel)
    else:
        rng = np.random.default_rng(args.seed)
        ch = SectorChannel.random(rng, args.tx_antennas, args.tx_sectors, args.rx_antennas,
                                  args.rx_sectors)
    res = run_sls(ch)
    i, r = res.initiator, res.responder
    print(f"initiator_sector=ant{i.antenna}/sec{i.sector} snr_db={i.snr_db:.2f}")
    print(f"responder_sector=ant{r.antenna}/sec{r.sector} snr_db={r.snr_db:.2f}")
    print(f"messages={res.message_count}")
    if args.brp:
        state = brp_setup(BrpState(), run_mid=False, run_bc=False)
        out = brp_transaction(state, RX_REFINE, ch, res)
        print(f"brp_pair=ant{i.antenna}/sec{i.sector}->ant{out.antenna}/sec{out.sector} "
              f"snr_db={out.snr_db:.2f}")
    return EXIT_OK


# -- throughput ------------------------------------------------------------------

def cmd_tput_curve(args):
    sizes = _range(args.sizes) if args.sizes else list(throughput.default_sizes())
    values = throughput.curve(args.mcs, sizes, args.policy, args.subframes)
    w = _writer()
    w.writerow(["size_octets", "throughput_mbps"])
    for s, v in zip(sizes, values):
        w.writerow([int(s), f"{v / 1e6:.3f}"])
    return EXIT_OK


# -- simulator -------------------------------------------------------------------

def _load(path):
    from wigig.sim.scenario import load_scenario
    return load_scenario(path)


def cmd_sim_validate(args):
    from wigig.sim.scenario import validate
    errors = validate(_load(args.scenario))
    if errors:
        for e in errors:
            print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    print("ok")
    return EXIT_OK


def cmd_sim_run(args):
    from wigig.sim.kernel import run
    from wigig.sim.metrics import report
    from wigig.sim.scenario import validate
    sc = _load(args.scenario)
    errors = validate(sc)
    if errors:
        for e in errors:
            print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    result = run(sc, seed=args.seed)
    if args.trace:
        Path(args.trace).write_text(result.trace_csv())
    if args.metrics:
        Path(args.metrics).write_text(report(result.metrics, "csv"))
    sys.stdout.write(report(result.metrics, args.format))
    return EXIT_OK


def cmd_sim_list(args):
    from wigig.sim.scenario import shipped_scenarios
    for name in shipped_scenarios():
        print(name)
    return EXIT_OK


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wigig", description="60 GHz WLAN PHY/MAC toolkit and simulator")
    groups = ap.add_subparsers(dest="group", required=True)

    g = groups.add_parser("golay", help="Golay sequences and preamble fields")
    gs = g.add_subparsers(dest="command", required=True)
    p = gs.add_parser("dump", help="print a sequence or preamble field, one sample per line")
    p.add_argument("--field", default="a",
                   choices=["a", "b", "gu512", "gv512", "stf", "control-stf", "cef", "trn"])
    p.add_argument("--definition", help="code definition file (delays=..., weights=...)")
    p.add_argument("--delays", help="comma-separated delay vector")
    p.add_argument("--weights", help="comma-separated +1/-1 weights")
    p.add_argument("--check", action="store_true", help="report complementarity on stderr")
    p.set_defaults(func=cmd_golay_dump)

    g = groups.add_parser("phy", help="MCS table, header/data encoding, airtime")
    gs = g.add_subparsers(dest="command", required=True)
    p = gs.add_parser("rates", help="MCS table with derived data rates")
    p.set_defaults(func=cmd_phy_rates)
    p = gs.add_parser("encode", help="encode header and data fields to packed octets")
    p.add_argument("--mcs", type=int, required=True)
    p.add_argument("--len", "--length", dest="length", type=int, help="PSDU octets")
    p.add_argument("--in", dest="infile", help="PSDU file (zeros when omitted)")
    p.add_argument("--out", dest="outfile", help="write header+data coded bits, packed LSB first")
    p.add_argument("--seed", type=lambda s: int(s, 0), default=0x5D, help="scrambler seed")
    p.set_defaults(func=cmd_phy_encode)
    p = gs.add_parser("duration", help="PPDU airtime in nanoseconds")
    p.add_argument("--mcs", type=int, required=True)
    p.add_argument("--len", "--length", dest="length", type=int, required=True)
    p.add_argument("--trn", type=int, default=0, help="number of TRN units")
    p.add_argument("--breakdown", action="store_true", help="also print per-field times")
    p.set_defaults(func=cmd_phy_duration)

    g = groups.add_parser("link", help="free-space link budget")
    gs = g.add_subparsers(dest="command", required=True)
    for name, func in (("capacity", cmd_link_capacity), ("sweep", cmd_link_sweep)):
        p = gs.add_parser(name)
        p.add_argument("--g-t", type=float, default=0.0)
        p.add_argument("--g-r", type=float, default=0.0)
        p.add_argument("--freq", type=float, default=60e9)
        p.add_argument("--dist", type=float, default=10.0)
        p.add_argument("--bandwidth", type=float, default=2e9)
        p.add_argument("--nf", type=float, default=10.0)
        p.add_argument("--shadow", type=float, default=6.0)
        if name == "capacity":
            p.add_argument("--p-t", type=float, default=10.0)
            p.add_argument("--target", type=float, help="rate (bit/s) for the required-gain figure")
        else:
            p.add_argument("--p-t", dest="p_t_range", default="0:30:5", help="a:b:step dBm")
            p.set_defaults(p_t=10.0)
        p.set_defaults(func=func)

    g = groups.add_parser("bf", help="beamforming")
    gs = g.add_subparsers(dest="command", required=True)
    p = gs.add_parser("sls", help="run a sector-level sweep on a channel")
    p.add_argument("--channel", help="sector-gain CSV")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tx-antennas", type=int, default=1)
    p.add_argument("--tx-sectors", type=int, default=8)
    p.add_argument("--rx-antennas", type=int, default=1)
    p.add_argument("--rx-sectors", type=int, default=8)
    p.add_argument("--brp", action="store_true", help="follow with receive-sector refinement")
    p.set_defaults(func=cmd_bf_sls)

    g = groups.add_parser("tput", help="analytic MAC throughput")
    gs = g.add_subparsers(dest="command", required=True)
    p = gs.add_parser("curve", help="throughput versus packet size as CSV")
    p.add_argument("--mcs", type=int, required=True)
    p.add_argument("--policy", choices=["ack", "ampdu"], default="ack")
    p.add_argument("--sizes", help="a:b:step or comma list (default 256..262144, log spaced)")
    p.add_argument("--subframes", type=int, default=64)
    p.set_defaults(func=cmd_tput_curve)

    g = groups.add_parser("sim", help="discrete-event simulator")
    gs = g.add_subparsers(dest="command", required=True)
    p = gs.add_parser("run", help="run a scenario")
    p.add_argument("--scenario", required=True, help="scenario file or shipped scenario name")
    p.add_argument("--seed", type=int)
    p.add_argument("--trace", help="write the event trace CSV here")
    p.add_argument("--metrics", help="write the metrics CSV here")
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.set_defaults(func=cmd_sim_run)
    p = gs.add_parser("validate", help="check a scenario without running it")
    p.add_argument("--scenario", required=True)
    p.set_defaults(func=cmd_sim_validate)
    p = gs.add_parser("list", help="list shipped scenarios")
    p.set_defaults(func=cmd_sim_list)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # bad usage is invalid input, not a runtime failure
        return EXIT_OK if exc.code in (0, None) else EXIT_INVALID
    try:
        return args.func(args)
    except ScenarioError as exc:
        for e in exc.errors:
            print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (InvalidParameter, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (WigigError, OSError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())

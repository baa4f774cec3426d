import csv
import io

import numpy as np
import pytest

from wigig import golay
from wigig.cli import main
from wigig.phy.timing import ppdu_duration_ns
from wigig.sim import parse_metrics_csv, parse_trace_csv

SCN = """
sim.duration_us = 3000
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
"""


def cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_golay_dump(capsys):
    code, out, err = cli(capsys, "golay", "dump", "--field", "b", "--check")
    assert code == 0
    assert np.array_equal([int(x) for x in out.split()], golay.generate_golay_pair().seq_b)
    assert "complementary: True" in err


def test_golay_custom_delays(capsys):
    code, out, _ = cli(capsys, "golay", "dump", "--delays", "1,2", "--weights", "1,-1")
    assert code == 0 and len(out.split()) == 4


def test_golay_bad_weights(capsys):
    code, _, err = cli(capsys, "golay", "dump", "--delays", "1,2", "--weights", "1,3")
    assert code == 1 and err.startswith("error")


def test_phy_rates(capsys):
    code, out, _ = cli(capsys, "phy", "rates")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert len(rows) == 32
    row12 = next(r for r in rows if r["index"] == "12")
    assert float(row12["rate_mbps"]) == pytest.approx(4620.0)


def test_phy_duration(capsys):
    code, out, _ = cli(capsys, "phy", "duration", "--mcs", "12", "--len", "4096")
    assert code == 0 and int(out) == ppdu_duration_ns(12, 4096) == 9455


def test_phy_encode(capsys, tmp_path):
    dst = tmp_path / "coded.bin"
    code, out, _ = cli(capsys, "phy", "encode", "--mcs", "12", "--len", "4096", "--out", str(dst))
    assert code == 0
    assert "header_bits=448" in out and "data_bits=44800" in out
    assert dst.stat().st_size == (448 + 44800) // 8


def test_phy_bad_mcs(capsys):
    code, _, _ = cli(capsys, "phy", "duration", "--mcs", "40", "--len", "10")
    assert code == 1


def test_link_capacity(capsys):
    code, out, _ = cli(capsys, "link", "capacity", "--target", "1e9")
    kv = dict(line.split("=") for line in out.split())
    assert code == 0
    assert float(kv["capacity_gbps"]) == pytest.approx(0.1404, abs=1e-3)
    assert float(kv["required_gain_db"]) > 0


def test_link_sweep(capsys):
    code, out, _ = cli(capsys, "link", "sweep", "--p-t", "0:10:5")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [r["p_t_dbm"] for r in rows] == ["0", "5", "10"]


def test_bf_sls(capsys):
    code, out, _ = cli(capsys, "bf", "sls", "--seed", "3", "--brp")
    assert code == 0 and "messages=" in out and "brp_pair=" in out


def test_bf_dead_link_is_runtime_error(capsys, tmp_path):
    ch = tmp_path / "dead.csv"
    ch.write_text("tx_ant,tx_sector,rx_ant,rx_sector,gain_db\n0,0,0,0,-80\n")
    code, _, err = cli(capsys, "bf", "sls", "--channel", str(ch))
    assert code == 2 and "runtime error" in err


def test_tput_curve(capsys):
    code, out, _ = cli(capsys, "tput", "curve", "--mcs", "12", "--policy", "ampdu",
                       "--sizes", "65536,131072")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 2
    assert float(rows[1]["throughput_mbps"]) > float(rows[0]["throughput_mbps"])


def test_sim_list(capsys):
    code, out, _ = cli(capsys, "sim", "list")
    assert code == 0 and "walk_fst" in out.split()


def test_sim_validate(capsys, tmp_path):
    good = tmp_path / "good.scn"
    good.write_text(SCN)
    assert cli(capsys, "sim", "validate", "--scenario", str(good))[0] == 0
    bad = tmp_path / "bad.scn"
    bad.write_text(SCN + "station.sta.role = pcp\n")
    code, _, err = cli(capsys, "sim", "validate", "--scenario", str(bad))
    assert code == 1 and "multiple PCP/AP" in err


def test_sim_run_outputs(capsys, tmp_path):
    sc = tmp_path / "s.scn"
    sc.write_text(SCN)
    trace, metrics = tmp_path / "t.csv", tmp_path / "m.csv"
    code, out, _ = cli(capsys, "sim", "run", "--scenario", str(sc), "--seed", "4",
                       "--trace", str(trace), "--metrics", str(metrics))
    assert code == 0 and "flow f" in out
    assert parse_trace_csv(trace.read_text())
    rows = parse_metrics_csv(metrics.read_text())
    assert any(r["kind"] == "flow" and r["delivered"] > 0 for r in rows)


def test_sim_run_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert cli(capsys, "sim", "run", "--scenario", "abft_pbss", "--seed", "9",
                   "--trace", str(path))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_sim_run_invalid_scenario(capsys, tmp_path):
    sc = tmp_path / "s.scn"
    sc.write_text("station.a.role = sta\n")
    code, _, err = cli(capsys, "sim", "run", "--scenario", str(sc))
    assert code == 1 and "no PCP/AP" in err


def test_sim_run_unwritable_trace(capsys, tmp_path):
    code, _, err = cli(capsys, "sim", "run", "--scenario", "beacons_only",
                       "--trace", str(tmp_path / "missing" / "t.csv"))
    assert code == 2


def test_usage_errors_exit_1(capsys):
    assert main(["phy"]) == 1
    assert main(["nope"]) == 1
    assert main(["--help"]) == 0

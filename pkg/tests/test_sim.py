import pytest
from hypothesis import given, settings, strategies as st

from wigig.errors import ScenarioError
from wigig.sim import (KIND_RANK, METRICS_COLUMNS, TRACE_COLUMNS, EventQueue, load_scenario,
                       parse_metrics_csv, parse_scenario, parse_trace_csv, report, run,
                       shipped_scenarios, validate)
from wigig.sim.scenario import check

BASE = """
sim.duration_us = 5000
bi.duration_us = 1000
bi.bti_us = 100
station.ap.role = pcp
station.sta.role = sta
"""

SP = BASE + """
alloc.sp.kind = SP
alloc.sp.source = ap
alloc.sp.destination = sta
alloc.sp.start_us = 100
alloc.sp.duration_us = 900
flow.f.src = ap
flow.f.dst = sta
flow.f.alloc = sp
flow.f.payload = 1000
"""


def errors_of(text):
    return validate(parse_scenario(text))


class TestEventQueue:
    def test_time_then_rank_then_insertion(self):
        q = EventQueue()
        seen = []
        q.push(10, "frame_tx_start", seen.append, "tx")
        q.push(10, "bi_boundary", seen.append, "bi")
        q.push(5, "slot_boundary", seen.append, "early")
        q.push(10, "frame_tx_start", seen.append, "tx2")
        q.push(10, "frame_rx_end", seen.append, "rx")
        while q:
            _, _, handler, args = q.pop()
            handler(*args)
        assert seen == ["early", "bi", "rx", "tx", "tx2"]

    def test_all_kinds_ranked(self):
        assert set(KIND_RANK) == {"frame_tx_start", "frame_rx_end", "timer_expiry",
                                  "slot_boundary", "bi_boundary", "mobility_update"}


class TestValidate:
    def test_valid(self):
        assert errors_of(SP) == []

    def test_shipped_are_valid(self):
        names = shipped_scenarios()
        assert "walk_fst" in names and "edca_4ac" in names
        for name in names:
            assert validate(load_scenario(name)) == [], name

    def test_two_pcps(self):
        errs = errors_of(SP + "station.sta.role = pcp\n")
        assert any(e.startswith("multiple PCP/AP") for e in errs)

    def test_no_pcp(self):
        assert "no PCP/AP in the PBSS" in errors_of("station.a.role = sta\n")

    def test_sp_overlapping_cbap(self):
        text = SP + ("alloc.cb.kind = CBAP\nalloc.cb.start_us = 500\nalloc.cb.duration_us = 200\n")
        assert any("schedule conflict" in e for e in errors_of(text))

    def test_collects_everything(self):
        text = SP + ("flow.f.mcs = 27\nflow.f.policy = weird\nflow.g.src = ap\nflow.g.dst = ghost\n"
                     "flow.g.alloc = nowhere\nbogus.key = 1\nsim.duration_us = ten\n"
                     "channel.file = missing.csv\n")
        errs = errors_of(text)
        for fragment in ("MCS 27", "policy", "unknown station ghost", "unknown allocation",
                         "unknown key bogus.key", "sim.duration_us", "missing.csv"):
            assert any(fragment in e for e in errs), fragment

    def test_priority_inversion(self):
        errs = errors_of(SP + "edca.VO.aifs = 9\n")
        assert any("AIFS[VO]" in e for e in errs)

    def test_threshold_order(self):
        assert any("not monotone" in e for e in errors_of(SP + "phy.threshold.5 = 30\n"))

    def test_bti_too_short(self):
        assert any("too short" in e for e in errors_of(SP.replace("bi.bti_us = 100", "bi.bti_us = 5")))

    def test_validate_does_not_mutate(self):
        sc = parse_scenario(SP + "station.sta.role = pcp\n")
        before = repr(sc)
        validate(sc)
        assert repr(sc) == before

    def test_check_raises_with_list(self):
        with pytest.raises(ScenarioError) as exc:
            check(parse_scenario("station.a.role = sta\n"))
        assert exc.value.errors

    def test_run_refuses_invalid(self):
        with pytest.raises(ScenarioError):
            run(parse_scenario("station.a.role = sta\n"))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ScenarioError):
            load_scenario(tmp_path / "nope.scn")

    def test_relative_channel_file(self, tmp_path):
        (tmp_path / "ch.csv").write_text("tx_ant,tx_sector,rx_ant,rx_sector,gain_db\n0,0,0,0,20\n")
        (tmp_path / "s.scn").write_text(SP + "channel.file = ch.csv\n")
        assert validate(load_scenario(tmp_path / "s.scn")) == []


class TestRun:
    def test_beacons_only(self):
        r = run("beacons_only")
        types = {row[3] for row in r.trace}
        assert types == {"BEACON"}
        sc = load_scenario("beacons_only")
        assert r.metrics.frames["BEACON"] == sc.stations[sc.pcp].sectors * sc.stations[sc.pcp].antennas

    @given(st.integers(0, 2 ** 31))
    @settings(max_examples=5)
    def test_determinism(self, seed):
        text = SP.replace("flow.f.payload = 1000", "flow.f.payload = 1000\nflow.f.loss = 0.2")
        a = run(parse_scenario(text), seed=seed).trace_csv()
        b = run(parse_scenario(text), seed=seed).trace_csv()
        assert a == b

    def test_seed_matters_under_loss(self):
        text = SP + "flow.f.loss = 0.3\n"
        assert run(parse_scenario(text), seed=1).trace_csv() != run(parse_scenario(text), seed=2).trace_csv()

    def test_does_not_mutate_input(self):
        sc = parse_scenario(SP)
        run(sc, seed=99)
        assert sc.seed == 0

    @pytest.mark.parametrize("name", ["sp_link", "power_save", "abft_pbss", "walk_fst"])
    def test_conservation(self, name):
        m = run(name).metrics
        for f in m.flows:
            assert m.conserved(f), f

    @given(st.floats(0.0, 0.9), st.integers(0, 1000), st.sampled_from(["ack", "ampdu"]))
    @settings(max_examples=10)
    def test_conservation_under_loss(self, loss, seed, policy):
        text = SP + f"flow.f.loss = {loss}\nflow.f.policy = {policy}\nflow.f.subframes = 4\n"
        m = run(parse_scenario(text), seed=seed).metrics
        assert m.conserved("f")

    def test_trace_sorted_and_well_formed(self):
        rows = parse_trace_csv(run("abft_pbss").trace_csv())
        times = [r["time_ns"] for r in rows]
        assert times == sorted(times)
        assert all(r["duration_ns"] >= 0 for r in rows)

    def test_snr_below_threshold_blocks_link(self):
        m = run(parse_scenario(SP + "flow.f.snr_db = 5\n")).metrics
        assert m.flows["f"].delivered == 0
        assert m.conserved("f")

    def test_bf_messages_counted(self):
        m = run("abft_pbss").metrics
        assert sum(s.bf_messages for s in m.stations.values()) > 0

    def test_power_save_dozes(self):
        m = run("power_save").metrics
        assert m.stations["sensor"].doze_fraction > 0.5
        assert m.stations["ap"].doze_fraction == 0.0

    def test_no_delivery_to_dozing_station(self):
        sc = load_scenario("power_save")
        r = run(sc)
        ws = sc.stations["sensor"].ps
        enter = sc.stations["sensor"].ps_enter_us * 1000
        for row in parse_trace_csv(r.trace_csv()):
            if row["frame_type"] == "DATA" and row["peer"] == "sensor" and row["time_ns"] > enter + sc.bi_us * 1000:
                bi, t_us = divmod(row["time_ns"] // 1000, sc.bi_us)
                assert ws.awake_at(bi, t_us)


class TestReport:
    def test_columns_fixed(self):
        out = report(run("sp_link").metrics, "csv")
        assert out.splitlines()[0].split(",") == list(METRICS_COLUMNS)
        assert TRACE_COLUMNS[0] == "time_ns"

    def test_round_trip(self):
        m = run("abft_pbss").metrics
        rows = parse_metrics_csv(report(m, "csv"))
        assert rows == [{c: ("" if v == "" else v) for c, v in r.items()} for r in m.to_rows()]

    def test_throughput_definition(self):
        m = run("sp_link").metrics
        row = next(r for r in parse_metrics_csv(report(m, "csv")) if r["kind"] == "flow")
        assert row["throughput_bps"] == pytest.approx(row["delivered_octets"] * 8e9 / row["duration_ns"])

    def test_text(self):
        txt = report(run("walk_fst").metrics, "text")
        assert "flow video" in txt and "fst" in txt
        with pytest.raises(ValueError):
            report(run("beacons_only").metrics, "xml")

    def test_schema_mismatch(self):
        with pytest.raises(ValueError):
            parse_metrics_csv("a,b\n1,2\n")


class TestEdcaPriority:
    def test_median_delay_order(self):
        m = run("edca_4ac").metrics
        med = m.median_delay_by_ac()
        assert med["VO"] < med["VI"] < med["BE"] < med["BK"]
        assert m.total_grants() >= 10_000


@pytest.fixture(scope="module")
def result():
    return run("walk_fst")


class TestFstScenario:
    def test_band_sequence(self, result):
        rows = [r for r in parse_trace_csv(result.trace_csv()) if r["frame_type"] == "DATA"]
        bands = [(r["band"], r["channel"], r["rate_bps"]) for r in rows]
        switch = bands.index(("60GHz", 2, 4_620_000_000))
        assert set(bands[:switch]) == {("2.4GHz", 6, 144_400_000)}
        assert set(bands[switch:]) == {("60GHz", 2, 4_620_000_000)}

    def test_fst_frames_between(self, result):
        rows = parse_trace_csv(result.trace_csv())
        fst_t = [r["time_ns"] for r in rows if r["frame_type"].startswith("FST")]
        data = [r for r in rows if r["frame_type"] == "DATA"]
        last_legacy = max(r["time_ns"] for r in data if r["band"] == "2.4GHz")
        first_60 = min(r["time_ns"] for r in data if r["band"] == "60GHz")
        assert min(fst_t) < first_60
        assert last_legacy < max(fst_t)
        events = [e for _, e, _, _ in result.metrics.fst_log]
        assert events == ["setup_request", "setup_response", "switch", "ack_confirmed"]

    def test_no_loss(self, result):
        f = result.metrics.flows["video"]
        assert f.dropped == 0
        assert f.delivered == f.offered

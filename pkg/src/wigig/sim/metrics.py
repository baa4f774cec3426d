"""Run metrics, the metrics CSV schema and the event-trace CSV."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

TRACE_COLUMNS = ("time_ns", "station", "peer", "frame_type", "duration_ns", "outcome",
                 "band", "channel", "rate_bps")

# One table; ``kind`` is flow, station or frame and unused cells stay empty.
METRICS_COLUMNS = ("kind", "name", "station", "peer", "ac", "offered", "delivered", "dropped",
                   "in_flight", "delivered_octets", "duration_ns", "busy_ns", "throughput_bps",
                   "delay_p50_ns", "delay_p90_ns", "delay_p99_ns", "grants", "bf_messages",
                   "beacons", "doze_fraction", "count")

_INT_COLS = {"offered", "delivered", "dropped", "in_flight", "delivered_octets", "duration_ns",
             "busy_ns", "delay_p50_ns", "delay_p90_ns", "delay_p99_ns", "grants", "bf_messages",
             "beacons", "count"}
_FLOAT_COLS = {"throughput_bps", "doze_fraction"}


@dataclass
class FlowStats:
    name: str
    station: str
    peer: str
    ac: str
    offered: int = 0
    delivered: int = 0
    dropped: int = 0
    delivered_octets: int = 0
    busy_ns: int = 0
    grants: int = 0
    delays_ns: list = field(default_factory=list)
    in_flight: int = 0

    def percentile(self, q) -> int:
        if not self.delays_ns:
            return 0
        return int(round(float(np.percentile(np.asarray(self.delays_ns, dtype=np.int64), q))))


@dataclass
class StationStats:
    name: str
    bf_messages: int = 0
    beacons: int = 0
    doze_fraction: float = 0.0


@dataclass
class Metrics:
    duration_ns: int
    flows: dict = field(default_factory=dict)
    stations: dict = field(default_factory=dict)
    frames: dict = field(default_factory=dict)
    fst_log: list = field(default_factory=list)   # (time_ns, event, band, channel)

    def throughput(self, flow: str) -> float:
        f = self.flows[flow]
        return f.delivered_octets * 8e9 / self.duration_ns if self.duration_ns else 0.0

    def exchange_throughput(self, flow: str) -> float:
        """Delivered bits per second of airtime spent on the flow's own exchanges."""
        f = self.flows[flow]
        return f.delivered_octets * 8e9 / f.busy_ns if f.busy_ns else 0.0

    def conserved(self, flow: str) -> bool:
        f = self.flows[flow]
        return f.delivered + f.dropped + f.in_flight == f.offered

    def delays_by_ac(self) -> dict:
        out = {}
        for f in self.flows.values():
            out.setdefault(f.ac, []).extend(f.delays_ns)
        return out

    def median_delay_by_ac(self) -> dict:
        return {ac: float(np.median(d)) for ac, d in self.delays_by_ac().items() if d}

    def total_grants(self) -> int:
        return sum(f.grants for f in self.flows.values())

    def to_rows(self) -> list[dict]:
        rows = []
        for name in sorted(self.flows):
            f = self.flows[name]
            rows.append({"kind": "flow", "name": name, "station": f.station, "peer": f.peer,
                         "ac": f.ac, "offered": f.offered, "delivered": f.delivered,
                         "dropped": f.dropped, "in_flight": f.in_flight,
                         "delivered_octets": f.delivered_octets, "duration_ns": self.duration_ns,
                         "busy_ns": f.busy_ns, "throughput_bps": self.throughput(name),
                         "delay_p50_ns": f.percentile(50), "delay_p90_ns": f.percentile(90),
                         "delay_p99_ns": f.percentile(99), "grants": f.grants})
        for name in sorted(self.stations):
            s = self.stations[name]
            rows.append({"kind": "station", "name": name, "station": name,
                         "duration_ns": self.duration_ns, "bf_messages": s.bf_messages,
                         "beacons": s.beacons, "doze_fraction": s.doze_fraction})
        for ftype in sorted(self.frames):
            rows.append({"kind": "frame", "name": ftype, "duration_ns": self.duration_ns,
                         "count": self.frames[ftype]})
        return [{c: r.get(c, "") for c in METRICS_COLUMNS} for r in rows]


def _fmt(col, value):
    if value == "" or value is None:
        return ""
    if col in _FLOAT_COLS:
        return repr(float(value))
    return str(value)


def metrics_csv(metrics: Metrics) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(METRICS_COLUMNS)
    for row in metrics.to_rows():
        w.writerow([_fmt(c, row[c]) for c in METRICS_COLUMNS])
    return buf.getvalue()


def parse_metrics_csv(text: str) -> list[dict]:
    """Rows of a metrics CSV with numeric columns converted back."""
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != METRICS_COLUMNS:
        raise ValueError("metrics CSV header does not match the schema")
    out = []
    for row in reader:
        conv = {}
        for c in METRICS_COLUMNS:
            v = row[c]
            if v == "":
                conv[c] = ""
            elif c in _INT_COLS:
                conv[c] = int(v)
            elif c in _FLOAT_COLS:
                conv[c] = float(v)
            else:
                conv[c] = v
        out.append(conv)
    return out


def metrics_text(metrics: Metrics) -> str:
    lines = [f"duration: {metrics.duration_ns / 1e6:.3f} ms"]
    for name in sorted(metrics.flows):
        f = metrics.flows[name]
        lines.append(
            f"flow {name} {f.station}->{f.peer} [{f.ac}]: offered {f.offered}, "
            f"delivered {f.delivered}, dropped {f.dropped}, in flight {f.in_flight}, "
            f"throughput {metrics.throughput(name) / 1e6:.2f} Mbit/s, "
            f"median access delay {f.percentile(50) / 1e3:.1f} us")
    for name in sorted(metrics.stations):
        s = metrics.stations[name]
        lines.append(f"station {name}: beacons {s.beacons}, bf messages {s.bf_messages}, "
                     f"doze {100 * s.doze_fraction:.1f}%")
    if metrics.frames:
        lines.append("frames: " + ", ".join(f"{k}={v}" for k, v in sorted(metrics.frames.items())))
    for t, event, band, ch in metrics.fst_log:
        lines.append(f"fst {t / 1e6:.3f} ms {event} {band}/ch{ch}")
    return "\n".join(lines) + "\n"


def report(metrics: Metrics, fmt: str = "text") -> str:
    if fmt == "csv":
        return metrics_csv(metrics)
    if fmt == "text":
        return metrics_text(metrics)
    raise ValueError(f"unknown report format {fmt!r}")


def trace_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def parse_trace_csv(text: str) -> list[dict]:
    rows = []
    for r in csv.DictReader(io.StringIO(text)):
        for c in ("time_ns", "duration_ns", "channel", "rate_bps"):
            r[c] = int(r[c])
        rows.append(r)
    return rows

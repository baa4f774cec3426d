"""Scenario files: line-oriented ``section.key = value`` text.

Sections
--------
``sim``        seed, duration_us, sifs_us, slot_us, retry_limit
``bi``         duration_us, bti_us, abft_slots, abft_slot_us, ati_us, beacon_octets
``station.N``  role (pcp|sta), antennas, sectors, ps_period_bi, ps_offset_bi,
               ps_window_start_us, ps_window_us, ps_enter_us
``alloc.ID``   kind (SP|CBAP), source, destination, start_us, duration_us,
               spatial_share, pseudo_static
``flow.ID``    src, dst, ac, mcs, payload, policy (ack|ampdu), subframes,
               interval_us (0 = saturated), count, alloc, loss, snr_db, band, rate_bps
``channel``    file (sector-gain CSV), snr_db
``edca.AC``    cw_min, cw_max, aifs, txop
``phy``        threshold.MCS
``band.B``     channels (comma list), steps (``dist:rate[:mcs]`` comma list)
``mobility``   start_m, end_m, speed_mps, update_us
``fst``        flows, ack_loss (comma list of 0/1), switch_delay_us, congested
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from wigig.beamforming.channel import SectorChannel
from wigig.errors import InvalidParameter, ScenarioError
from wigig.mac.edca import DEFAULT_EDCA, AcParams, check_priority_order
from wigig.mac.frames import AccessCategory
from wigig.mac.schedule import Allocation, BeaconIntervalSchedule
from wigig.phy.mcs import MCS_TABLE
from wigig.phy.timing import ppdu_duration_ns
from wigig.phy.reception import DEFAULT_SNR_THRESHOLDS, check_thresholds
from wigig.station.bands import DEFAULT_PROFILES, BandProfile
from wigig.station.power import WakeupSchedule

PCP = "pcp"
STA = "sta"


@dataclass
class StationCfg:
    name: str
    role: str = STA
    antennas: int = 1
    sectors: int = 8
    ps: WakeupSchedule | None = None
    ps_enter_us: int = 0


@dataclass
class FlowCfg:
    name: str
    src: str
    dst: str
    ac: AccessCategory = AccessCategory.BE
    mcs: int = 12
    payload: int = 1500
    policy: str = "ack"
    n_subframes: int = 64
    interval_us: int = 0
    count: int | None = None
    alloc: str | None = None
    loss: float = 0.0
    snr_db: float | None = None
    band: str | None = None
    rate_bps: float | None = None

    @property
    def saturated(self) -> bool:
        return self.interval_us <= 0


@dataclass
class Mobility:
    start_m: float = 40.0
    end_m: float = 2.0
    speed_mps: float = 1.0
    update_us: int = 100_000

    def distance(self, t_ns: int) -> float:
        """Straight-line walk from ``start_m`` toward ``end_m``."""
        travelled = self.speed_mps * t_ns * 1e-9
        if self.start_m >= self.end_m:
            return max(self.end_m, self.start_m - travelled)
        return min(self.end_m, self.start_m + travelled)


@dataclass
class FstCfg:
    flows: tuple = ()
    ack_loss: tuple = ()
    switch_delay_us: int = 100
    congested: tuple = ()


@dataclass
class Scenario:
    seed: int = 0
    duration_us: int = 10_000
    sifs_us: int = 3
    slot_us: int = 5
    retry_limit: int = 7
    bi_us: int = 1000
    bti_us: int = 200
    abft_slots: int = 0
    abft_slot_us: int = 20
    ati_us: int = 0
    beacon_octets: int = 64
    stations: dict = field(default_factory=dict)
    allocations: list = field(default_factory=list)
    flows: dict = field(default_factory=dict)
    edca: dict = field(default_factory=lambda: dict(DEFAULT_EDCA))
    thresholds: dict = field(default_factory=lambda: dict(DEFAULT_SNR_THRESHOLDS))
    channel_file: str | None = None
    link_snr_db: float = 30.0
    bands: tuple = DEFAULT_PROFILES
    mobility: Mobility | None = None
    fst: FstCfg | None = None
    base_dir: Path | None = None
    unknown_keys: list = field(default_factory=list)
    parse_errors: list = field(default_factory=list)

    @property
    def sifs_ns(self) -> int:
        return self.sifs_us * 1000

    @property
    def slot_ns(self) -> int:
        return self.slot_us * 1000

    @property
    def duration_ns(self) -> int:
        return self.duration_us * 1000

    @property
    def pcp(self) -> str | None:
        pcps = [s.name for s in self.stations.values() if s.role == PCP]
        return pcps[0] if pcps else None

    def schedule(self) -> BeaconIntervalSchedule:
        abft = (self.abft_slots, self.abft_slot_us) if self.abft_slots > 0 else None
        return BeaconIntervalSchedule(self.bi_us, self.bti_us, abft, self.ati_us or None,
                                      tuple(self.allocations))

    def channel_path(self) -> Path | None:
        if not self.channel_file:
            return None
        p = Path(self.channel_file)
        if not p.is_absolute() and self.base_dir is not None:
            p = self.base_dir / p
        return p

    def sector_channel(self) -> SectorChannel | None:
        p = self.channel_path()
        return None if p is None else SectorChannel.from_csv(p)


# -- parsing -----------------------------------------------------------------

def _bool(v: str) -> bool:
    v = v.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {v!r}")


def _list(v: str) -> list:
    return [x.strip() for x in v.split(",") if x.strip()]


def _ac(v: str) -> AccessCategory:
    try:
        return AccessCategory[v.strip().upper()]
    except KeyError:
        return AccessCategory(int(v))


def _steps(v: str) -> tuple:
    out = []
    for item in _list(v):
        parts = item.split(":")
        if len(parts) not in (2, 3):
            raise ValueError(f"band step {item!r} is not dist:rate[:mcs]")
        mcs = int(parts[2]) if len(parts) == 3 else None
        out.append((float(parts[0]), float(parts[1]), mcs))
    return tuple(out)


_SIM_KEYS = {"seed": ("seed", int), "duration_us": ("duration_us", int), "sifs_us": ("sifs_us", int),
             "slot_us": ("slot_us", int), "retry_limit": ("retry_limit", int)}
_BI_KEYS = {"duration_us": ("bi_us", int), "bti_us": ("bti_us", int),
            "abft_slots": ("abft_slots", int), "abft_slot_us": ("abft_slot_us", int),
            "ati_us": ("ati_us", int), "beacon_octets": ("beacon_octets", int)}
_STATION_KEYS = {"role": str, "antennas": int, "sectors": int, "ps_period_bi": int,
                 "ps_offset_bi": int, "ps_window_start_us": int, "ps_window_us": int,
                 "ps_enter_us": int}
_ALLOC_KEYS = {"kind": str, "source": str, "destination": str, "start_us": int,
               "duration_us": int, "spatial_share": _bool, "pseudo_static": _bool}
_FLOW_KEYS = {"src": str, "dst": str, "ac": _ac, "mcs": int, "payload": int, "policy": str,
              "subframes": int, "interval_us": int, "count": int, "alloc": str, "loss": float,
              "snr_db": float, "band": str, "rate_bps": float}
_EDCA_KEYS = {"cw_min": int, "cw_max": int, "aifs": int, "txop": int}
_MOBILITY_KEYS = {"start_m": float, "end_m": float, "speed_mps": float, "update_us": int}
_FST_KEYS = {"flows": lambda v: tuple(_list(v)),
             "ack_loss": lambda v: tuple(_bool(x) for x in _list(v)),
             "switch_delay_us": int,
             "congested": lambda v: tuple((b, int(c)) for b, c in (x.split(":") for x in _list(v)))}


def parse_scenario(text: str, base_dir=None) -> Scenario:
    """Parse scenario text.  Problems are collected on the result, not raised;
    call :func:`validate` to see them."""
    sc = Scenario(base_dir=Path(base_dir) if base_dir is not None else None)
    raw = {"station": {}, "alloc": {}, "flow": {}, "edca": {}, "band": {}, "mobility": {}, "fst": {}}

    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            sc.parse_errors.append(f"line {lineno}: expected 'section.key = value'")
            continue
        key, value = (s.strip() for s in line.split("=", 1))
        parts = key.split(".")
        section = parts[0]
        try:
            if section == "sim" and len(parts) == 2 and parts[1] in _SIM_KEYS:
                attr, conv = _SIM_KEYS[parts[1]]
                setattr(sc, attr, conv(value))
            elif section == "bi" and len(parts) == 2 and parts[1] in _BI_KEYS:
                attr, conv = _BI_KEYS[parts[1]]
                setattr(sc, attr, conv(value))
            elif section == "channel" and parts[1:] == ["file"]:
                sc.channel_file = value
            elif section == "channel" and parts[1:] == ["snr_db"]:
                sc.link_snr_db = float(value)
            elif section == "phy" and len(parts) == 3 and parts[1] == "threshold":
                sc.thresholds[int(parts[2])] = float(value)
            elif section == "band" and len(parts) >= 3:
                # band names such as "2.4GHz" contain dots themselves
                raw["band"].setdefault(".".join(parts[1:-1]), {})[parts[-1]] = value
            elif section in ("station", "alloc", "flow", "edca") and len(parts) == 3:
                raw[section].setdefault(parts[1], {})[parts[2]] = value
            elif section in ("mobility", "fst") and len(parts) == 2:
                raw[section][parts[1]] = value
            else:
                sc.unknown_keys.append(key)
        except ValueError as exc:
            sc.parse_errors.append(f"line {lineno}: {key}: {exc}")

    def convert(table, spec, where):
        out = {}
        for k, v in table.items():
            if k not in spec:
                sc.unknown_keys.append(f"{where}.{k}")
                continue
            try:
                out[k] = spec[k](v)
            except (ValueError, KeyError) as exc:
                sc.parse_errors.append(f"{where}.{k}: {exc}")
        return out

    for name, table in raw["station"].items():
        kv = convert(table, _STATION_KEYS, f"station.{name}")
        ps = None
        if "ps_window_us" in kv or "ps_period_bi" in kv:
            try:
                ps = WakeupSchedule(kv.get("ps_period_bi", 1), kv.get("ps_offset_bi", 0),
                                    kv.get("ps_window_start_us", 0), kv.get("ps_window_us", 100))
            except InvalidParameter as exc:
                sc.parse_errors.append(f"station.{name}: {exc}")
        sc.stations[name] = StationCfg(name, kv.get("role", STA).lower(), kv.get("antennas", 1),
                                       kv.get("sectors", 8), ps, kv.get("ps_enter_us", 0))

    for aid, table in raw["alloc"].items():
        kv = convert(table, _ALLOC_KEYS, f"alloc.{aid}")
        try:
            sc.allocations.append(Allocation(aid, kv.get("kind", "SP").upper(), kv.get("source"),
                                             kv.get("destination"), kv.get("start_us", 0),
                                             kv.get("duration_us", 0), kv.get("pseudo_static", True),
                                             kv.get("spatial_share", False)))
        except InvalidParameter as exc:
            sc.parse_errors.append(f"alloc.{aid}: {exc}")

    for fid, table in raw["flow"].items():
        kv = convert(table, _FLOW_KEYS, f"flow.{fid}")
        if "src" not in kv or "dst" not in kv:
            sc.parse_errors.append(f"flow.{fid}: src and dst are required")
            continue
        sc.flows[fid] = FlowCfg(fid, kv["src"], kv["dst"], kv.get("ac", AccessCategory.BE),
                                kv.get("mcs", 12), kv.get("payload", 1500),
                                kv.get("policy", "ack").lower(), kv.get("subframes", 64),
                                kv.get("interval_us", 0), kv.get("count"), kv.get("alloc"),
                                kv.get("loss", 0.0), kv.get("snr_db"), kv.get("band"),
                                kv.get("rate_bps"))

    for ac_name, table in raw["edca"].items():
        kv = convert(table, _EDCA_KEYS, f"edca.{ac_name}")
        try:
            ac = _ac(ac_name)
            base = sc.edca[ac]
            sc.edca[ac] = AcParams(ac, kv.get("cw_min", base.cw_min), kv.get("cw_max", base.cw_max),
                                   kv.get("aifs", base.aifs), kv.get("txop", base.txop_limit))
        except (ValueError, KeyError, InvalidParameter) as exc:
            sc.parse_errors.append(f"edca.{ac_name}: {exc}")

    if raw["band"]:
        profiles = []
        for band, table in raw["band"].items():
            kv = convert(table, {"channels": lambda v: tuple(int(c) for c in _list(v)),
                                 "steps": _steps}, f"band.{band}")
            try:
                profiles.append(BandProfile(band, kv.get("channels", ()), kv.get("steps", ())))
            except InvalidParameter as exc:
                sc.parse_errors.append(f"band.{band}: {exc}")
        sc.bands = tuple(profiles)

    if raw["mobility"]:
        sc.mobility = Mobility(**convert(raw["mobility"], _MOBILITY_KEYS, "mobility"))
    if raw["fst"]:
        sc.fst = FstCfg(**convert(raw["fst"], _FST_KEYS, "fst"))
    return sc


def load_scenario(path) -> Scenario:
    """Load a scenario file, or a shipped one by bare name (e.g. ``walk_fst``)."""
    p = Path(path)
    if not p.exists() and p.suffix == "" and "/" not in str(path):
        shipped = resources.files("wigig.data") / "scenarios" / f"{path}.scn"
        if shipped.is_file():
            return parse_scenario(shipped.read_text(), base_dir=Path(str(shipped)).parent)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ScenarioError([f"cannot read scenario {path}: {exc}"]) from None
    return parse_scenario(text, base_dir=p.parent)


def shipped_scenarios() -> list[str]:
    folder = resources.files("wigig.data") / "scenarios"
    return sorted(p.name[:-4] for p in folder.iterdir() if p.name.endswith(".scn"))


def as_scenario(obj) -> Scenario:
    if isinstance(obj, Scenario):
        return obj
    if isinstance(obj, str) and "\n" in obj:
        return parse_scenario(obj)
    return load_scenario(obj)


# -- validation --------------------------------------------------------------

def validate(scenario: Scenario) -> list[str]:
    """Every problem with ``scenario``; an empty list means it can run."""
    sc = copy.deepcopy(scenario)
    errors = list(sc.parse_errors)
    errors += [f"unknown key {k}" for k in sc.unknown_keys]

    pcps = [s.name for s in sc.stations.values() if s.role == PCP]
    if len(pcps) > 1:
        errors.append(f"multiple PCP/AP: {', '.join(sorted(pcps))}")
    elif not pcps:
        errors.append("no PCP/AP in the PBSS")
    for s in sc.stations.values():
        if s.role not in (PCP, STA):
            errors.append(f"station {s.name}: role must be pcp or sta")
        if not (1 <= s.antennas <= 4 and 1 <= s.sectors and s.antennas * s.sectors <= 128):
            errors.append(f"station {s.name}: antennas/sectors out of range")

    for name, val in (("sim.duration_us", sc.duration_us), ("bi.duration_us", sc.bi_us),
                      ("sim.slot_us", sc.slot_us), ("bi.beacon_octets", sc.beacon_octets)):
        if val <= 0:
            errors.append(f"{name} must be positive")
    if sc.sifs_us < 0 or sc.bti_us < 0 or sc.ati_us < 0 or sc.abft_slots < 0:
        errors.append("interval lengths must be non-negative")

    if sc.bi_us > 0:
        errors += sc.schedule().conflicts()
    if sc.bti_us > 0 and sc.bti_us * 1000 < ppdu_duration_ns(0, max(sc.beacon_octets, 1)):
        errors.append("bi.bti_us is too short for a single beacon")
    alloc_ids = {a.alloc_id for a in sc.allocations}
    for a in sc.allocations:
        for st in a.stations():
            if st not in sc.stations:
                errors.append(f"allocation {a.alloc_id}: unknown station {st}")

    band_names = {p.band for p in sc.bands}
    fst_flows = set(sc.fst.flows) if sc.fst else set()
    for f in sc.flows.values():
        for st in (f.src, f.dst):
            if st not in sc.stations:
                errors.append(f"flow {f.name}: unknown station {st}")
        if f.src == f.dst:
            errors.append(f"flow {f.name}: source and destination are the same station")
        if f.mcs not in MCS_TABLE or MCS_TABLE[f.mcs].phy_kind == "LPSC":
            errors.append(f"flow {f.name}: MCS {f.mcs} is not supported")
        if f.policy not in ("ack", "ampdu"):
            errors.append(f"flow {f.name}: policy must be ack or ampdu")
        if not 1 <= f.n_subframes <= 64:
            errors.append(f"flow {f.name}: subframes must be 1..64")
        if f.payload < 0 or not 0.0 <= f.loss < 1.0:
            errors.append(f"flow {f.name}: payload must be >= 0 and loss in [0, 1)")
        if f.name in fst_flows:
            continue
        if f.band is not None:
            if f.band == "60GHz":
                errors.append(f"flow {f.name}: 60 GHz flows are served in allocations")
            elif not f.rate_bps:
                errors.append(f"flow {f.name}: legacy-band flows need rate_bps")
        elif f.alloc is None:
            errors.append(f"flow {f.name}: needs an allocation or a legacy band")
        elif f.alloc not in alloc_ids:
            errors.append(f"flow {f.name}: unknown allocation {f.alloc}")
        else:
            a = next(a for a in sc.allocations if a.alloc_id == f.alloc)
            if a.kind == "SP" and a.source != f.src:
                errors.append(f"flow {f.name}: SP {a.alloc_id} belongs to {a.source}")

    errors += check_thresholds(sc.thresholds)
    errors += check_priority_order(sc.edca)

    p = sc.channel_path()
    if p is not None:
        if not p.exists():
            errors.append(f"channel file {p} not found")
        else:
            try:
                sc.sector_channel()
            except InvalidParameter as exc:
                errors.append(f"channel file {p}: {exc}")

    if sc.fst is not None:
        if sc.mobility is None:
            errors.append("fst needs a mobility trajectory")
        if not sc.fst.flows:
            errors.append("fst.flows is empty")
        pairs = {(sc.flows[f].src, sc.flows[f].dst) for f in sc.fst.flows if f in sc.flows}
        for f in sc.fst.flows:
            if f not in sc.flows:
                errors.append(f"fst: unknown flow {f}")
        if len({frozenset(p) for p in pairs}) > 1:
            errors.append("fst flows must share one station pair")
        for b, _ in sc.fst.congested:
            if b not in band_names:
                errors.append(f"fst.congested: unknown band {b}")
        if sc.mobility is not None and sc.mobility.update_us <= 0:
            errors.append("mobility.update_us must be positive")
    return errors


def check(scenario: Scenario) -> Scenario:
    errors = validate(scenario)
    if errors:
        raise ScenarioError(errors)
    return scenario

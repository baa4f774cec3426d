"""Deterministic discrete-event simulation of one PBSS.

Time is integer nanoseconds.  Events at equal times run in kind-rank order,
then in insertion order, so a (scenario, seed) pair always yields the same
trace.
"""

from __future__ import annotations

import copy
import heapq
import itertools
import math
import zlib
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from wigig.beamforming.beacon import a_bft_access, beacon_txss
from wigig.beamforming.channel import SectorChannel
from wigig.beamforming.sls import run_sls
from wigig.errors import LinkFailure, NoLink
from wigig.mac.blockack import WINDOW
from wigig.mac.edca import EdcaState
from wigig.mac.frames import CONTROL_FRAME_OCTETS, FrameType
from wigig.mac.schedule import CBAP, SP
from wigig.phy.mcs import MCS_TABLE
from wigig.phy.timing import ppdu_duration_ns
from wigig.sim.metrics import FlowStats, Metrics, StationStats, trace_csv
from wigig.sim.scenario import Scenario, as_scenario, check
from wigig.station.bands import band_select
from wigig.station.fst import ACK_CONFIRMED, IDLE, SETUP, TRANSITIONED, Channel, FstSession
from wigig.station.power import (BUFFERED, ENTER_PS, INFO_REQUEST, POWER_SAVE,
                                 PowerSaveBuffer, PowerStatus, ps_transition)
from wigig.throughput import MPDU_OVERHEAD, ampdu_length

KIND_RANK = {
    "bi_boundary": 0,
    "frame_rx_end": 1,
    "mobility_update": 2,
    "timer_expiry": 3,
    "slot_boundary": 4,
    "frame_tx_start": 5,
}

SBIFS_NS = 1000
MGMT_OCTETS = 64
BAND_60 = "60GHz"


class EventQueue:
    def __init__(self):
        self._heap = []
        self._seq = itertools.count()

    def push(self, time_ns: int, kind: str, handler, *args):
        heapq.heappush(self._heap, (int(time_ns), KIND_RANK[kind], next(self._seq), kind, handler, args))

    def pop(self):
        time_ns, _, _, kind, handler, args = heapq.heappop(self._heap)
        return time_ns, kind, handler, args

    def __len__(self):
        return len(self._heap)


@dataclass(eq=False)
class Frame:
    flow: str
    seq: int
    created_ns: int
    retries: int = 0


@dataclass
class FlowState:
    cfg: object
    stats: FlowStats
    queue: deque = field(default_factory=deque)
    next_seq: int = 0
    busy: bool = False
    hol_ns: int = 0


@dataclass
class RunResult:
    metrics: Metrics
    trace: list

    def trace_csv(self) -> str:
        return trace_csv(self.trace)


def _rate(mcs: int) -> int:
    return int(round(MCS_TABLE[mcs].data_rate))


class Simulator:
    def __init__(self, scenario: Scenario):
        self.sc = sc = check(scenario)
        self.q = EventQueue()
        self.trace = []
        self.end = sc.duration_ns
        self.bi_ns = sc.bi_us * 1000
        self.sifs = sc.sifs_ns
        self.slot = sc.slot_ns
        self.sched = sc.schedule()
        self.pcp = sc.pcp
        self.names = sorted(sc.stations)
        self.rngs = {n: np.random.default_rng([sc.seed, zlib.crc32(n.encode())]) for n in self.names}
        self.metrics = Metrics(self.end)
        for n in self.names:
            self.metrics.stations[n] = StationStats(n)
        prof60 = [p for p in sc.bands if p.band == BAND_60]
        self.ch60 = prof60[0].channels[0] if prof60 else 2

        self.flows = {}
        for name in sorted(sc.flows):
            f = sc.flows[name]
            stats = FlowStats(name, f.src, f.dst, f.ac.name)
            self.flows[name] = FlowState(f, stats)
            self.metrics.flows[name] = stats
        self.alloc_flows = {}
        for fs in self.flows.values():
            if fs.cfg.alloc is not None:
                self.alloc_flows.setdefault(fs.cfg.alloc, []).append(fs)
        self.cbap_stations = {
            a.alloc_id: sorted({fs.cfg.src for fs in self.alloc_flows.get(a.alloc_id, [])})
            for a in sc.allocations if a.kind == CBAP}
        self.edca = {}
        for st in sorted({s for v in self.cbap_stations.values() for s in v}):
            self.edca[st] = EdcaState(sc.edca, self.rngs[st], retry_limit=sc.retry_limit)
        self.hol = {}
        self.sp_state = {}

        self.ps_status = {n: PowerStatus() for n in self.names}
        self.ps_enter_ns = {}
        self.ps_buffers = {n: PowerSaveBuffer() for n in self.names}
        self.trained = set()
        self._sector_channel = sc.sector_channel()

        self.fst = None
        self.fst_flows = set()
        if sc.fst is not None:
            self._init_fst()

        self.t_ack = ppdu_duration_ns(0, CONTROL_FRAME_OCTETS[FrameType.ACK])
        self.t_bar = ppdu_duration_ns(0, CONTROL_FRAME_OCTETS[FrameType.BAR])
        self.t_ba = ppdu_duration_ns(0, CONTROL_FRAME_OCTETS[FrameType.BA])
        self.t_mgmt = ppdu_duration_ns(0, MGMT_OCTETS)

    # -- helpers ---------------------------------------------------------------

    def log(self, t, station, peer, ftype, duration, outcome, band=BAND_60, channel=None, rate=0):
        ftype = ftype.value if isinstance(ftype, FrameType) else str(ftype)
        channel = self.ch60 if channel is None else channel
        self.trace.append((int(t), station, peer, ftype, int(duration), outcome, band,
                           int(channel), int(rate)))
        self.metrics.frames[ftype] = self.metrics.frames.get(ftype, 0) + 1

    def bi_of(self, t):
        return t // self.bi_ns, (t % self.bi_ns) / 1000.0

    def awake(self, station, t0, t1) -> bool:
        """Station awake over the whole interval [t0, t1)."""
        st = self.ps_status[station]
        if st.mode != POWER_SAVE:
            return True
        bi0, off0 = self.bi_of(t0)
        bi1, off1 = self.bi_of(max(t0, t1 - 1))
        return bi0 == bi1 and st.awake_at(bi0, off0) and st.awake_at(bi1, off1)

    def link_ok(self, fs, mcs) -> bool:
        cfg = fs.cfg
        snr = cfg.snr_db if cfg.snr_db is not None else self.sc.link_snr_db
        ok = snr >= self.sc.thresholds[mcs]
        if cfg.loss > 0:
            ok = (self.rngs[cfg.src].random() >= cfg.loss) and ok
        return ok

    def new_frame(self, fs, t) -> Frame | None:
        cfg = fs.cfg
        if cfg.count is not None and fs.stats.offered >= cfg.count:
            return None
        fr = Frame(cfg.name, fs.next_seq, t)
        fs.next_seq += 1
        fs.stats.offered += 1
        return fr

    def top_up(self, fs, t, need):
        if not fs.cfg.saturated:
            return
        q = self.flow_queue(fs)
        have = sum(1 for fr in q if fr.flow == fs.cfg.name) if fs.cfg.alloc in self.cbap_stations else len(q)
        while have < need:
            fr = self.new_frame(fs, t)
            if fr is None:
                return
            self.enqueue(fs, fr, t)
            have += 1

    def flow_queue(self, fs):
        if fs.cfg.alloc in self.cbap_stations:
            return self.edca[fs.cfg.src].acs[self.edca[fs.cfg.src]._map(fs.cfg.ac)].queue
        return fs.queue

    def enqueue(self, fs, fr, t):
        q = self.flow_queue(fs)
        if not q:
            fs.hol_ns = t
            if fs.cfg.alloc in self.cbap_stations:
                self.hol[(fs.cfg.src, self.edca[fs.cfg.src]._map(fs.cfg.ac))] = t
        q.append(fr)

    def batch_size(self, fs):
        return fs.cfg.n_subframes if fs.cfg.policy == "ampdu" else 1

    def exchange_times(self, fs, n, mcs):
        """(t_data, total) in ns for a data exchange of ``n`` MPDUs."""
        cfg = fs.cfg
        if cfg.policy == "ampdu" and n > 1:
            t_data = ppdu_duration_ns(mcs, ampdu_length(cfg.payload, n))
            return t_data, t_data + 3 * self.sifs + self.t_bar + self.t_ba
        if cfg.policy == "ampdu":
            t_data = ppdu_duration_ns(mcs, ampdu_length(cfg.payload, 1))
        else:
            t_data = ppdu_duration_ns(mcs, cfg.payload + MPDU_OVERHEAD)
        return t_data, t_data + 2 * self.sifs + self.t_ack

    def take_batch(self, fs, q):
        n = self.batch_size(fs)
        out = []
        for fr in q:
            if fr.flow != fs.cfg.name:
                if out:
                    break
                continue
            if out and fr.seq - out[0].seq >= WINDOW:
                break
            out.append(fr)
            if len(out) == n:
                break
        return out

    def emit_exchange(self, t, fs, batch, mcs, t_data, ok, band=BAND_60, channel=None):
        cfg = fs.cfg
        rate = _rate(mcs)
        n_ok = sum(ok)
        outcome = "ok" if n_ok == len(batch) else ("lost" if n_ok == 0 else "partial")
        self.log(t, cfg.src, cfg.dst, FrameType.DATA, t_data, outcome, band, channel, rate)
        t1 = t + t_data + self.sifs
        if cfg.policy == "ampdu" and len(batch) > 1:
            self.log(t1, cfg.src, cfg.dst, FrameType.BAR, self.t_bar, "ok", band, channel, _rate(0))
            t2 = t1 + self.t_bar + self.sifs
            self.log(t2, cfg.dst, cfg.src, FrameType.BA, self.t_ba, f"{n_ok}/{len(batch)}",
                     band, channel, _rate(0))
        elif n_ok:
            self.log(t1, cfg.dst, cfg.src, FrameType.ACK, self.t_ack, "ok", band, channel, _rate(0))

    def settle(self, fs, q, batch, ok, t_end):
        """Account delivered/lost frames of a completed exchange (non-EDCA queues)."""
        gone = set()
        for fr, good in zip(batch, ok):
            if good:
                fs.stats.delivered += 1
                fs.stats.delivered_octets += fs.cfg.payload
                gone.add(id(fr))
            else:
                fr.retries += 1
                if fr.retries > self.sc.retry_limit:
                    fs.stats.dropped += 1
                    gone.add(id(fr))
        if gone:
            head = q[0] if q else None
            kept = [fr for fr in q if id(fr) not in gone]
            q.clear()
            q.extend(kept)
            if q and q[0] is not head:
                fs.hol_ns = t_end

    # -- beacon interval -------------------------------------------------------

    def on_bi(self, t, bi):
        self.q.push(t + self.bi_ns, "bi_boundary", self.on_bi, bi + 1)
        for k, b in enumerate(self.beacons.get(bi, [])):
            tb = t + k * (self.t_beacon + SBIFS_NS) + int(b.start_delay_us * 1000)
            self.q.push(tb, "frame_tx_start", self.tx_beacon, b)
        bti_end = t + self.sched.bti * 1000
        if self.sched.abft is not None:
            self.q.push(bti_end, "timer_expiry", self.on_abft, bi)
        if self.sched.ati:
            self.q.push(bti_end + self.sched.abft_duration * 1000, "timer_expiry", self.on_ati, bi)
        for a in self.sched.allocations:
            start = t + a.start * 1000
            if a.kind == SP:
                self.q.push(start, "timer_expiry", self.sp_start, a, start + a.duration * 1000)
            else:
                self.q.push(start, "timer_expiry", self.cbap_start, a, start + a.duration * 1000)
        for n in self.names:
            st = self.ps_status[n]
            if st.mode == POWER_SAVE and st.wakeup_schedule.awake_bi(bi):
                ws = st.wakeup_schedule
                self.q.push(t + ws.window_start_us * 1000, "timer_expiry", self.ps_release, n, bi)

    def tx_beacon(self, t, b):
        self.log(t, self.pcp, "broadcast", FrameType.BEACON, self.t_beacon,
                 f"a{b.antenna}s{b.sector}c{b.cdown}", rate=_rate(0))
        self.metrics.stations[self.pcp].beacons += 1

    def channel_to(self, station) -> SectorChannel:
        pcp, sta = self.sc.stations[self.pcp], self.sc.stations[station]
        shape = (pcp.antennas, pcp.sectors, sta.antennas, sta.sectors)
        if self._sector_channel is not None and self._sector_channel.gain_db.shape == shape:
            return self._sector_channel
        return SectorChannel.random(self.rngs[station], *shape)

    def on_abft(self, t, bi):
        pending = [n for n in self.names if n != self.pcp and n not in self.trained]
        if not pending:
            return
        slots, slot_us = self.sched.abft
        outcomes = a_bft_access(pending, slots, self.rngs[self.pcp])
        for n in sorted(pending, key=lambda s: (outcomes[s].slot, s)):
            o = outcomes[n]
            ts = t + o.slot * slot_us * 1000
            outcome = "collision"
            if o.success:
                try:
                    sls = run_sls(self.channel_to(n), self.pcp, n)
                    self.metrics.stations[n].bf_messages += sls.message_count
                    self.trained.add(n)
                    outcome = "success"
                except LinkFailure:
                    outcome = "link_failure"
            self.log(ts, n, self.pcp, FrameType.SSW, slot_us * 1000, outcome, rate=_rate(0))

    def on_ati(self, t, bi):
        limit = t + self.sched.ati * 1000
        for n in self.names:
            if n == self.pcp:
                continue
            if t + self.t_mgmt > limit:
                break
            self.log(t, self.pcp, n, FrameType.ANNOUNCE, self.t_mgmt, "ok", rate=_rate(0))
            # the announcement carries the wakeup schedules of dozing stations
            for peer in self.names:
                if peer != n and self.ps_status[peer].mode == POWER_SAVE:
                    self.ps_buffers[n].learn(peer, self.ps_status[peer])
            t += self.t_mgmt + SBIFS_NS

    # -- service periods -------------------------------------------------------

    def sp_start(self, t, alloc, end):
        self.sp_state[alloc.alloc_id] = {"end": end, "busy": False}
        self.sp_next(t, alloc)

    def sp_next(self, t, alloc):
        state = self.sp_state.get(alloc.alloc_id)
        if state is None or state["busy"]:
            return
        end = state["end"]
        for fs in self.alloc_flows.get(alloc.alloc_id, []):
            self.top_up(fs, t, self.batch_size(fs))
            batch = self.take_batch(fs, fs.queue)
            if not batch:
                continue
            mcs = fs.cfg.mcs
            t_data, total = self.exchange_times(fs, len(batch), mcs)
            if t + total > end:
                continue
            if not (self.awake(fs.cfg.dst, t, t + total) and self.awake(fs.cfg.src, t, t + total)):
                continue
            ok = [self.link_ok(fs, mcs) for _ in batch]
            self.emit_exchange(t, fs, batch, mcs, t_data, ok)
            state["busy"] = True
            self.q.push(t + total, "frame_rx_end", self.sp_done, alloc, fs, batch, ok, total)
            return
        if t >= end:
            self.sp_state.pop(alloc.alloc_id, None)

    def sp_done(self, t, alloc, fs, batch, ok, total):
        fs.stats.busy_ns += total
        fs.stats.grants += 1
        self.settle(fs, fs.queue, batch, ok, t)
        self.sp_state[alloc.alloc_id]["busy"] = False
        self.sp_next(t, alloc)

    # -- contention-based access -----------------------------------------------

    def cbap_start(self, t, alloc, end):
        for st in self.cbap_stations[alloc.alloc_id]:
            self.edca[st].medium_busy()
        self.q.push(t + self.slot, "slot_boundary", self.cbap_slot, alloc, end)

    def cbap_flows(self, alloc, station):
        return [fs for fs in self.alloc_flows[alloc.alloc_id] if fs.cfg.src == station]

    def cbap_slot(self, t, alloc, end):
        if t >= end:
            return
        stations = self.cbap_stations[alloc.alloc_id]
        for st in stations:
            for fs in self.cbap_flows(alloc, st):
                self.top_up(fs, t, self.batch_size(fs))
        grants = {}
        for st in stations:
            edca = self.edca[st]
            heads = {ac: (s.queue[0] if s.queue else None) for ac, s in edca.acs.items()}
            ac = edca.slot_tick(False)
            # internal collisions may have dropped the losers' head frames
            for a, head in heads.items():
                s = edca.acs[a]
                if head is not None and a != ac and (not s.queue or s.queue[0] is not head):
                    self.flows[head.flow].stats.dropped += 1
                    if s.queue:
                        self.hol[(st, a)] = t
            if ac is not None:
                grants[st] = ac
        if not grants:
            self.q.push(t + self.slot, "slot_boundary", self.cbap_slot, alloc, end)
            return

        plans = {}
        for st, ac in grants.items():
            q = self.edca[st].acs[ac].queue
            fs = self.flows[q[0].flow]
            batch = self.take_batch(fs, q)
            t_data, total = self.exchange_times(fs, len(batch), fs.cfg.mcs)
            plans[st] = (ac, fs, q, batch, t_data, total)
        if any(t + p[5] > end for p in plans.values()):
            # the exchange would overrun the CBAP; contention resumes next time
            return
        for st in stations:
            if st not in grants:
                self.edca[st].slot_tick(True)

        if len(plans) == 1:
            (st, (ac, fs, q, batch, t_data, total)), = plans.items()
            if not self.awake(fs.cfg.dst, t, t + total):
                self.edca[st].cw_on_success(ac)
                self.q.push(t + self.slot, "slot_boundary", self.cbap_slot, alloc, end)
                return
            fs.stats.grants += 1
            fs.stats.delays_ns.append(t - self.hol.get((st, ac), t))
            ok = [self.link_ok(fs, fs.cfg.mcs) for _ in batch]
            self.emit_exchange(t, fs, batch, fs.cfg.mcs, t_data, ok)
            busy = total
        else:
            ok_map = {}
            for st, (ac, fs, q, batch, t_data, total) in sorted(plans.items()):
                self.log(t, st, fs.cfg.dst, FrameType.DATA, t_data, "collision",
                         rate=_rate(fs.cfg.mcs))
                ok_map[st] = [False] * len(batch)
            busy = max(p[4] for p in plans.values()) + 2 * self.sifs + self.t_ack
        self.q.push(t + busy, "frame_rx_end", self.cbap_done, alloc, end, plans,
                    ok if len(plans) == 1 else ok_map, busy)

    def cbap_done(self, t, alloc, end, plans, ok, busy):
        for st, (ac, fs, q, batch, t_data, total) in sorted(plans.items()):
            good = ok if len(plans) == 1 else ok[st]
            edca = self.edca[st]
            if len(plans) == 1:
                fs.stats.busy_ns += total
            head = q[0]
            if any(good):
                edca.cw_on_success(ac)
            else:
                if edca.cw_on_failure(ac):
                    fs.stats.dropped += 1
                    batch = [fr for fr in batch if fr is not head]
                    good = [False] * len(batch)
            self.settle(fs, q, batch, good, t)
            if q and q[0] is not head:
                self.hol[(st, ac)] = t
        for st in self.cbap_stations[alloc.alloc_id]:
            self.edca[st].medium_busy()
        self.q.push(t + self.slot, "slot_boundary", self.cbap_slot, alloc, end)

    # -- traffic arrivals --------------------------------------------------------

    def arrival(self, t, fs):
        cfg = fs.cfg
        fr = self.new_frame(fs, t)
        if fr is None:
            return
        self.q.push(t + cfg.interval_us * 1000, "timer_expiry", self.arrival, fs)
        if self.ps_status[cfg.dst].mode == POWER_SAVE:
            buf = self.ps_buffers[cfg.src]
            bi, off = self.bi_of(t)
            verdict = buf.deliver_or_buffer(fr, cfg.dst, bi, off)
            if verdict == INFO_REQUEST:
                self.log(t, cfg.src, cfg.dst, "INFO_REQ", self.t_mgmt, "sent", rate=_rate(0))
                self.log(t + self.t_mgmt + self.sifs, cfg.dst, cfg.src, "INFO_RESP", self.t_mgmt,
                         "ok", rate=_rate(0))
                buf.learn(cfg.dst, self.ps_status[cfg.dst])
                return
            if verdict == BUFFERED:
                return
        self.enqueue(fs, fr, t)
        self.kick(t, fs)

    def kick(self, t, fs):
        if fs.cfg.alloc is not None and fs.cfg.alloc in self.sp_state:
            alloc = self.sched.get(fs.cfg.alloc)
            self.sp_next(t, alloc)
        elif fs.cfg.alloc is None:
            self.pipe_next(t, fs)

    def ps_release(self, t, station, bi):
        off = (t % self.bi_ns) / 1000.0
        for src in self.names:
            frames = self.ps_buffers[src].release(station, bi, off)
            for fr in frames:
                fs = self.flows[fr.flow]
                self.enqueue(fs, fr, t)
        for fs in self.flows.values():
            if fs.cfg.dst == station:
                self.kick(t, fs)

    def ps_enter(self, t, station):
        cfg = self.sc.stations[station]
        self.log(t, station, self.pcp, FrameType.PS_CONFIG_REQ, self.t_mgmt, "sent", rate=_rate(0))
        t_ack = t + self.t_mgmt + self.sifs
        self.q.push(t_ack, "frame_tx_start", self.ps_ack, station, cfg.ps)

    def ps_ack(self, t, station, schedule):
        self.log(t, self.pcp, station, FrameType.ACK, self.t_ack, "ok", rate=_rate(0))
        status = ps_transition(self.ps_status[station], ENTER_PS, schedule, ack_received=True)
        self.ps_status[station] = status
        self.ps_enter_ns[station] = t + self.t_ack
        self.ps_buffers[self.pcp].learn(station, status)

    # -- legacy-band pipes and FST-managed streams --------------------------------

    def pipe_link(self, fs):
        """(channel, rate_bps, mcs) currently serving ``fs``, or None while paused."""
        cfg = fs.cfg
        if cfg.name not in self.fst_flows:
            prof = [p for p in self.sc.bands if p.band == cfg.band]
            ch = prof[0].channels[0] if prof else 0
            return Channel(cfg.band, ch), cfg.rate_bps, None
        sess = self.fst
        if sess.state == TRANSITIONED and cfg.name in sess.moved:
            return None
        ch = sess.channel_of(cfg.name)
        step = self.profiles[ch.band].step_at(self.distance)
        if step is None:
            return None
        return ch, step[1], step[2]

    def pipe_next(self, t, fs):
        if fs.busy:
            return
        self.top_up(fs, t, 1)
        if not fs.queue:
            return
        link = self.pipe_link(fs)
        if link is None:
            return
        ch, rate, mcs = link
        cfg = fs.cfg
        fr = fs.queue[0]
        if ch.band == BAND_60:
            mcs = cfg.mcs if mcs is None else mcs
            t_data, total = self.exchange_times(fs, 1, mcs)
            bi, off = self.bi_of(t)
            dti = self.sched.dti_start * 1000
            bi_start = bi * self.bi_ns
            if t < bi_start + dti:
                self.q.push(bi_start + dti, "timer_expiry", self.pipe_next, fs)
                return
            if t + total > bi_start + self.bi_ns:
                self.q.push(bi_start + self.bi_ns + dti, "timer_expiry", self.pipe_next, fs)
                return
            ok = [self.link_ok(fs, mcs)]
            self.emit_exchange(t, fs, [fr], mcs, t_data, ok, ch.band, ch.number)
        else:
            total = math.ceil((cfg.payload + MPDU_OVERHEAD) * 8e9 / rate)
            ok = [True]
            self.log(t, cfg.src, cfg.dst, FrameType.DATA, total, "ok", ch.band, ch.number, rate)
        fs.busy = True
        self.q.push(t + total, "frame_rx_end", self.pipe_done, fs, fr, ok, total)

    def pipe_done(self, t, fs, fr, ok, total):
        fs.busy = False
        fs.stats.busy_ns += total
        fs.stats.grants += 1
        self.settle(fs, fs.queue, [fr], ok, t)
        self.pipe_next(t, fs)

    def _init_fst(self):
        sc = self.sc
        self.fst_flows = set(sc.fst.flows)
        first = sc.flows[sc.fst.flows[0]]
        self.fst_pair = (first.src, first.dst)
        self.profiles = {p.band: p for p in sc.bands}
        self.distance = sc.mobility.distance(0)
        choice = band_select(sc.bands, self.distance, sc.fst.congested)
        self.fst = FstSession(choice.channel, streams=set(sc.fst.flows))
        self.fst_loss = iter(sc.fst.ack_loss)
        self.fst_busy = False

    def fst_current(self) -> Channel:
        return self.fst.new if self.fst.state == ACK_CONFIRMED else self.fst.old

    def mgmt_rate(self, ch: Channel) -> int:
        if ch.band == BAND_60:
            return _rate(0)
        prof = self.profiles[ch.band]
        return int(round(prof.rate_at(self.distance) or prof.steps[-1][1]))

    def mgmt_ns(self, ch: Channel) -> int:
        if ch.band == BAND_60:
            return self.t_mgmt
        return math.ceil(MGMT_OCTETS * 8e9 / self.mgmt_rate(ch))

    def fst_log(self, t, event, ch):
        self.metrics.fst_log.append((int(t), event, ch.band, ch.number))

    def on_mobility(self, t):
        self.distance = self.sc.mobility.distance(t)
        self.q.push(t + self.sc.mobility.update_us * 1000, "mobility_update", self.on_mobility)
        try:
            choice = band_select(self.sc.bands, self.distance, self.sc.fst.congested)
        except NoLink:
            choice = None
        if (choice is not None and not self.fst_busy and choice.channel != self.fst_current()
                and self.fst.state in (IDLE, SETUP, ACK_CONFIRMED)):
            self.fst_begin(t, choice.channel)
        for name in sorted(self.fst_flows):
            self.pipe_next(t, self.flows[name])

    def fst_begin(self, t, target):
        a, b = self.fst_pair
        self.fst_busy = True
        self.fst.request_setup(target)
        old = self.fst.old
        d = self.mgmt_ns(old)
        self.log(t, a, b, FrameType.FST_SETUP_REQ, d, "sent", old.band, old.number, self.mgmt_rate(old))
        self.fst_log(t, "setup_request", old)
        self.q.push(t + d + self.sifs, "frame_tx_start", self.fst_respond)

    def fst_respond(self, t):
        a, b = self.fst_pair
        old = self.fst.old
        d = self.mgmt_ns(old)
        switch_at = t + d + self.sc.fst.switch_delay_us * 1000
        self.fst.respond_setup(switch_at)
        self.log(t, b, a, FrameType.FST_SETUP_RESP, d, "sent", old.band, old.number, self.mgmt_rate(old))
        self.fst_log(t, "setup_response", old)
        self.q.push(switch_at, "timer_expiry", self.fst_switch)

    def fst_switch(self, t):
        a, b = self.fst_pair
        self.fst.switch()
        new = self.fst.new
        self.log(t, a, b, "FST_SWITCH", 0, "switch", new.band, new.number)
        self.fst_log(t, "switch", new)
        self.q.push(t, "frame_tx_start", self.fst_ack, 0)

    def fst_ack(self, t, attempt):
        a, b = self.fst_pair
        new = self.fst.new
        d = self.mgmt_ns(new)
        lost = next(self.fst_loss, False)
        self.log(t, a, b, FrameType.FST_ACK_REQ, d, "lost" if lost else "sent", new.band, new.number,
                 self.mgmt_rate(new))
        outcome = self.fst.ack_attempt(lost)
        if outcome == "confirmed":
            self.log(t + d + self.sifs, b, a, FrameType.FST_ACK_RESP, d, "ok", new.band, new.number,
                     self.mgmt_rate(new))
            self.fst_log(t, "ack_confirmed", new)
            self.fst_busy = False
            resume = t + 2 * (d + self.sifs)
        elif outcome == "retry":
            self.q.push(t + 2 * (d + self.sifs), "frame_tx_start", self.fst_ack, attempt + 1)
            return
        else:
            old = self.fst.old
            self.log(t + 2 * (d + self.sifs), a, b, "FST_ROLLBACK", 0, "rollback", old.band, old.number)
            self.fst_log(t, "rollback", old)
            self.fst_busy = False
            resume = t + 2 * (d + self.sifs)
        for name in sorted(self.fst_flows):
            self.q.push(resume, "timer_expiry", self.pipe_next, self.flows[name])

    # -- main loop -------------------------------------------------------------

    def setup(self):
        sc = self.sc
        self.t_beacon = ppdu_duration_ns(0, sc.beacon_octets)
        per_bti = (self.sched.bti * 1000) // (self.t_beacon + SBIFS_NS)
        n_bi = max(1, -(-self.end // self.bi_ns))
        self.beacons = {}
        if per_bti > 0:
            pcp = sc.stations[self.pcp]
            plan = beacon_txss([pcp.sectors] * pcp.antennas, per_bti, n_bi)
            for b in plan:
                self.beacons.setdefault(b.bi, []).append(b)
        self.q.push(0, "bi_boundary", self.on_bi, 0)
        for name, fs in self.flows.items():
            if not fs.cfg.saturated:
                self.q.push(0, "timer_expiry", self.arrival, fs)
            elif fs.cfg.alloc is None:
                self.q.push(0, "timer_expiry", self.pipe_next, fs)
        for n in self.names:
            st = sc.stations[n]
            if st.ps is not None and n != self.pcp:
                self.q.push(st.ps_enter_us * 1000, "timer_expiry", self.ps_enter, n)
        if self.fst is not None:
            self.q.push(0, "mobility_update", self.on_mobility)

    def run(self) -> RunResult:
        self.setup()
        while self.q:
            t, kind, handler, args = self.q.pop()
            if t >= self.end:
                break
            handler(t, *args)
        self.finish()
        # responses are logged when their exchange starts; order rows by time
        self.trace.sort(key=lambda row: row[0])
        return RunResult(self.metrics, self.trace)

    def finish(self):
        counts = {name: 0 for name in self.flows}
        for fs in self.flows.values():
            for fr in fs.queue:
                counts[fr.flow] += 1
        for edca in self.edca.values():
            for st in edca.acs.values():
                for fr in st.queue:
                    counts[fr.flow] += 1
        for buf in self.ps_buffers.values():
            for q in buf.queues.values():
                for fr in q:
                    counts[fr.flow] += 1
        for name, c in counts.items():
            self.flows[name].stats.in_flight = c
        for n in self.names:
            self.metrics.stations[n].doze_fraction = self.doze_fraction(n)

    def doze_fraction(self, station) -> float:
        st = self.ps_status[station]
        if st.mode != POWER_SAVE or station not in self.ps_enter_ns:
            return 0.0
        ws = st.wakeup_schedule
        t0 = self.ps_enter_ns[station]
        doze = 0
        for bi in range(t0 // self.bi_ns, -(-self.end // self.bi_ns)):
            lo = max(bi * self.bi_ns, t0)
            hi = min((bi + 1) * self.bi_ns, self.end)
            if hi <= lo:
                continue
            awake = 0
            if ws.awake_bi(bi):
                w0 = bi * self.bi_ns + ws.window_start_us * 1000
                w1 = w0 + ws.window_us * 1000
                awake = max(0, min(hi, w1) - max(lo, w0))
            doze += (hi - lo) - awake
        return doze / self.end


def run(scenario, seed: int | None = None) -> RunResult:
    """Simulate ``scenario`` (a :class:`Scenario`, file path or shipped name)."""
    sc = copy.deepcopy(as_scenario(scenario))
    if seed is not None:
        sc.seed = int(seed)
    return Simulator(sc).run()

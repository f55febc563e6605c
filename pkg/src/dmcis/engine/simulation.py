"""The discrete-event run loop driving all four levels.

One Simulation owns every piece of mutable state of a run: SDCC
stations, MAP carriers, channel pools, DPC stations, the CDC and the DCC.
The Scenario it reads is immutable and may be shared across runs.
"""

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Any, Callable, Optional

from dmcis.analysis import apply_collapse, validate_topology
from dmcis.core.logging import get_logger
from dmcis.core.models import (
    BundleStatus,
    DataBundle,
    Direction,
    GeoPoint,
    HazardEvent,
    MobilityMode,
    ProcessedReport,
    Scenario,
    SensorNode,
    ValidationReport,
    Verdict,
    holder_key,
)
from dmcis.decision import (
    CentralDataCenter,
    CommandCenter,
    ResponseRequest,
    bypass_emergency,
    disseminate_sms,
)
from dmcis.engine.events import EventKind, EventQueue
from dmcis.engine.metrics import Metrics, collect_metrics
from dmcis.engine.rng import RandomStreams
from dmcis.engine.trace import TRACE_SCHEMA_VERSION, TraceRecorder
from dmcis.mule import (
    Blocked,
    ChannelPool,
    MapCarrier,
    MapMotion,
    TransferLedger,
    detect_contact,
    direct_transfer,
    form_session,
    step_mobility,
    transfer,
    transfer_duration,
)
from dmcis.processing import (
    CoverageModel,
    DpcStation,
    ProcessingError,
    ProcessingJob,
    RoundRobinPartitioner,
    check_confidence,
    process_batch,
    reprocess,
)
from dmcis.sensing import SdccStation, cluster_topology, generate_readings

logger = get_logger("engine")

K = EventKind

DEFERRED_MAP_FULL = "map_buffer_full"


class ValidationFailed(Exception):
    """Raised when a run is requested on a topology with ERROR findings."""

    def __init__(self, report: ValidationReport) -> None:
        self.report = report
        first = report.errors[0]
        super().__init__(
            f"Topology failed validation with {len(report.errors)} error(s); "
            f"first: {first.label()} {first.message}"
        )


@dataclass
class SimulationResult:
    """Everything a finished run produced."""
    scenario: str
    seed: int
    horizon: float
    trace: TraceRecorder
    metrics: Metrics
    bundles: dict[int, DataBundle]
    validation: ValidationReport

    @property
    def records(self) -> list[dict[str, Any]]:
        return self.trace.records

    @property
    def digest(self) -> str:
        return self.trace.digest()

    def bundle_counts(self) -> dict[str, int]:
        counts = Counter(b.status.value for b in self.bundles.values())
        result = {status.value: counts.get(status.value, 0) for status in BundleStatus}
        result["created"] = len(self.bundles)
        return result


class Simulation:
    """A single deterministic run of a scenario.

    Example:
        >>> result = Simulation(scenario, seed=7).run()
        >>> result.metrics.delivery_ratio
    """

    def __init__(
        self,
        scenario: Scenario,
        seed: Optional[int] = None,
        horizon: Optional[float] = None,
    ) -> None:
        self.scenario = scenario
        self.settings = scenario.settings
        self.seed = self.settings.seed if seed is None else seed
        self.horizon = self.settings.horizon if horizon is None else float(horizon)
        if self.horizon < 0:
            raise ValueError("horizon must be >= 0")

        topology = apply_collapse(cluster_topology(scenario.topology))
        self.validation = validate_topology(topology)
        if not self.validation.ok:
            raise ValidationFailed(self.validation)
        self.topology = topology
        self.config = topology.cdc_dcc

        self.queue = EventQueue()
        self.trace = TraceRecorder()
        self.streams = RandomStreams(self.seed)
        self.ledger = TransferLedger()
        self.bundles: dict[int, DataBundle] = {}
        self._batch_ids = itertools.count(1)
        self._bundle_ids = itertools.count(1)
        self._report_ids = itertools.count(1)
        self._tokens = itertools.count(1)
        self._collecting: set[int] = set()
        self._bypassed: set[int] = set()

        self._build()
        self._handlers: dict[EventKind, Callable[..., None]] = {
            K.HAZARD: self._on_hazard,
            K.WINDOW: self._on_window,
            K.MOBILITY: self._on_mobility,
            K.TRANSFER_DONE: self._on_transfer_done,
            K.DIRECT_ARRIVAL: self._on_direct_arrival,
            K.DPC_ARRIVAL: self._on_dpc_arrival,
            K.DPC_DONE: self._on_dpc_done,
            K.REPLICA: self._on_replica,
            K.CDC_ARRIVAL: self._on_cdc_arrival,
            K.DCC_REQUEST: self._on_dcc_request,
            K.BYPASS: self._on_bypass,
        }

    # ------------------------------------------------------------------ setup

    def _build(self) -> None:
        topology = self.topology
        self.hazards: dict[int, HazardEvent] = {h.hazard_id: h for h in self.scenario.hazards}
        self.positions: dict[str, GeoPoint] = {}
        self.pools: dict[str, ChannelPool] = {}

        self.sensors_by_sdcc: dict[int, list[SensorNode]] = {s.sdcc_id: [] for s in topology.iter_sdccs()}
        for sensor in topology.iter_sensors():
            self.sensors_by_sdcc[sensor.assigned_sdcc].append(sensor)

        self.sdcc_stations: dict[int, SdccStation] = {}
        self.outbox: dict[int, list[DataBundle]] = {}
        for sdcc in sorted(topology.iter_sdccs(), key=lambda s: s.sdcc_id):
            assigned = {s.sensor_id for s in self.sensors_by_sdcc[sdcc.sdcc_id]}
            self.sdcc_stations[sdcc.sdcc_id] = SdccStation(sdcc, assigned, self.settings.reading_bytes)
            self.outbox[sdcc.sdcc_id] = []
            key = holder_key("sdcc", sdcc.sdcc_id)
            self.positions[key] = sdcc.position
            self.pools[key] = ChannelPool(key, sdcc.link)

        self.dpc_stations: dict[int, DpcStation] = {}
        for dpc in sorted(topology.iter_dpcs(), key=lambda d: d.dpc_id):
            self.dpc_stations[dpc.dpc_id] = DpcStation(dpc)
            key = holder_key("dpc", dpc.dpc_id)
            self.positions[key] = dpc.position
            self.pools[key] = ChannelPool(key, dpc.link)

        self.carriers: dict[int, MapCarrier] = {}
        self.endpoints: dict[int, list[str]] = {}
        for map_unit in sorted(topology.iter_maps(), key=lambda m: m.map_id):
            rng = None
            if map_unit.mobility is MobilityMode.RANDOM_WAYPOINT:
                rng = self.streams.stream("map", map_unit.map_id)
            self.carriers[map_unit.map_id] = MapCarrier(MapMotion(map_unit, rng))
            keys = [
                holder_key("sdcc", s) for s in map_unit.sdccs
                if s in self.sdcc_stations and self.sdcc_stations[s].sdcc.collapsed_with is None
            ]
            keys += [holder_key("dpc", d) for d in map_unit.dpcs if d in self.dpc_stations]
            self.endpoints[map_unit.map_id] = sorted(set(keys))

        self.partitioner = RoundRobinPartitioner(
            {r.region_id: [d.dpc_id for d in r.dpcs] for r in topology.regions}
        )
        self.coverage = CoverageModel(
            assignment={s.sensor_id: s.assigned_sdcc for s in topology.iter_sensors()},
            live={s.sdcc_id: topology.live_sensor_count(s.sdcc_id) for s in topology.iter_sdccs()},
        )
        self.cdc = CentralDataCenter(
            self.config.reference_db,
            self.config.match_threshold,
            self.config.escalate_unmatched,
        )
        self.dcc = CommandCenter(self.config, self.settings.internet_latency)

    def _schedule_initial(self) -> None:
        for hazard in sorted(self.hazards.values(), key=lambda h: (h.onset_time, h.hazard_id)):
            if hazard.onset_time < self.horizon:
                self.queue.schedule(hazard.onset_time, K.HAZARD, {"hazard_id": hazard.hazard_id})
        for sdcc_id, station in self.sdcc_stations.items():
            if station.sdcc.window < self.horizon:
                self.queue.schedule(station.sdcc.window, K.WINDOW, {"sdcc_id": sdcc_id, "k": 1})
        if self.carriers:
            self.queue.schedule(0.0, K.MOBILITY, {"k": 0})

    # ------------------------------------------------------------------- loop

    @property
    def now(self) -> float:
        return self.queue.now

    def _emit(self, kind: EventKind, **fields: Any) -> None:
        self.trace.emit(self.now, kind, **fields)

    def run(self) -> SimulationResult:
        """Advance the clock to the horizon or until the queue drains."""
        logger.info(
            f"Run '{self.scenario.name}' started: seed={self.seed}, horizon={self.horizon}s"
        )
        if self.horizon > 0:
            self._emit(
                K.RUN,
                schema=TRACE_SCHEMA_VERSION,
                scenario=self.scenario.name,
                horizon=self.horizon,
                maps=len(self.carriers),
                sdccs=len(self.sdcc_stations),
                dpcs=len(self.dpc_stations),
            )
            self._schedule_initial()
            while (next_time := self.queue.peek_time()) is not None and next_time < self.horizon:
                event = self.queue.pop()
                self._handlers[event.kind](**event.payload)
            counts = Counter(b.status.value for b in self.bundles.values())
            self.trace.emit(
                self.horizon,
                K.END,
                created=len(self.bundles),
                **{status.value: counts.get(status.value, 0) for status in BundleStatus},
            )

        metrics = collect_metrics(self.trace.records)
        logger.info(
            f"Run '{self.scenario.name}' finished: {len(self.trace)} trace record(s), "
            f"{metrics.bundles_created} bundle(s), {metrics.warnings} warning(s)"
        )
        return SimulationResult(
            scenario=self.scenario.name,
            seed=self.seed,
            horizon=self.horizon,
            trace=self.trace,
            metrics=metrics,
            bundles=self.bundles,
            validation=self.validation,
        )

    # ---------------------------------------------------------------- sensing

    def _on_hazard(self, hazard_id: int) -> None:
        hazard = self.hazards[hazard_id]
        self._emit(
            K.HAZARD,
            hazard=hazard.hazard_id,
            **{"class": hazard.hazard_class.value},
            region=hazard.region,
            magnitude=hazard.magnitude,
            sensors=len(hazard.footprint),
        )

    def _on_window(self, sdcc_id: int, k: int) -> None:
        station = self.sdcc_stations[sdcc_id]
        window = station.sdcc.window
        end = self.now
        station.evict(end)

        hazards = [h for h in self.hazards.values() if h.region == station.sdcc.region]
        readings = generate_readings(
            hazards,
            self.sensors_by_sdcc[sdcc_id],
            end - window,
            end,
            self.streams.sensor,
        )
        for reading in readings:
            station.ingest(reading)
            self._emit(
                K.READING,
                sensor=reading.sensor_id,
                sdcc=sdcc_id,
                value=reading.value,
                truthful=reading.truthful,
                hazard=reading.hazard_id,
            )
        batch = station.evaluate_threshold(end, self._batch_ids)
        if station.exceeding:
            self._emit(
                K.EXCEEDANCE,
                sdcc=sdcc_id,
                window=k,
                sensors=len(station.distinct_sensors()),
                new=batch is not None,
            )
        if batch is not None:
            self._emit_bundle(station, batch)

        following = (k + 1) * window
        if following < self.horizon:
            self.queue.schedule(following, K.WINDOW, {"sdcc_id": sdcc_id, "k": k + 1})

    def _emit_bundle(self, station: SdccStation, batch: Any) -> None:
        sdcc = station.sdcc
        bundle = DataBundle(
            bundle_id=next(self._bundle_ids),
            batches=[batch],
            baseline_snapshots=list(station.emitted_snapshot),
            created_time=self.now,
            urgent=batch.hazard_class_hint in self.config.bypass_classes,
        )
        source = holder_key("sdcc", sdcc.sdcc_id)
        bundle.hand_over(source, self.now)
        self.bundles[bundle.bundle_id] = bundle

        self._emit(
            K.TRIGGER,
            sdcc=sdcc.sdcc_id,
            batch=batch.batch_id,
            sensors=sorted(batch.contributing_sensors),
            readings=len(batch.readings),
            bytes=batch.payload_bytes,
            hint=batch.hazard_class_hint.value,
            truth=batch.truthful_hazards,
        )
        self._emit(
            K.BUNDLE,
            bundle=bundle.bundle_id,
            sdcc=sdcc.sdcc_id,
            batches=list(bundle.batch_ids),
            bytes=bundle.total_bytes,
            urgent=bundle.urgent,
            route="direct" if sdcc.collapsed_with is not None else "map",
        )

        if sdcc.collapsed_with is not None:
            dpc = self.dpc_stations[sdcc.collapsed_with].dpc
            arrival = direct_transfer(sdcc, dpc, bundle, self.now, self.settings.link_efficiency)
            self._emit(
                K.TRANSFER,
                bundle=bundle.bundle_id,
                mode="direct",
                endpoint=holder_key("dpc", dpc.dpc_id),
                bytes=bundle.total_bytes,
                duration=arrival - self.now,
            )
            self.queue.schedule(
                arrival, K.DIRECT_ARRIVAL, {"bundle_id": bundle.bundle_id, "dpc_id": dpc.dpc_id}
            )
            return

        self.outbox[sdcc.sdcc_id].append(bundle)
        for carrier in self.carriers.values():
            if carrier.session is None and source in carrier.contacts:
                self._try_serve(carrier)

    # ------------------------------------------------------------------- mule

    def _on_mobility(self, k: int) -> None:
        step = self.settings.mobility_step
        for carrier in self.carriers.values():
            if k > 0:
                step_mobility(carrier.motion, step)
            self._update_contacts(carrier)
        for key in sorted(self.pools):
            self._serve_waiting(self.pools[key])
        for carrier in self.carriers.values():
            if carrier.session is None:
                self._try_serve(carrier)

        following = (k + 1) * step
        if following < self.horizon:
            self.queue.schedule(following, K.MOBILITY, {"k": k + 1})

    def _update_contacts(self, carrier: MapCarrier) -> None:
        in_range = {
            key for key in self.endpoints[carrier.map_id]
            if detect_contact(carrier.motion, self.positions[key])
        }
        for key in sorted(in_range - carrier.contacts):
            self._emit(K.CONTACT, map=carrier.map_id, endpoint=key, state="enter")
        for key in sorted(carrier.contacts - in_range):
            self._emit(K.CONTACT, map=carrier.map_id, endpoint=key, state="leave")
            self.pools[key].leave(carrier.map_id)
            if carrier.session is not None and carrier.session.endpoint == key:
                self._interrupt(carrier)
        carrier.contacts = in_range

    def _interrupt(self, carrier: MapCarrier) -> None:
        session = carrier.session
        assert session is not None
        if session.bundle_id is not None:
            bundle = self.bundles[session.bundle_id]
            link = self.ledger.link_key(carrier.map_id, session.endpoint)
            prior = self.ledger.sent(bundle.bundle_id, link)
            moved = transfer(session, bundle.total_bytes - prior, self.now - session.bundle_started)
            self.ledger.record(bundle.bundle_id, link, prior + moved)
            if session.direction is Direction.COLLECT:
                self._collecting.discard(bundle.bundle_id)
                carrier.reserved -= bundle.total_bytes
            self._emit(
                K.TRANSFER,
                bundle=bundle.bundle_id,
                mode="adhoc",
                map=carrier.map_id,
                endpoint=session.endpoint,
                state="interrupted",
                sent=prior + moved,
            )
            session.bundle_id = None
        self._close_session(carrier, "contact_lost")

    def _close_session(self, carrier: MapCarrier, reason: str) -> None:
        session = carrier.session
        assert session is not None
        pool = self.pools[session.endpoint]
        pool.release(session.channel)
        carrier.session = None
        self._emit(
            K.SESSION,
            map=carrier.map_id,
            endpoint=session.endpoint,
            direction=session.direction.value,
            channel=session.channel,
            state="close",
            active=pool.active,
            duration=self.now - session.start_time,
            reason=reason,
        )

    def _serve_waiting(self, pool: ChannelPool) -> None:
        while pool.waiting and pool.active < pool.capacity:
            head = pool.waiting[0]
            carrier = self.carriers[head]
            if carrier.session is None and pool.endpoint in carrier.contacts:
                self._try_serve(carrier, prefer=pool.endpoint)
            if pool.next_waiting() == head:
                pool.leave(head)

    def _work_for(self, carrier: MapCarrier, prefer: Optional[str]) -> list[tuple[str, Direction]]:
        work: list[tuple[str, Direction]] = []
        contacts = sorted(carrier.contacts)
        if carrier.cargo:
            work += [(key, Direction.DELIVER) for key in contacts if key.startswith("dpc:")]
        for key in contacts:
            if key.startswith("sdcc:") and self._collect_candidate(carrier, _entity_id(key)):
                work.append((key, Direction.COLLECT))
        if prefer is not None:
            work.sort(key=lambda item: item[0] != prefer)
        return work

    def _collect_candidate(self, carrier: MapCarrier, sdcc_id: int) -> Optional[DataBundle]:
        for bundle in self.outbox[sdcc_id]:
            if bundle.bundle_id in self._collecting:
                continue
            if carrier.fits(bundle):
                return bundle
            if bundle.status is not BundleStatus.DEFERRED:
                bundle.status = BundleStatus.DEFERRED
                bundle.deferred_reason = DEFERRED_MAP_FULL
                self._emit(
                    K.DEFERRED,
                    bundle=bundle.bundle_id,
                    sdcc=sdcc_id,
                    map=carrier.map_id,
                    reason=DEFERRED_MAP_FULL,
                    bytes=bundle.total_bytes,
                    free=carrier.map_unit.buffer_capacity - carrier.used_bytes,
                )
                logger.info(
                    f"Bundle {bundle.bundle_id} deferred at SDCC {sdcc_id}: "
                    f"MAP {carrier.map_id} buffer full"
                )
        return None

    def _try_serve(self, carrier: MapCarrier, prefer: Optional[str] = None) -> bool:
        if carrier.session is not None:
            return False
        for key, direction in self._work_for(carrier, prefer):
            pool = self.pools[key]
            was_waiting = carrier.map_id in pool.waiting
            outcome = form_session(
                carrier.motion, pool, direction, self.now, self.settings.link_efficiency
            )
            if isinstance(outcome, Blocked):
                if not was_waiting:
                    self._emit(
                        K.BLOCKED,
                        map=carrier.map_id,
                        endpoint=key,
                        active=outcome.active,
                        position=outcome.position,
                    )
                return False
            for other in self.pools.values():
                other.leave(carrier.map_id)
            carrier.session = outcome
            self._emit(
                K.SESSION,
                map=carrier.map_id,
                endpoint=key,
                direction=direction.value,
                channel=outcome.channel,
                rate_mbps=outcome.rate_mbps,
                state="open",
                active=pool.active,
            )
            self._start_next_transfer(carrier)
            return True
        return False

    def _start_next_transfer(self, carrier: MapCarrier) -> None:
        session = carrier.session
        assert session is not None
        if session.direction is Direction.DELIVER:
            order = carrier.delivery_order()
            bundle = order[0] if order else None
        else:
            bundle = self._collect_candidate(carrier, _entity_id(session.endpoint))

        if bundle is None:
            pool = self.pools[session.endpoint]
            self._close_session(carrier, "done")
            self._serve_waiting(pool)
            self._try_serve(carrier)
            return

        link = self.ledger.link_key(carrier.map_id, session.endpoint)
        sent = self.ledger.sent(bundle.bundle_id, link)
        remaining = max(0.0, bundle.total_bytes - sent)
        if session.direction is Direction.COLLECT:
            self._collecting.add(bundle.bundle_id)
            carrier.reserved += bundle.total_bytes
        session.bundle_id = bundle.bundle_id
        session.bundle_started = self.now
        session.token = next(self._tokens)
        duration = transfer_duration(remaining, session.rate_mbps)
        self._emit(
            K.TRANSFER,
            bundle=bundle.bundle_id,
            mode="adhoc",
            map=carrier.map_id,
            endpoint=session.endpoint,
            direction=session.direction.value,
            bytes=remaining,
            resumed=sent > 0,
            duration=duration,
        )
        self.queue.schedule(
            self.now + duration,
            K.TRANSFER_DONE,
            {"map_id": carrier.map_id, "token": session.token},
        )

    def _on_transfer_done(self, map_id: int, token: int) -> None:
        carrier = self.carriers[map_id]
        session = carrier.session
        if session is None or session.token != token or session.bundle_id is None:
            return
        bundle = self.bundles[session.bundle_id]
        self.ledger.clear(bundle.bundle_id)
        session.bundle_id = None

        if session.direction is Direction.COLLECT:
            sdcc_id = _entity_id(session.endpoint)
            self.outbox[sdcc_id].remove(bundle)
            self._collecting.discard(bundle.bundle_id)
            carrier.reserved -= bundle.total_bytes
            carrier.load(bundle, self.now)
            self._emit(K.CUSTODY, bundle=bundle.bundle_id, to=carrier.key, **{"from": session.endpoint})
            if bundle.urgent:
                self._schedule_bypass(bundle, carrier.key)
        else:
            carrier.unload(bundle)
            bundle.hand_over(session.endpoint, self.now)
            bundle.status = BundleStatus.DELIVERED
            self._emit(K.CUSTODY, bundle=bundle.bundle_id, to=session.endpoint, **{"from": carrier.key})
            self._emit(K.DELIVERY, bundle=bundle.bundle_id, dpc=_entity_id(session.endpoint), via=carrier.key)
            self._arrive(bundle, _entity_id(session.endpoint))

        self._start_next_transfer(carrier)

    def _on_direct_arrival(self, bundle_id: int, dpc_id: int) -> None:
        bundle = self.bundles[bundle_id]
        source = bundle.holder
        target = holder_key("dpc", dpc_id)
        bundle.hand_over(target, self.now)
        bundle.status = BundleStatus.DELIVERED
        self._emit(K.CUSTODY, bundle=bundle_id, to=target, **{"from": source})
        self._emit(K.DELIVERY, bundle=bundle_id, dpc=dpc_id, via="direct")
        if bundle.urgent:
            self._schedule_bypass(bundle, target)
        self._arrive(bundle, dpc_id)

    # ----------------------------------------------------------------- bypass

    def _schedule_bypass(self, bundle: DataBundle, source: str) -> None:
        if bundle.bundle_id in self._bypassed:
            return
        self._bypassed.add(bundle.bundle_id)
        self.queue.schedule(
            self.now + self.settings.bypass_latency,
            K.BYPASS,
            {"bundle_id": bundle.bundle_id, "source": source},
        )

    def _on_bypass(self, bundle_id: int, source: str) -> None:
        bundle = self.bundles[bundle_id]
        batch = bundle.batches[0]
        holders = [entry.holder for entry in bundle.custody]
        path = tuple(holders[: holders.index(source) + 1])
        dispatch = bypass_emergency(
            dispatch_id=self.dcc.next_dispatch_id(),
            source=source,
            hazard_class=batch.hazard_class_hint,
            area_id=batch.area_id,
            source_batches=bundle.batch_ids,
            path=path,
            bypass_classes=self.config.bypass_classes,
            departments=self.config.departments,
            truth=tuple(sorted({h for b in bundle.batches for h in b.truthful_hazards})),
        )
        if dispatch is not None:
            self._emit(K.DISPATCH, **dispatch.to_dict())
            logger.info(
                f"Bypass dispatch {dispatch.dispatch_id} from {source} "
                f"({dispatch.hazard_class.value}, area {dispatch.area_id})"
            )

    # ------------------------------------------------------------- processing

    def _arrive(self, bundle: DataBundle, dpc_id: int) -> None:
        region = self.dpc_stations[dpc_id].dpc.region
        target = self.partitioner.next_dpc(region)
        path = tuple(entry.holder for entry in bundle.custody)
        if target == dpc_id:
            self._enqueue(target, ProcessingJob(bundle, self.now, path=path))
            return
        self._emit(K.HANDOFF, bundle=bundle.bundle_id, to=target, **{"from": dpc_id})
        self.queue.schedule(
            self.now + self.settings.peer_latency,
            K.DPC_ARRIVAL,
            {"bundle_id": bundle.bundle_id, "dpc_id": target, "path": path + (holder_key("dpc", target),)},
        )

    def _on_dpc_arrival(self, bundle_id: int, dpc_id: int, path: tuple[str, ...]) -> None:
        self._enqueue(dpc_id, ProcessingJob(self.bundles[bundle_id], self.now, path=path))

    def _enqueue(self, dpc_id: int, job: ProcessingJob) -> None:
        station = self.dpc_stations[dpc_id]
        length = station.enqueue(job)
        self._emit(K.QUEUE, dpc=dpc_id, length=length, bundle=job.bundle.bundle_id)
        self._start_service(station)

    def _start_service(self, station: DpcStation) -> None:
        job = station.next_job()
        if job is None:
            return
        self._emit(K.QUEUE, dpc=station.dpc_id, length=len(station.queue), bundle=job.bundle.bundle_id)
        if job.report is not None:
            hazard_class = job.report.hazard_class
        elif job.bundle.batches:
            hazard_class = job.bundle.batches[0].hazard_class_hint
        else:
            hazard_class = None
        service = (
            station.dpc.service_time_for(hazard_class, self.config.bypass_classes)
            if hazard_class is not None else station.dpc.service_time
        )
        self.queue.schedule(
            self.now + service,
            K.DPC_DONE,
            {"dpc_id": station.dpc_id, "job": job, "started": self.now},
        )

    def _on_dpc_done(self, dpc_id: int, job: ProcessingJob, started: float) -> None:
        station = self.dpc_stations[dpc_id]
        station.finish()
        dpc = station.dpc
        settings = self.settings
        try:
            if job.report is None:
                report = process_batch(
                    dpc, job.bundle, self.coverage, next(self._report_ids), self.now,
                    settings.severity_scale,
                )
            else:
                peers = station.peer_reports(job.report.area_id, self.now - settings.merge_lookback)
                report = reprocess(
                    dpc, job.report, peers, self.coverage, self.now,
                    settings.merge_lookback, settings.severity_scale,
                )
                self._emit(
                    K.REPROCESS,
                    dpc=dpc_id,
                    report=report.report_id,
                    count=report.reprocess_count,
                    confidence=report.confidence,
                    peers=len(peers),
                )
        except ProcessingError as e:
            logger.warning(f"DPC {dpc_id}: {e}")
            self._emit(K.PROCESS, dpc=dpc_id, bundle=job.bundle.bundle_id, report=None,
                       started=started, service=self.now - started)
            self._emit(K.VERDICT, dpc=dpc_id, bundle=job.bundle.bundle_id, report=None,
                       verdict=Verdict.REJECT.value, reason=str(e))
            self._start_service(station)
            return

        self._emit(K.PROCESS, dpc=dpc_id, bundle=job.bundle.bundle_id, report=report.report_id,
                   started=started, service=self.now - started)
        verdict = check_confidence(report, dpc)
        self._emit(
            K.VERDICT,
            dpc=dpc_id,
            bundle=job.bundle.bundle_id,
            report=report.report_id,
            verdict=verdict.value,
            confidence=report.confidence,
            reprocess_count=report.reprocess_count,
        )

        if verdict is Verdict.PASS:
            self._pass(station, report, job.path)
        elif verdict is Verdict.REPROCESS:
            length = station.enqueue(
                ProcessingJob(job.bundle, self.now, report=report, path=job.path), urgent=True
            )
            self._emit(K.QUEUE, dpc=dpc_id, length=length, bundle=job.bundle.bundle_id)
        else:
            logger.info(
                f"DPC {dpc_id}: report {report.report_id} rejected at confidence "
                f"{report.confidence:.3f} after {report.reprocess_count} reprocess(es)"
            )
        self._start_service(station)

    def _pass(self, station: DpcStation, report: ProcessedReport, path: tuple[str, ...]) -> None:
        station.forward_to_cdc(report)
        peers = station.replicate(report)
        for peer in peers:
            self.queue.schedule(
                self.now + self.settings.peer_latency,
                K.REPLICA,
                {"dpc_id": peer, "report": report},
            )
        self._emit(K.REPLICATE, dpc=station.dpc_id, report=report.report_id, peers=peers, acks=len(peers))
        self._emit(K.FORWARD, dpc=station.dpc_id, report=report.report_id)
        self.queue.schedule(
            self.now + self.settings.dpc_cdc_latency,
            K.CDC_ARRIVAL,
            {"report": report, "path": path},
        )

    def _on_replica(self, dpc_id: int, report: ProcessedReport) -> None:
        self.dpc_stations[dpc_id].receive_replica(report)

    # --------------------------------------------------------------- decision

    def _on_cdc_arrival(self, report: ProcessedReport, path: tuple[str, ...]) -> None:
        match = self.cdc.receive(report, self.now)
        self._emit(
            K.MATCH,
            report=report.report_id,
            similarity=match.similarity,
            matched=match.matched,
            reference_size=len(self.cdc.reference_db),
        )
        request = self.cdc.request_response(report, match, path + ("cdc",), self.now)
        if request is None:
            self._emit(K.ARCHIVE, report=report.report_id)
            return
        self._emit(K.REQUEST, report=report.report_id, request=request.request_id)
        self.queue.schedule(
            self.now + self.settings.cdc_dcc_latency,
            K.DCC_REQUEST,
            {"request": request},
        )

    def _on_dcc_request(self, request: ResponseRequest) -> None:
        order, dispatch = self.dcc.issue_warning(request, self.now)
        deliveries = disseminate_sms(order, self.dcc.providers_for(order.area_id))
        internet = self.dcc.internet_delivery(order)
        first = min(d.first_delivery for d in deliveries) if deliveries else internet
        self._emit(K.WARNING, **order.to_dict(), first_delivery=first, internet_delivery=internet)
        for delivery in deliveries:
            self._emit(K.SMS, order=order.order_id, **delivery.to_dict())
        self._emit(K.DISPATCH, **dispatch.to_dict())


def _entity_id(key: str) -> int:
    return int(key.split(":", 1)[1])


def run(
    scenario: Scenario,
    seed: Optional[int] = None,
    horizon: Optional[float] = None,
) -> SimulationResult:
    """Validate and run a scenario.

    Raises:
        ValidationFailed: If the topology has ERROR findings
    """
    return Simulation(scenario, seed=seed, horizon=horizon).run()

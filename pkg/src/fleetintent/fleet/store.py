"""Fleet state store over parsed CMAPSS records.

Remaining useful life is ground truth from the data: an engine observed
at cycle c of a life that ends at last_cycle has rul = last_cycle - c.
The observation policy decides where each engine currently sits in its
life; the RUL fixture policy is what makes a reference fleet reproducible.

Concurrency: single writer, many readers. Reads return immutable
snapshots; status mutations serialize on an internal lock and are
atomically visible.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from .cmapss import EngineRecord
from .schema import SENSOR_NAMES, SETTING_NAMES


class EngineStatus(str, Enum):
    RUNNING = "running"
    STOPPED = "stopped"


class UnknownEngine(KeyError):
    def __init__(self, engine_id: int):
        super().__init__(f"unknown engine {engine_id}")
        self.engine_id = engine_id


class UnknownEngineInFixture(ValueError):
    pass


class FixtureRulExceedsLife(ValueError):
    pass


class FixtureIncomplete(ValueError):
    pass


class MalformedFleet(ValueError):
    pass


@dataclass(frozen=True)
class EngineSnapshot:
    engine_id: int
    observed_cycle: int
    last_cycle: int
    rul: int
    op_settings: Mapping[str, float]
    sensors: Mapping[str, float]
    status: EngineStatus

    def metrics(self) -> dict[str, float]:
        """Flat metric map (rul + settings + sensors) for condition checks."""
        out: dict[str, float] = {"rul": float(self.rul)}
        out.update(self.op_settings)
        out.update(self.sensors)
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "engine_id": self.engine_id,
            "observed_cycle": self.observed_cycle,
            "last_cycle": self.last_cycle,
            "rul": self.rul,
            "status": self.status.value,
            "op_settings": dict(self.op_settings),
            "sensors": dict(self.sensors),
        }


@dataclass(frozen=True)
class RulReading:
    engine_id: int
    rul: int
    method: str = "ground_truth"

    def to_dict(self) -> dict[str, Any]:
        return {"engine_id": self.engine_id, "rul": self.rul, "method": self.method}


# --- Observation policies ---------------------------------------------------


@dataclass(frozen=True)
class Latest:
    """Observe every engine at its final recorded cycle (rul 0)."""


@dataclass(frozen=True)
class Fraction:
    """Observe each engine at ceil(f * last_cycle)."""

    f: float

    def __post_init__(self):
        if not (0.0 < self.f <= 1.0):
            raise ValueError(f"fraction must be in (0, 1], got {self.f}")


@dataclass(frozen=True)
class Fixture:
    """Pin each engine's RUL; engines in `stopped` sit at end of life, stopped.

    Every kept engine must appear either in `ruls` or in `stopped`.
    """

    ruls: Mapping[int, int]
    stopped: tuple[int, ...] = ()

    @classmethod
    def from_file(cls, path: Path | str) -> "Fixture":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        ruls = {int(k): int(v) for k, v in doc.get("ruls", {}).items()}
        stopped = tuple(int(i) for i in doc.get("stopped", []))
        return cls(ruls=ruls, stopped=stopped)


ObservationPolicy = Latest | Fraction | Fixture


@dataclass
class _EngineState:
    records: list[EngineRecord]  # sorted by cycle, contiguous 1..last
    observed_cycle: int
    status: EngineStatus = EngineStatus.RUNNING

    @property
    def last_cycle(self) -> int:
        return self.records[-1].cycle


class FleetStore:
    def __init__(self) -> None:
        self._engines: dict[int, _EngineState] = {}
        self._order: list[int] = []
        self._write_lock = threading.Lock()

    @property
    def engine_ids(self) -> list[int]:
        return list(self._order)

    def __len__(self) -> int:
        return len(self._order)

    def _state(self, engine_id: int) -> _EngineState:
        try:
            return self._engines[engine_id]
        except KeyError:
            raise UnknownEngine(engine_id) from None

    def snapshot_at(self, engine_id: int, cycle: int) -> EngineSnapshot:
        state = self._state(engine_id)
        if not (1 <= cycle <= state.last_cycle):
            raise ValueError(f"cycle {cycle} outside engine {engine_id} life 1..{state.last_cycle}")
        record = state.records[cycle - 1]
        return EngineSnapshot(
            engine_id=engine_id,
            observed_cycle=cycle,
            last_cycle=state.last_cycle,
            rul=state.last_cycle - cycle,
            op_settings=dict(zip(SETTING_NAMES, record.op_settings)),
            sensors=dict(zip(SENSOR_NAMES, record.sensors)),
            status=state.status,
        )


def load_fleet(
    records: Iterable[EngineRecord],
    engine_limit: int = 20,
    observation: ObservationPolicy = Latest(),
) -> FleetStore:
    """Group records into a fleet of the first `engine_limit` engines by id.

    Per engine the cycles must form the contiguous sequence 1..last_cycle;
    the observation policy then fixes each engine's observed cycle.
    """
    grouped: dict[int, list[EngineRecord]] = {}
    for record in records:
        grouped.setdefault(record.engine_id, []).append(record)

    kept_ids = sorted(grouped)[:engine_limit] if engine_limit else sorted(grouped)
    store = FleetStore()
    for eid in kept_ids:
        engine_records = sorted(grouped[eid], key=lambda r: r.cycle)
        for expected, record in enumerate(engine_records, start=1):
            if record.cycle != expected:
                raise MalformedFleet(
                    f"engine {eid}: cycles not contiguous at position {expected} (got {record.cycle})"
                )
        state = _EngineState(records=engine_records, observed_cycle=engine_records[-1].cycle)
        store._engines[eid] = state
        store._order.append(eid)

    _apply_observation(store, observation)
    return store


def _apply_observation(store: FleetStore, observation: ObservationPolicy) -> None:
    if isinstance(observation, Latest):
        return
    if isinstance(observation, Fraction):
        for eid in store.engine_ids:
            state = store._engines[eid]
            state.observed_cycle = max(1, math.ceil(observation.f * state.last_cycle))
        return
    if isinstance(observation, Fixture):
        fleet = set(store.engine_ids)
        for eid in list(observation.ruls) + list(observation.stopped):
            if eid not in fleet:
                raise UnknownEngineInFixture(f"fixture names engine {eid}, not in fleet")
        for eid in store.engine_ids:
            state = store._engines[eid]
            if eid in observation.stopped:
                state.observed_cycle = state.last_cycle
                state.status = EngineStatus.STOPPED
            elif eid in observation.ruls:
                rul = observation.ruls[eid]
                if rul < 0 or rul >= state.last_cycle:
                    raise FixtureRulExceedsLife(
                        f"engine {eid}: fixture rul {rul} outside life of {state.last_cycle} cycles"
                    )
                state.observed_cycle = state.last_cycle - rul
            else:
                raise FixtureIncomplete(f"engine {eid} missing from fixture")
        return
    raise TypeError(f"unknown observation policy: {observation!r}")


def get_engine_data(store: FleetStore, engine_id: int) -> EngineSnapshot:
    """Current snapshot for one engine (telemetry stays frozen once stopped)."""
    state = store._state(engine_id)
    return store.snapshot_at(engine_id, state.observed_cycle)


def fleet_snapshots(store: FleetStore, engine_ids: Sequence[int] | None = None) -> list[EngineSnapshot]:
    ids = store.engine_ids if engine_ids is None else list(engine_ids)
    return [get_engine_data(store, eid) for eid in ids]


def predict_engine_rul(store: FleetStore, engine_id: int) -> RulReading:
    """Ground-truth RUL: cycles left between the observed cycle and end of life."""
    state = store._state(engine_id)
    return RulReading(engine_id=engine_id, rul=state.last_cycle - state.observed_cycle)


def set_engine_status(store: FleetStore, engine_id: int, status: EngineStatus) -> FleetStore:
    """Set an engine's status; idempotent, touches only the targeted engine."""
    with store._write_lock:
        state = store._state(engine_id)
        state.status = status
    return store


def fleet_metrics(store: FleetStore) -> dict[int, dict[str, float]]:
    """Metric map per engine, the measurement input to compliance checks."""
    return {eid: get_engine_data(store, eid).metrics() for eid in store.engine_ids}

"""Parser for CMAPSS-format telemetry files.

The format is plain text: one record per line, 26 whitespace-separated
numeric fields (see schema.FIELD_COUNT). Blank lines are skipped and
trailing whitespace is tolerated; anything else is a MalformedLine with
the 1-based line number attached.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Iterator, Union

from .schema import FIELD_COUNT, SENSOR_NAMES, SETTING_NAMES

Source = Union[str, bytes, Path, IO[str], IO[bytes]]


@dataclass(frozen=True)
class EngineRecord:
    """One engine cycle: id, cycle, 3 operational settings, 21 sensors."""

    engine_id: int
    cycle: int
    op_settings: tuple[float, ...]
    sensors: tuple[float, ...]


class MalformedLine(ValueError):
    def __init__(self, line_number: int, detail: str):
        super().__init__(f"line {line_number}: {detail}")
        self.line_number = line_number
        self.detail = detail


def parse_cmapss(source: Source) -> list[EngineRecord]:
    """Parse a full file, raising MalformedLine on the first bad line."""
    records = []
    for item in iter_cmapss(source):
        if isinstance(item, MalformedLine):
            raise item
        records.append(item)
    return records


def scan_cmapss(source: Source) -> tuple[list[EngineRecord], list[MalformedLine]]:
    """Parse a full file, collecting every MalformedLine instead of raising."""
    records: list[EngineRecord] = []
    errors: list[MalformedLine] = []
    for item in iter_cmapss(source):
        if isinstance(item, MalformedLine):
            errors.append(item)
        else:
            records.append(item)
    return records, errors


def iter_cmapss(source: Source) -> Iterator[EngineRecord | MalformedLine]:
    for line_number, line in enumerate(_lines(source), start=1):
        if not line.strip():
            continue
        yield _parse_line(line_number, line)


def _parse_line(line_number: int, line: str) -> EngineRecord | MalformedLine:
    fields = line.split()
    if len(fields) != FIELD_COUNT:
        return MalformedLine(line_number, f"expected {FIELD_COUNT} fields, got {len(fields)}")
    try:
        values = [float(f) for f in fields]
    except ValueError:
        bad = next(f for f in fields if not _is_number(f))
        return MalformedLine(line_number, f"non-numeric field {fields.index(bad) + 1}: '{bad}'")
    engine_id, cycle = int(values[0]), int(values[1])
    if engine_id <= 0 or values[0] != engine_id:
        return MalformedLine(line_number, f"engine id must be a positive integer: '{fields[0]}'")
    if cycle <= 0 or values[1] != cycle:
        return MalformedLine(line_number, f"cycle must be a positive integer: '{fields[1]}'")
    n_settings = len(SETTING_NAMES)
    return EngineRecord(
        engine_id=engine_id,
        cycle=cycle,
        op_settings=tuple(values[2 : 2 + n_settings]),
        sensors=tuple(values[2 + n_settings :]),
    )


def serialize_record(record: EngineRecord) -> str:
    """Render a record back to a data line (shortest-repr floats, no drift)."""
    fields = [str(record.engine_id), str(record.cycle)]
    fields.extend(repr(v) for v in record.op_settings)
    fields.extend(repr(v) for v in record.sensors)
    return " ".join(fields)


def serialize_records(records: Iterable[EngineRecord]) -> str:
    return "\n".join(serialize_record(r) for r in records) + "\n"


def _is_number(token: str) -> bool:
    try:
        float(token)
        return True
    except ValueError:
        return False


def _lines(source: Source) -> Iterator[str]:
    if isinstance(source, Path):
        with source.open("r", encoding="utf-8") as fh:
            yield from fh
        return
    if isinstance(source, bytes):
        yield from io.StringIO(source.decode("utf-8"))
        return
    if isinstance(source, str):
        yield from io.StringIO(source)
        return
    for raw in source:
        yield raw.decode("utf-8") if isinstance(raw, bytes) else raw


SENSOR_COUNT = len(SENSOR_NAMES)

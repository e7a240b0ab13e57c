"""Canonical data model for solver-competition results.

A dataset is a complete (solver x instance) grid of run records. The on-disk
canonical form is header-bearing delimiter-separated text with the columns

    solver,instance,kind,status,time,objective,participant,timeout

one row per (solver, instance) pair. Rows missing from an input file are
materialized as UNSOLVED so that the grid is always complete. All times are
stored as exact rationals at millisecond granularity; objectives are exact
rationals parsed from decimal (or ``p/q``) text. No floats touch stored data,
which keeps every downstream score ratio reproducible bit for bit.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation, ROUND_HALF_EVEN
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence


class DataError(ValueError):
    """Invalid input data or a violated operation precondition."""


class ProblemKind(Enum):
    DECISION = "DECISION"
    MINIMIZE = "MINIMIZE"
    MAXIMIZE = "MAXIMIZE"

    @property
    def is_optimization(self) -> bool:
        return self is not ProblemKind.DECISION


class Status(Enum):
    COMPLETE = "COMPLETE"      # decision answered, or optimum found and proven
    INCOMPLETE = "INCOMPLETE"  # some solution found, optimality not proven
    UNSOLVED = "UNSOLVED"


CANONICAL_COLUMNS = (
    "solver",
    "instance",
    "kind",
    "status",
    "time",
    "objective",
    "participant",
    "timeout",
)

_TRUE_TOKENS = {"1", "TRUE", "YES"}
_FALSE_TOKENS = {"0", "FALSE", "NO"}


def parse_duration(text: str, *, what: str = "time") -> Fraction:
    """Parse a duration in seconds to an exact rational, rounded to milliseconds."""
    try:
        d = Decimal(text.strip())
    except InvalidOperation:
        raise DataError(f"unparseable {what} {text!r}") from None
    if not d.is_finite():
        raise DataError(f"non-finite {what} {text!r}")
    ms = int((d * 1000).to_integral_value(rounding=ROUND_HALF_EVEN))
    return Fraction(ms, 1000)


def format_duration(value: Fraction) -> str:
    """Render a millisecond-granular duration as seconds with 3 decimals."""
    ms = value * 1000
    if ms.denominator != 1:
        ms = Fraction(round(ms))
    n = int(ms)
    sign = "-" if n < 0 else ""
    n = abs(n)
    return f"{sign}{n // 1000}.{n % 1000:03d}"


def parse_rational(text: str, *, what: str = "objective") -> Fraction:
    """Parse decimal or ``p/q`` text to an exact rational."""
    text = text.strip()
    try:
        if "/" in text:
            return Fraction(text)
        return Fraction(Decimal(text))
    except (InvalidOperation, ValueError, ZeroDivisionError):
        raise DataError(f"unparseable {what} {text!r}") from None


def format_rational(value: Fraction) -> str:
    """Render exactly: a terminating decimal when one exists, else ``p/q``."""
    n, d = value.numerator, value.denominator
    if d == 1:
        return str(n)
    rest, e2, e5 = d, 0, 0
    while rest % 2 == 0:
        rest //= 2
        e2 += 1
    while rest % 5 == 0:
        rest //= 5
        e5 += 1
    if rest != 1:
        return f"{n}/{d}"
    exp = max(e2, e5)
    scaled = abs(n) * 10**exp // d
    digits = str(scaled).rjust(exp + 1, "0")
    sign = "-" if n < 0 else ""
    return f"{sign}{digits[:-exp]}.{digits[-exp:]}"


@dataclass(frozen=True)
class InstanceMeta:
    """Identity and problem kind of one benchmark instance."""

    instance_id: str
    kind: ProblemKind
    timeout: Fraction

    def __post_init__(self) -> None:
        if self.timeout <= 0:
            raise DataError(f"instance {self.instance_id!r}: timeout must be positive")


@dataclass(frozen=True)
class RunRecord:
    """One solver's observed result on one instance."""

    solver_id: str
    instance_id: str
    status: Status
    time: Fraction
    objective: Fraction | None = None

    def __post_init__(self) -> None:
        if self.time < 0:
            raise DataError(
                f"run ({self.solver_id!r}, {self.instance_id!r}): negative time"
            )
        if self.status is Status.UNSOLVED and self.objective is not None:
            raise DataError(
                f"run ({self.solver_id!r}, {self.instance_id!r}): "
                "unsolved run must not carry an objective"
            )


@dataclass(frozen=True)
class Dataset:
    """Immutable, validated competition results for one track.

    ``solvers`` maps solver id to its participant flag. ``runs`` holds exactly
    one record per (solver, instance) pair. ``warnings`` collects non-fatal
    ingestion notes (clamped times, inconsistent objectives) and is excluded
    from equality.
    """

    instances: dict[str, InstanceMeta]
    solvers: dict[str, bool]
    runs: dict[tuple[str, str], RunRecord]
    warnings: tuple[str, ...] = field(default=(), compare=False)

    @property
    def solver_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self.solvers))

    @property
    def participant_ids(self) -> tuple[str, ...]:
        return tuple(s for s in self.solver_ids if self.solvers[s])

    @property
    def instance_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self.instances))

    def run(self, solver_id: str, instance_id: str) -> RunRecord:
        return self.runs[(solver_id, instance_id)]


def _validate_run(run: RunRecord, meta: InstanceMeta) -> tuple[RunRecord, list[str]]:
    """Check one run against its instance metadata; clamp overlong times."""
    warnings: list[str] = []
    if meta.kind.is_optimization:
        if run.status is not Status.UNSOLVED and run.objective is None:
            raise DataError(
                f"run ({run.solver_id!r}, {run.instance_id!r}): solved run on an "
                "optimization instance requires an objective"
            )
    else:
        if run.status is Status.INCOMPLETE:
            raise DataError(
                f"run ({run.solver_id!r}, {run.instance_id!r}): INCOMPLETE is not "
                "valid on a decision instance"
            )
        if run.objective is not None:
            raise DataError(
                f"run ({run.solver_id!r}, {run.instance_id!r}): decision instance "
                "must not carry an objective"
            )
    if run.time > meta.timeout:
        warnings.append(
            f"run ({run.solver_id}, {run.instance_id}): time "
            f"{format_duration(run.time)} exceeds timeout, clamped to "
            f"{format_duration(meta.timeout)}"
        )
        run = RunRecord(run.solver_id, run.instance_id, run.status, meta.timeout, run.objective)
    return run, warnings


def _objective_consistency(
    instances: Mapping[str, InstanceMeta],
    runs: Mapping[tuple[str, str], RunRecord],
) -> list[str]:
    """Flag objective values that contradict proven-optimal runs."""
    by_instance: dict[str, list[RunRecord]] = {}
    for run in runs.values():
        by_instance.setdefault(run.instance_id, []).append(run)
    warnings: list[str] = []
    for iid, meta in sorted(instances.items()):
        if not meta.kind.is_optimization:
            continue
        here = by_instance.get(iid, [])
        complete = [r for r in here if r.status is Status.COMPLETE]
        incomplete = [r for r in here if r.status is Status.INCOMPLETE]
        if not complete:
            continue
        objectives = {r.objective for r in complete}
        if len(objectives) > 1:
            warnings.append(
                f"instance {iid}: proven-optimal runs disagree on the objective value"
            )
        best = min(objectives) if meta.kind is ProblemKind.MINIMIZE else max(objectives)
        for r in sorted(incomplete, key=lambda r: r.solver_id):
            worse_ok = r.objective >= best if meta.kind is ProblemKind.MINIMIZE else r.objective <= best
            if not worse_ok:
                warnings.append(
                    f"run ({r.solver_id}, {iid}): incomplete objective "
                    f"{format_rational(r.objective)} is better than the proven optimum "
                    f"{format_rational(best)}"
                )
    return warnings


def build_dataset(
    instances: Iterable[InstanceMeta],
    solvers: Mapping[str, bool],
    runs: Iterable[RunRecord],
    extra_warnings: Sequence[str] = (),
) -> Dataset:
    """Assemble and validate a Dataset, filling missing pairs as UNSOLVED."""
    inst_map: dict[str, InstanceMeta] = {}
    for meta in instances:
        if meta.instance_id in inst_map:
            raise DataError(f"duplicate instance {meta.instance_id!r}")
        inst_map[meta.instance_id] = meta
    solver_map = dict(solvers)

    warnings = list(extra_warnings)
    run_map: dict[tuple[str, str], RunRecord] = {}
    for run in runs:
        key = (run.solver_id, run.instance_id)
        if run.solver_id not in solver_map:
            raise DataError(f"run references unknown solver {run.solver_id!r}")
        if run.instance_id not in inst_map:
            raise DataError(f"run references unknown instance {run.instance_id!r}")
        if key in run_map:
            raise DataError(f"duplicate run for solver {key[0]!r} on instance {key[1]!r}")
        run, notes = _validate_run(run, inst_map[run.instance_id])
        warnings.extend(notes)
        run_map[key] = run

    for sid in solver_map:
        for iid, meta in inst_map.items():
            key = (sid, iid)
            if key not in run_map:
                run_map[key] = RunRecord(sid, iid, Status.UNSOLVED, meta.timeout)

    warnings.extend(_objective_consistency(inst_map, run_map))
    return Dataset(inst_map, solver_map, run_map, tuple(warnings))


def _parse_enum(token: str, table: Mapping[str, object], what: str, row: int):
    key = token.strip().upper()
    if key not in table:
        raise DataError(f"row {row}: unknown {what} {token!r}")
    return table[key]


def _parse_flag(token: str, row: int) -> bool:
    key = token.strip().upper()
    if key in _TRUE_TOKENS:
        return True
    if key in _FALSE_TOKENS:
        return False
    raise DataError(f"row {row}: unparseable participant flag {token!r}")


def ingest(
    source: str | Path | IO[str],
    *,
    delimiter: str = ",",
    mapping: Mapping[str, str] | None = None,
) -> Dataset:
    """Read canonical delimiter-separated results into a validated Dataset.

    ``mapping`` renames canonical columns to the source file's header names
    (canonical name -> source name); by default the header must carry the
    canonical names. Row numbers in error messages count the header as row 1.
    """
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
        return ingest(io.StringIO(text), delimiter=delimiter, mapping=mapping)

    import csv

    reader = csv.reader(source, delimiter=delimiter)
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("empty input: missing header row") from None
    positions = {name.strip().lower(): idx for idx, name in enumerate(header)}
    col: dict[str, int] = {}
    for name in CANONICAL_COLUMNS:
        source_name = (mapping or {}).get(name, name).strip().lower()
        if source_name not in positions:
            raise DataError(f"missing required column {source_name!r}")
        col[name] = positions[source_name]

    kinds = {k.value: k for k in ProblemKind}
    statuses = {s.value: s for s in Status}

    instances: dict[str, InstanceMeta] = {}
    solver_flags: dict[str, bool] = {}
    records: list[RunRecord] = []
    for row_no, cells in enumerate(reader, start=2):
        if not cells or all(not c.strip() for c in cells):
            continue
        if len(cells) != len(header):
            raise DataError(f"row {row_no}: expected {len(header)} fields, got {len(cells)}")

        def cell(name: str) -> str:
            return cells[col[name]].strip()

        solver = cell("solver")
        instance = cell("instance")
        if not solver or not instance:
            raise DataError(f"row {row_no}: empty solver or instance id")
        kind = _parse_enum(cell("kind"), kinds, "problem kind", row_no)
        status = _parse_enum(cell("status"), statuses, "status", row_no)
        participant = _parse_flag(cell("participant"), row_no)
        try:
            time = parse_duration(cell("time"))
            timeout = parse_duration(cell("timeout"), what="timeout")
            objective = parse_rational(cell("objective")) if cell("objective") else None
            meta = InstanceMeta(instance, kind, timeout)
            record = RunRecord(solver, instance, status, time, objective)
        except DataError as exc:
            raise DataError(f"row {row_no}: {exc}") from None

        known = instances.get(instance)
        if known is None:
            instances[instance] = meta
        elif known != meta:
            raise DataError(
                f"row {row_no}: instance {instance!r} redeclared with different "
                "kind or timeout"
            )
        known_flag = solver_flags.get(solver)
        if known_flag is None:
            solver_flags[solver] = participant
        elif known_flag != participant:
            raise DataError(
                f"row {row_no}: solver {solver!r} redeclared with different "
                "participant flag"
            )
        records.append(record)

    try:
        return build_dataset(instances.values(), solver_flags, records)
    except DataError as exc:
        raise DataError(str(exc)) from None


def write_canonical(ds: Dataset) -> str:
    """Emit the canonical form; deterministic for a given Dataset."""
    import csv

    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CANONICAL_COLUMNS)
    for sid, iid in sorted(ds.runs):
        run = ds.runs[(sid, iid)]
        meta = ds.instances[iid]
        writer.writerow(
            (
                sid,
                iid,
                meta.kind.value,
                run.status.value,
                format_duration(run.time),
                format_rational(run.objective) if run.objective is not None else "",
                "1" if ds.solvers[sid] else "0",
                format_duration(meta.timeout),
            )
        )
    return out.getvalue()


def save_canonical(ds: Dataset, path: str | Path) -> None:
    Path(path).write_text(write_canonical(ds), encoding="utf-8")


def filter_solvers(ds: Dataset, keep: Iterable[str]) -> Dataset:
    """Restrict a dataset to the given solvers; instances are unchanged."""
    keep_set = set(keep)
    unknown = keep_set - set(ds.solvers)
    if unknown:
        raise DataError(f"unknown solver ids: {sorted(unknown)}")
    solvers = {s: p for s, p in ds.solvers.items() if s in keep_set}
    runs = {key: r for key, r in ds.runs.items() if key[0] in keep_set}
    return Dataset(dict(ds.instances), solvers, runs)

"""Command-line front end tying the analyses into one reporting pipeline.

Subcommands: ingest, borda, oracle, mincover, tradeoff, shapley, report,
convert. Exit codes: 0 on success, 1 on validation errors (bad data, bad
usage), 2 on internal errors. ``report`` runs the whole pipeline (ingest,
scenario filter, Borda, oracle ratio, minimum cover, trade-off curve with the
cover as search space, attribution over the cover) and writes one
deterministic bundle: delimited tables, an aligned-text report, and a JSON
sidecar carrying every number as an exact rational.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .convert import convert_table, identity_mapping, load_mapping
from .mincover import build_coverage, min_cover
from .pairscore import ScoreMatrix, borda
from .portfolio import perf
from .render import align_table, csv_text, fmt_pct, fmt_sig, frac_str
from .runstore import (
    DataError,
    Dataset,
    filter_solvers,
    ingest,
    parse_rational,
    write_canonical,
)
from .shapley import ShapleyMode, shapley_exact, shapley_sampled
from .tradeoff import best_subsets, thresholds

log = logging.getLogger(__name__)

SCENARIOS = ("participants", "all")
DEFAULT_LEVELS = (Fraction(4, 5), Fraction(9, 10), Fraction(19, 20))


class StageError(RuntimeError):
    """A pipeline stage failed; carries the stage name for diagnostics."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{cause}")
        self.stage = stage


def _stage(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except DataError as exc:
        raise StageError(name, exc) from exc


def _scenario_solvers(ds: Dataset, scenario: str) -> tuple[str, ...]:
    if scenario == "participants":
        chosen = ds.participant_ids
        if not chosen:
            raise DataError("scenario 'participants' selected but no solver is flagged as one")
        return chosen
    return ds.solver_ids


def _scenario_dataset(ds: Dataset, scenario: str) -> Dataset:
    return filter_solvers(ds, _scenario_solvers(ds, scenario))


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _print_warnings(ds_warnings: Sequence[str]) -> None:
    for line in ds_warnings:
        print(f"warning: {line}", file=sys.stderr)


# ---------------------------------------------------------------------------
# simple subcommands


def cmd_ingest(args) -> int:
    ds = ingest(args.data, delimiter=args.delimiter)
    _print_warnings(ds.warnings)
    _emit(write_canonical(ds), args.out)
    return 0


def cmd_convert(args) -> int:
    mapping = load_mapping(args.mapping) if args.mapping else identity_mapping()
    text, warnings = convert_table(args.data, mapping)
    _print_warnings(warnings)
    _emit(text, args.out)
    return 0


def _borda_rows(matrix: ScoreMatrix) -> list[list[str]]:
    return [
        [sid, fmt_sig(matrix.totals[sid]), fmt_sig(matrix.averages[sid]), str(rank)]
        for rank, sid in matrix.ranking()
    ]


def cmd_borda(args) -> int:
    ds = _scenario_dataset(ingest(args.data), args.scenario)
    matrix = borda(ds)
    header = ("solver", "total", "average", "rank")
    rows = _borda_rows(matrix)
    text = csv_text(header, rows) if args.format == "csv" else align_table(header, rows)
    _emit(text, args.out)
    return 0


def cmd_oracle(args) -> int:
    header = ("dataset", "participants", "solvers", "ratio", "percent")
    rows = []
    notes = []
    for path in args.data:
        ds = ingest(path)
        ratio = perf(ds, ds.participant_ids, ds.solver_ids)
        label = Path(path).stem
        rows.append(
            [label, str(len(ds.participant_ids)), str(len(ds.solver_ids)),
             fmt_sig(ratio.value), fmt_pct(ratio.value)]
        )
        if ratio.tied_unsolved:
            notes.append(
                f"note: {label}: {ratio.tied_unsolved} instance(s) unsolved by both "
                "oracles scored as symmetric ties"
            )
    text = csv_text(header, rows) if args.format == "csv" else align_table(header, rows)
    _emit(text, args.out)
    for note in notes:
        print(note, file=sys.stderr)
    return 0


def _cover_for(ds: Dataset, solvers: tuple[str, ...], epsilon: Fraction, cap: int):
    coverage = build_coverage(ds, solvers, epsilon)
    return coverage, min_cover(coverage, cap)


def cmd_mincover(args) -> int:
    ds = ingest(args.data)
    solvers = _scenario_solvers(ds, args.scenario)
    epsilon = parse_rational(args.epsilon, what="epsilon")
    coverage, solution = _cover_for(ds, solvers, epsilon, args.cap)
    chosen = solution.portfolios[0]
    header = ("solver", "role")
    rows = [[sid, "participant" if ds.solvers[sid] else "non-participant"] for sid in chosen]
    summary = [
        f"solvers considered: {len(solvers)}",
        f"minimum portfolio size: {solution.size}",
        f"size ratio: {fmt_sig(Fraction(solution.size, len(solvers)))} "
        f"({fmt_pct(Fraction(solution.size, len(solvers)))})",
        f"optimal portfolios: {len(solution.portfolios)}"
        + (" (cap reached)" if solution.cap_reached else ""),
        f"unique optimum: {'yes' if solution.is_unique else 'no'}",
        f"instances unsolved by every solver: {len(coverage.unsolvable)}",
    ]
    if args.format == "csv":
        text = csv_text(header, rows)
    else:
        text = "\n".join(summary) + "\n\n" + align_table(header, rows)
    _emit(text, args.out)
    return 0


def cmd_tradeoff(args) -> int:
    ds = ingest(args.data)
    solvers = _scenario_solvers(ds, args.scenario)
    epsilon = parse_rational(args.epsilon, what="epsilon")
    if args.space == "cover":
        _, solution = _cover_for(ds, solvers, epsilon, args.cap)
        space = solution.portfolios[0]
    else:
        space = solvers
    curve = best_subsets(ds, space, solvers)
    levels = _parse_levels(args.levels)
    reached = thresholds(curve, levels)

    header = ("k", "percent", "ratio", "subset")
    rows = [
        [str(e.k), fmt_pct(e.value), fmt_sig(e.value), " ".join(e.subset)]
        for e in curve.entries
    ]
    thr_header = ("level", "smallest_k")
    thr_rows = [
        [fmt_pct(level), str(reached[level]) if level in reached else "unreached"]
        for level in levels
    ]
    if args.format == "csv":
        text = csv_text(header, rows) + csv_text(thr_header, thr_rows)
    else:
        text = align_table(header, rows) + "\n" + align_table(thr_header, thr_rows)
    _emit(text, args.out)
    return 0


def cmd_shapley(args) -> int:
    ds = ingest(args.data)
    solvers = _scenario_solvers(ds, args.scenario)
    epsilon = parse_rational(args.epsilon, what="epsilon")
    if args.portfolio == "cover":
        _, solution = _cover_for(ds, solvers, epsilon, args.cap)
        portfolio = solution.portfolios[0]
    else:
        portfolio = solvers
    report = _attribution(ds, portfolio, solvers, args.mode, args.samples, args.seed)

    scenario_ds = filter_solvers(ds, solvers)
    full_borda = borda(scenario_ds)
    sub_borda = borda(filter_solvers(ds, portfolio))
    header = ("solver", "attribution", "borda_avg_all", "borda_avg_portfolio")
    rows = [
        [
            sid,
            _fmt_value(report.values[sid]),
            fmt_sig(full_borda.averages[sid]),
            fmt_sig(sub_borda.averages[sid]),
        ]
        for sid in report.portfolio
    ]
    text = csv_text(header, rows) if args.format == "csv" else align_table(header, rows)
    _emit(text, args.out)
    return 0


def _attribution(ds, portfolio, baseline, mode: str, samples: int, seed: int):
    if mode == "sampled":
        return shapley_sampled(ds, portfolio, baseline, samples, seed)
    return shapley_exact(
        ds, portfolio, baseline,
        ShapleyMode.EXACT if mode == "exact" else ShapleyMode.SUM,
    )


def _fmt_value(value) -> str:
    if isinstance(value, Fraction):
        return fmt_sig(value)
    return f"{value:.6g}"


def _parse_levels(text: str) -> list[Fraction]:
    levels = [parse_rational(part, what="level") for part in text.split(",") if part.strip()]
    if not levels:
        raise DataError("no threshold levels given")
    if levels != sorted(levels):
        raise DataError("threshold levels must be ascending")
    return levels


# ---------------------------------------------------------------------------
# full pipeline


@dataclass
class ReportConfig:
    data: str
    out_dir: str
    scenario: str = "participants"
    epsilon: Fraction = Fraction(0)
    cap: int = 1000
    mode: str = "exact"
    samples: int = 10000
    seed: int = 0
    levels: tuple[Fraction, ...] = DEFAULT_LEVELS
    formats: tuple[str, ...] = ("csv", "text", "json")


def run_pipeline(cfg: ReportConfig) -> dict[str, str]:
    """Execute all stages and return the report bundle as {filename: content}.

    Nothing is written here, so a failing stage leaves no partial output; any
    stage failure is re-raised as a StageError naming the stage.
    """
    ds = _stage("ingest", ingest, cfg.data)
    scenario_ds = _stage("filter", _scenario_dataset, ds, cfg.scenario)
    solvers = scenario_ds.solver_ids

    matrix = _stage("borda", borda, scenario_ds)
    oracle = _stage("oracle", perf, ds, ds.participant_ids, ds.solver_ids)
    coverage, solution = _stage("mincover", _cover_for, ds, solvers, cfg.epsilon, cfg.cap)
    core = solution.portfolios[0]
    curve = _stage("tradeoff", best_subsets, ds, core, solvers)
    reached = _stage("tradeoff", thresholds, curve, list(cfg.levels))
    attribution = _stage(
        "shapley", _attribution, ds, core, solvers, cfg.mode, cfg.samples, cfg.seed
    )
    core_borda = _stage("shapley", lambda: borda(filter_solvers(ds, core)))

    files: dict[str, str] = {}
    if "csv" in cfg.formats:
        files["borda.csv"] = csv_text(("solver", "total", "average", "rank"), _borda_rows(matrix))
        files["oracle.csv"] = csv_text(
            ("dataset", "participants", "solvers", "ratio", "percent"),
            [[Path(cfg.data).stem, str(len(ds.participant_ids)), str(len(ds.solver_ids)),
              fmt_sig(oracle.value), fmt_pct(oracle.value)]],
        )
        files["mincover.csv"] = csv_text(
            ("solver", "role"),
            [[sid, "participant" if ds.solvers[sid] else "non-participant"] for sid in core],
        )
        files["tradeoff.csv"] = csv_text(
            ("k", "percent", "ratio", "subset"),
            [[str(e.k), fmt_pct(e.value), fmt_sig(e.value), " ".join(e.subset)]
             for e in curve.entries],
        )
        files["thresholds.csv"] = csv_text(
            ("level", "smallest_k"),
            [[fmt_pct(level), str(reached[level]) if level in reached else "unreached"]
             for level in cfg.levels],
        )
        files["shapley.csv"] = csv_text(
            ("solver", "attribution", "borda_avg_all", "borda_avg_portfolio"),
            [[sid, _fmt_value(attribution.values[sid]), fmt_sig(matrix.averages[sid]),
              fmt_sig(core_borda.averages[sid])] for sid in attribution.portfolio],
        )
    if "text" in cfg.formats:
        files["report.txt"] = _text_report(
            cfg, ds, matrix, oracle, coverage.unsolvable, solution, curve, reached, attribution,
            core_borda,
        )
    if "json" in cfg.formats:
        files["exact.json"] = _json_sidecar(
            cfg, ds, matrix, oracle, solution, curve, reached, attribution
        )
    return files


def _text_report(cfg, ds, matrix, oracle, unsolvable, solution, curve, reached,
                 attribution, core_borda) -> str:
    sections = []
    sections.append(
        f"dataset: {cfg.data}\n"
        f"scenario: {cfg.scenario}\n"
        f"solvers: {len(ds.solver_ids)} ({len(ds.participant_ids)} participants)\n"
        f"instances: {len(ds.instance_ids)}\n"
        f"ingestion warnings: {len(ds.warnings)}\n"
    )
    sections.append(
        "participant-oracle vs oracle\n"
        + align_table(
            ("ratio", "percent", "tied_unsolved"),
            [[fmt_sig(oracle.value), fmt_pct(oracle.value), str(oracle.tied_unsolved)]],
        )
    )
    sections.append(
        "borda ranking\n"
        + align_table(("solver", "total", "average", "rank"), _borda_rows(matrix))
    )
    chosen = solution.portfolios[0]
    sections.append(
        "minimum oracle-equivalent portfolio\n"
        f"size {solution.size} of {len(matrix.totals)} "
        f"({fmt_pct(Fraction(solution.size, len(matrix.totals)))}), "
        f"optima {len(solution.portfolios)}"
        + (" (cap reached)" if solution.cap_reached else "")
        + f", unique {'yes' if solution.is_unique else 'no'}, "
        f"uncoverable instances {len(unsolvable)}\n"
        + align_table(
            ("solver", "role"),
            [[sid, "participant" if ds.solvers[sid] else "non-participant"] for sid in chosen],
        )
    )
    sections.append(
        "size/performance trade-off\n"
        + align_table(
            ("k", "percent", "ratio", "subset"),
            [[str(e.k), fmt_pct(e.value), fmt_sig(e.value), " ".join(e.subset)]
             for e in curve.entries],
        )
        + "\n"
        + align_table(
            ("level", "smallest_k"),
            [[fmt_pct(level), str(reached[level]) if level in reached else "unreached"]
             for level in cfg.levels],
        )
    )
    mode_note = {
        "exact": "weighted average over coalitions",
        "sum": "unweighted sum over coalitions",
        "sampled": f"sampled over {attribution.sample_count} permutations, seed {cfg.seed}",
    }[cfg.mode]
    sections.append(
        f"solver attribution ({mode_note})\n"
        + align_table(
            ("solver", "attribution", "borda_avg_all", "borda_avg_portfolio"),
            [[sid, _fmt_value(attribution.values[sid]), fmt_sig(matrix.averages[sid]),
              fmt_sig(core_borda.averages[sid])] for sid in attribution.portfolio],
        )
    )
    return "\n".join(sections)


def _json_sidecar(cfg, ds, matrix, oracle, solution, curve, reached, attribution) -> str:
    def frac(value: Fraction) -> str:
        return frac_str(value)

    payload = {
        "dataset": {
            "path": cfg.data,
            "scenario": cfg.scenario,
            "solvers": len(ds.solver_ids),
            "participants": len(ds.participant_ids),
            "instances": len(ds.instance_ids),
        },
        "oracle": {
            "numerator": frac(oracle.numerator),
            "denominator": frac(oracle.denominator),
            "value": frac(oracle.value),
            "tied_unsolved": oracle.tied_unsolved,
        },
        "borda": {
            "totals": {sid: frac(v) for sid, v in sorted(matrix.totals.items())},
            "averages": {sid: frac(v) for sid, v in sorted(matrix.averages.items())},
        },
        "mincover": {
            "size": solution.size,
            "unique": solution.is_unique,
            "cap_reached": solution.cap_reached,
            "optima": [list(p) for p in solution.portfolios],
            "epsilon": frac(cfg.epsilon),
        },
        "tradeoff": {
            "search_space": list(curve.search_space),
            "baseline": list(curve.baseline),
            "entries": [
                {
                    "k": e.k,
                    "subset": list(e.subset),
                    "numerator": frac(e.ratio.numerator),
                    "denominator": frac(e.ratio.denominator),
                    "value": frac(e.value),
                }
                for e in curve.entries
            ],
            "thresholds": {
                frac(level): reached.get(level) for level in cfg.levels
            },
        },
        "attribution": {
            "mode": attribution.mode.value,
            "samples": attribution.sample_count,
            "values": {
                sid: frac(v) if isinstance(v, Fraction) else v
                for sid, v in sorted(attribution.values.items())
            },
        },
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def cmd_report(args) -> int:
    cfg = ReportConfig(
        data=args.data,
        out_dir=args.out,
        scenario=args.scenario,
        epsilon=parse_rational(args.epsilon, what="epsilon"),
        cap=args.cap,
        mode=args.mode,
        samples=args.samples,
        seed=args.seed,
        levels=tuple(_parse_levels(args.levels)),
        formats=tuple(args.formats.split(",")),
    )
    for fmt in cfg.formats:
        if fmt not in ("csv", "text", "json"):
            raise DataError(f"unknown output format {fmt!r}")
    files = run_pipeline(cfg)

    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    try:
        for name in sorted(files):
            path = out_dir / name
            path.write_text(files[name], encoding="utf-8")
            written.append(path)
    except OSError as exc:
        for path in written:
            path.unlink(missing_ok=True)
        raise StageError("write", exc) from exc
    print(f"wrote {len(written)} files to {out_dir}")
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(p: argparse.ArgumentParser, *, scenario: bool = True) -> None:
    p.add_argument("--data", required=True, help="canonical dataset file")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    if scenario:
        p.add_argument("--scenario", choices=SCENARIOS, default="participants")


def _add_cover_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--epsilon", default="0", help="time-tie tolerance in seconds")
    p.add_argument("--cap", type=int, default=1000, help="max optima to enumerate")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="portview",
        description="Portfolio-viewpoint analysis of solver competition results.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate and canonicalize a dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--out")
    p.add_argument("--delimiter", default=",")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("convert", help="adapt an external results table")
    p.add_argument("--data", required=True)
    p.add_argument("--out")
    p.add_argument("--mapping", help="JSON column-mapping config")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("borda", help="pairwise-score ranking table")
    _add_common(p)
    p.set_defaults(func=cmd_borda)

    p = sub.add_parser("oracle", help="participant-oracle vs oracle ratio")
    p.add_argument("--data", required=True, nargs="+")
    p.add_argument("--out")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("mincover", help="minimum oracle-equivalent portfolios")
    _add_common(p)
    _add_cover_flags(p)
    p.set_defaults(func=cmd_mincover)

    p = sub.add_parser("tradeoff", help="best subset per portfolio size")
    _add_common(p)
    _add_cover_flags(p)
    p.add_argument("--space", choices=("cover", "full"), default="cover")
    p.add_argument("--levels", default="0.8,0.9,0.95")
    p.set_defaults(func=cmd_tradeoff)

    p = sub.add_parser("shapley", help="per-solver contribution values")
    _add_common(p)
    _add_cover_flags(p)
    p.add_argument("--portfolio", choices=("cover", "full"), default="cover")
    p.add_argument("--mode", choices=("exact", "sum", "sampled"), default="exact")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_shapley)

    p = sub.add_parser("report", help="run the full pipeline into a bundle")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--scenario", choices=SCENARIOS, default="participants")
    p.add_argument("--epsilon", default="0")
    p.add_argument("--cap", type=int, default=1000)
    p.add_argument("--mode", choices=("exact", "sum", "sampled"), default="exact")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--levels", default="0.8,0.9,0.95")
    p.add_argument("--formats", default="csv,text,json")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if (exc.code or 0) == 0 else 1
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s"
    )
    try:
        return args.func(args) or 0
    except StageError as exc:
        print(f"error at stage {exc.stage}: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

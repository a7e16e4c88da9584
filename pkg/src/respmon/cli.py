"""Command-line entry point: ``respmon <command> ...``.

Exit status is 0 on success, 1 when an input fails validation and 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time as _time
from datetime import date, time
from pathlib import Path
from typing import Sequence

from respmon.event_store import EventStore, EventStoreError, load_thresholds
from respmon.inference import (
    DEFAULT_ALERT_THRESHOLD,
    InferenceError,
    load_profile,
    load_rules,
    render_text,
    run_inference,
)
from respmon.knowledge_base import KnowledgeBaseError, load_kb, universe
from respmon.simulate import ScenarioError, load_scenario, simulate
from respmon.summaries import BUCKET_SCHEMES, write_chart_data

log = logging.getLogger("respmon")

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2


def _date(text: str) -> date:
    try:
        return date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected YYYY-MM-DD, got {text!r}") from None


def _clock(text: str) -> time:
    try:
        return time.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected HH:MM[:SS], got {text!r}") from None


def _unit(text: str) -> float:
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError("must lie in [0, 1]")
    return v


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _open_store(args) -> EventStore:
    # read-only view: extra event files never get written into the store log
    store = EventStore()
    if args.store:
        for r in EventStore(args.store).records():
            store.append(r)
    for path in args.events or []:
        result = store.ingest(path)
        if result.errors:
            log.warning("%s: %s", path, result.summary())
    return store


def _pick_date(store: EventStore, requested: date | None) -> date | None:
    if requested is not None:
        return requested
    dates = store.dates()
    return dates[-1] if dates else None


def cmd_kb_validate(args) -> int:
    kb = load_kb(args.path)
    print(
        f"ok: KB version {kb.version}, {len(kb.conditions)} conditions, "
        f"{len(kb.atoms)} atoms, universe {{{', '.join(sorted(universe(kb)))}}}"
    )
    return EXIT_OK


def cmd_ingest(args) -> int:
    store = EventStore(args.store)
    status = EXIT_OK
    for path in args.events:
        result = store.ingest(path)
        print(f"{path}: {result.summary()}")
        if result.errors:
            status = EXIT_INVALID
    return status


def cmd_simulate(args) -> int:
    config = load_scenario(args.config)
    _emit(simulate(config, args.seed), args.out)
    return EXIT_OK


def _infer_once(args, store: EventStore) -> str:
    kb = load_kb(args.kb)
    day = _pick_date(store, args.date)
    window = store.query_window(day, args.start, args.end) if day else store.query_window(date.min)
    report = run_inference(
        kb,
        window,
        load_thresholds(args.thresholds),
        load_profile(args.profile),
        load_rules(args.rules),
        args.alert_threshold,
    )
    doc = report.to_dict()
    if args.format == "text":
        return render_text(doc) + "\n"
    return json.dumps(doc, indent=2) + "\n"


def cmd_infer(args) -> int:
    store = _open_store(args)
    _emit(_infer_once(args, store), args.out)
    if not args.watch:
        return EXIT_OK
    runs = 1
    size = Path(args.store).stat().st_size if args.store else 0
    while args.max_runs is None or runs < args.max_runs:
        _time.sleep(args.interval)
        if not args.store:
            break
        new_size = Path(args.store).stat().st_size
        if new_size != size:
            size = new_size
            _emit(_infer_once(args, EventStore(args.store)), args.out)
            runs += 1
    return EXIT_OK


def cmd_summarize(args) -> int:
    store = _open_store(args)
    day = _pick_date(store, args.date)
    if day is None:
        raise EventStoreError("no events to summarise")
    for path in write_chart_data(store.query_window(day), day, args.out, args.buckets):
        print(path)
    return EXIT_OK


def cmd_report(args) -> int:
    doc = json.loads(Path(args.report).read_text(encoding="utf-8"))
    _emit(render_text(doc) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="respmon", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    kb = sub.add_parser("kb", help="knowledge-base tools")
    kb_sub = kb.add_subparsers(dest="kb_command", required=True)
    v = kb_sub.add_parser("validate", help="load and validate a KB document")
    v.add_argument("path", nargs="?", default="kb/default")
    v.set_defaults(func=cmd_kb_validate)

    ing = sub.add_parser("ingest", help="append event files to a store log")
    ing.add_argument("events", nargs="+")
    ing.add_argument("--store", required=True)
    ing.set_defaults(func=cmd_ingest)

    sim = sub.add_parser("simulate", help="synthesise an event file from a scenario")
    sim.add_argument("--config", default="scenario/eib_training")
    sim.add_argument("--seed", type=int)
    sim.add_argument("--out")
    sim.set_defaults(func=cmd_simulate)

    def add_source(sp):
        sp.add_argument("--events", action="append", help="event file (repeatable)")
        sp.add_argument("--store", help="append-only store log")
        sp.add_argument("--date", type=_date)

    inf = sub.add_parser("infer", help="run inference over one day of events")
    add_source(inf)
    inf.add_argument("--from", dest="start", type=_clock)
    inf.add_argument("--to", dest="end", type=_clock)
    inf.add_argument("--kb", default="kb/default")
    inf.add_argument("--thresholds")
    inf.add_argument("--profile")
    inf.add_argument("--rules")
    inf.add_argument("--alert-threshold", type=_unit, default=DEFAULT_ALERT_THRESHOLD)
    inf.add_argument("--format", choices=("json", "text"), default="json")
    inf.add_argument("--out")
    inf.add_argument("--watch", action="store_true", help="re-run whenever the store grows")
    inf.add_argument("--interval", type=float, default=5.0)
    inf.add_argument("--max-runs", type=int)
    inf.set_defaults(func=cmd_infer)

    summ = sub.add_parser("summarize", help="write daily chart-data CSVs")
    add_source(summ)
    summ.add_argument("--out", required=True)
    summ.add_argument("--buckets", choices=BUCKET_SCHEMES, default="hourly")
    summ.set_defaults(func=cmd_summarize)

    rep = sub.add_parser("report", help="render a JSON inference report as text")
    rep.add_argument("report")
    rep.add_argument("--out")
    rep.set_defaults(func=cmd_report)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.command in ("infer", "summarize") and not (args.events or args.store):
        parser.print_usage(sys.stderr)
        print(f"respmon {args.command}: error: needs --events and/or --store", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (KnowledgeBaseError, EventStoreError, InferenceError, ScenarioError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

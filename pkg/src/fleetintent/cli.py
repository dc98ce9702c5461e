"""Command-line front door: serve, chat, plan, validate-data.

The chat REPL talks to the same service core the HTTP API wraps, just
in-process. `plan` is a one-shot: load the fleet, consolidate, print.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ServiceConfig, load_config
from .fleet import fleet_snapshots, scan_cmapss
from .maintenance import WindowUnschedulable, consolidate_plan, render_plan_csv, render_plan_table
from .service.core import ServiceCore
from .wiring import build_orchestrator

DEFAULT_CONFIG = Path("configs/default.yaml")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fleetintent")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", type=Path, default=None, help="YAML config file")
        p.add_argument("--data", type=Path, default=None, help="CMAPSS-format data file")
        p.add_argument("--fixture", type=Path, default=None, help="RUL fixture JSON")
        p.add_argument("--backend", choices=["rule", "llm"], default=None)
        p.add_argument(
            "--auto-confirm",
            action="store_true",
            default=None,
            help="execute critical actions without a confirmation round-trip",
        )

    serve = sub.add_parser("serve", help="run the HTTP service")
    add_config_flags(serve)
    serve.add_argument("--host", default=None)
    serve.add_argument("--port", type=int, default=None)
    serve.set_defaults(handler=_cmd_serve)

    chat = sub.add_parser("chat", help="interactive intent REPL (in-process service)")
    add_config_flags(chat)
    chat.set_defaults(handler=_cmd_chat)

    plan = sub.add_parser("plan", help="one-shot consolidated maintenance plan")
    add_config_flags(plan)
    plan.add_argument("--format", choices=["table", "csv"], default="table")
    plan.set_defaults(handler=_cmd_plan)

    validate = sub.add_parser("validate-data", help="check a CMAPSS-format file")
    validate.add_argument("path", type=Path)
    validate.set_defaults(handler=_cmd_validate_data)

    return parser


def _resolve_config(args: argparse.Namespace) -> ServiceConfig:
    if args.config is not None:
        config = load_config(args.config)
    elif DEFAULT_CONFIG.is_file():
        config = load_config(DEFAULT_CONFIG)
    elif args.data is not None:
        config = ServiceConfig(data_path=args.data.resolve())
    else:
        raise FileNotFoundError(
            f"no config given, {DEFAULT_CONFIG} not found, and no --data path provided"
        )

    overrides = {}
    if args.data is not None:
        overrides["data_path"] = args.data.resolve()
    if args.fixture is not None:
        overrides["fixture_path"] = args.fixture.resolve()
    if args.backend is not None:
        overrides["backend"] = args.backend
    if args.auto_confirm:
        overrides["auto_confirm_critical"] = True
    if getattr(args, "host", None):
        overrides["host"] = args.host
    if getattr(args, "port", None):
        overrides["port"] = args.port
    if overrides:
        from dataclasses import replace

        config = replace(config, **overrides)
    return config


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service.app import create_app

    config = _resolve_config(args)
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port)
    return 0


def _cmd_chat(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    core = ServiceCore(build_orchestrator(config))
    session_id = core.create_session()
    print(f"session {session_id}; type an intent, 'confirm <token>' to approve, or 'quit'.")
    while True:
        try:
            line = input("> ").strip()
        except EOFError:
            break
        if not line:
            continue
        if line in ("quit", "exit"):
            break
        try:
            if line.startswith("confirm "):
                outcome = core.confirm(session_id, line.split(None, 1)[1])
                print(outcome.response)
                continue
            result = core.post_message(session_id, line)
            print(result.response)
            if result.pending_confirmation:
                print(f"(pending confirmation token: {result.pending_confirmation})")
        except Exception as exc:
            print(f"error: {exc}")
    return 0


def _cmd_plan(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    orchestrator = build_orchestrator(config)
    snapshots = fleet_snapshots(orchestrator.store)
    try:
        plan = consolidate_plan(snapshots, config.bands, config.roster, config.cost_model)
    except WindowUnschedulable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    output = render_plan_csv(plan) if args.format == "csv" else render_plan_table(plan)
    print(output, end="")
    return 0


def _cmd_validate_data(args: argparse.Namespace) -> int:
    if not args.path.is_file():
        print(f"error: no such file: {args.path}", file=sys.stderr)
        return 2
    records, errors = scan_cmapss(args.path)
    engines = len({r.engine_id for r in records})
    print(f"{len(records)} record(s), {engines} engine(s), {len(errors)} malformed line(s)")
    for err in errors:
        print(f"  {err}", file=sys.stderr)
    return 1 if errors else 0


if __name__ == "__main__":
    raise SystemExit(main())

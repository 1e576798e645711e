"""Command-line driver: ``tsia {run,trace,enumerate,check} FILE``.

Exit codes: 0 success, 1 parse/check diagnostics, 2 runtime error, 64 usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .errors import CheckFailed, LexError, ParseError, RuntimeFault, TsiaError
from .frontend import load
from .sched import (DEFAULT_TASK_LIMIT, POLICIES, enumerate_schedules, format_trace,
                    run_parallel, run_sequential)

EXIT_OK, EXIT_DIAGNOSTICS, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2, 64


@dataclass
class Config:
    source: str
    mode: str = "run"
    policy: str = "earliest"
    workers: int = 1
    seed: int = 0
    effects: str = "infer"
    max_states: int = 10 ** 6
    task_limit: int = DEFAULT_TASK_LIMIT
    trace: bool = False
    trace_out: str = None
    format: str = "text"

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("--workers must be at least 1")
        if self.max_states < 1:
            raise ValueError("--max-states must be at least 1")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def build_parser():
    parser = _Parser(prog="tsia", description="Run TSIA programs by delegation.")
    parser.add_argument("mode", choices=("run", "trace", "enumerate", "check"))
    parser.add_argument("source", help=".tsia source file")
    parser.add_argument("--policy", choices=POLICIES, default="earliest")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--effects", choices=("infer", "check", "conservative"),
                        default="infer")
    parser.add_argument("--max-states", type=int, default=10 ** 6)
    parser.add_argument("--task-limit", type=int, default=DEFAULT_TASK_LIMIT)
    parser.add_argument("--trace", action="store_true", help="record graph snapshots")
    parser.add_argument("--trace-out", metavar="FILE", help="write the trace here, not stderr")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def parse_config(argv):
    ns = build_parser().parse_args(argv)
    try:
        return Config(source=ns.source, mode=ns.mode, policy=ns.policy, workers=ns.workers,
                      seed=ns.seed, effects=ns.effects, max_states=ns.max_states,
                      task_limit=ns.task_limit, trace=ns.trace or ns.mode == "trace",
                      trace_out=ns.trace_out, format=ns.format)
    except ValueError as exc:
        print(f"tsia: error: {exc}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _emit_trace(cfg, result, stderr):
    text = format_trace(result.trace)
    if result.events:
        text += "".join(line + "\n" for line in result.events)
    if cfg.trace_out:
        with open(cfg.trace_out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stderr.write(text)


def execute(cfg, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        with open(cfg.source, encoding="utf-8") as fh:
            source = fh.read()
    except OSError as exc:
        print(f"tsia: cannot read {cfg.source}: {exc.strerror}", file=stderr)
        return EXIT_USAGE
    try:
        program = load(source, cfg.effects)
    except CheckFailed as exc:
        for d in exc.diagnostics:
            print(f"{cfg.source}:{d}", file=stderr)
        return EXIT_DIAGNOSTICS
    except (LexError, ParseError) as exc:
        print(f"{cfg.source}:{exc}", file=stderr)
        return EXIT_DIAGNOSTICS

    if cfg.mode == "check":
        print(f"{cfg.source}: ok", file=stdout)
        return EXIT_OK
    try:
        if cfg.mode == "enumerate":
            found = enumerate_schedules(program, cfg.max_states)
            if cfg.format == "json":
                stdout.write(json.dumps({"schedules": found.schedules,
                                         "outcomes": len(found.summaries)}) + "\n")
            else:
                stdout.write(f"schedules: {found.schedules}\noutcomes: {len(found.summaries)}\n")
            return EXIT_OK
        if cfg.workers > 1:
            result = run_parallel(program, cfg.workers, cfg.seed, cfg.trace,
                                  task_limit=cfg.task_limit)
        else:
            result = run_sequential(program, cfg.policy, cfg.trace, seed=cfg.seed,
                                    task_limit=cfg.task_limit)
    except RuntimeFault as exc:
        print(f"tsia: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_RUNTIME
    except TsiaError as exc:
        print(f"tsia: {exc}", file=stderr)
        return EXIT_RUNTIME

    if cfg.format == "json":
        finals = {k: list(v) if isinstance(v, tuple) else v for k, v in result.finals.items()}
        stdout.write(json.dumps({"channels": result.channels, "finals": finals,
                                 "steps": result.steps, "steals": result.steals},
                                sort_keys=True) + "\n")
    else:
        stdout.write(result.stdout)
    if cfg.trace:
        _emit_trace(cfg, result, stderr)
    return EXIT_OK


def main(argv=None):
    cfg = parse_config(sys.argv[1:] if argv is None else argv)
    return execute(cfg)


if __name__ == "__main__":
    sys.exit(main())

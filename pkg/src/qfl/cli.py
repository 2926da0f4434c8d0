"""qfl <scenario> [--seed N] [--param key=value]... [--out DIR] [--format json|csv|both] [--parallel]

Exit status: 0 when every check passes, 1 when a check fails (named on
stderr), 2 for usage errors. Usage errors are detected before anything
is computed or written.
"""
from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import io
from .errors import InvalidArgument
from .scenarios import SCENARIO_NAMES, SCENARIOS, RunReport, ScenarioConfig, coerce_params, run_scenario

DEFAULT_OUT = "qfl_out"


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qfl", description="Run a named quantum-foundations scenario.")
    ap.add_argument("scenario", choices=SCENARIO_NAMES)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    ap.add_argument("--out", default=None, help="output directory (default: $QFL_OUT or ./qfl_out)")
    ap.add_argument("--format", choices=("json", "csv", "both"), default="both")
    ap.add_argument("--parallel", action="store_true", help="with 'all', run scenarios concurrently")
    return ap


def _parse_params(ap: argparse.ArgumentParser, items: list[str]) -> dict[str, str]:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            ap.error(f"--param expects KEY=VALUE, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def write_outputs(report: RunReport, out_dir: Path, fmt: str) -> None:
    target = out_dir / report.scenario
    target.mkdir(parents=True, exist_ok=True)
    if fmt in ("json", "both"):
        io.write_json(target / "report.json", report.to_json())
        io.write_json(target / "timing.json", {"wall_time_s": report.wall_time})
    if fmt in ("csv", "both"):
        for name, (header, rows) in report.result.tables.items():
            io.write_csv(target / f"{name}.csv", header, rows)


def _run_and_write(args: tuple[ScenarioConfig, Path, str]) -> tuple[str, dict[str, bool]]:
    cfg, out_dir, fmt = args
    report = run_scenario(cfg)
    write_outputs(report, out_dir, fmt)
    return cfg.scenario, report.result.checks


def main(argv: list[str] | None = None) -> int:
    ap = _parser()
    ns = ap.parse_args(argv)
    raw = _parse_params(ap, ns.param)
    names = list(SCENARIOS) if ns.scenario == "all" else [ns.scenario]
    if ns.scenario == "all" and raw:
        ap.error("--param is not accepted with 'all'; run scenarios individually to override defaults")
    try:
        for name in names:
            coerce_params(name, raw)
    except InvalidArgument as exc:
        ap.error(str(exc))
    out_dir = Path(ns.out or os.environ.get("QFL_OUT") or DEFAULT_OUT)

    jobs = [(ScenarioConfig(name, ns.seed, raw), out_dir, ns.format) for name in names]
    try:
        if ns.parallel and len(jobs) > 1:
            with ProcessPoolExecutor() as pool:
                results = list(pool.map(_run_and_write, jobs))
        else:
            results = [_run_and_write(job) for job in jobs]
    except InvalidArgument as exc:
        print(f"qfl: error: {exc}", file=sys.stderr)
        return 2

    failed = []
    for name, checks in results:
        for check, ok in checks.items():
            print(f"{'PASS' if ok else 'FAIL'} {name}.{check}")
            if not ok:
                failed.append(f"{name}.{check}")
    if ns.scenario == "all":
        out_dir.mkdir(parents=True, exist_ok=True)
        io.write_json(out_dir / "all.json", {
            "seed": ns.seed,
            "scenarios": {name: all(checks.values()) for name, checks in results},
            "passed": not failed,
        })
    if failed:
        print("qfl: failed checks: " + ", ".join(failed), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

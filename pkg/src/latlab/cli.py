"""Command-line front end.

    latlab <command> [--config PATH] [--out DIR] [--format csv|json]
                     [--threads N] [--budget-seconds S] [--cache DIR] ...

Commands: sieve, errterm, series, correlations, theorem4, theorem5, kober,
jutila, atkinson, moments, funceq, mellin, all (plus zeta-funceq and
identities, which host the functional-equation and closed-form identity
suites).  Exit codes: 0 all criteria pass, 1 criterion failure, 2 config
parse error, 3 budget exceeded.

The config file is flat ``key = value`` lines under ``[section]`` headers
(one section per command); flags override file values.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys

import numpy as np

from . import suites
from .errors import BudgetError, LatlabError
from .quadrature import QuadratureConfig
from .reports import write_csv, write_json
from .sieve import cached_sieve, cache_path
from .suites import Budget, Env, SuiteResult

COMMANDS = ["sieve", "errterm", "series", "correlations", "theorem4",
            "theorem5", "kober", "jutila", "atkinson", "moments", "funceq",
            "mellin", "zeta-funceq", "identities", "all"]

_SUITE_OF_COMMAND = {
    "sieve": "sieve", "errterm": "errterm", "series": "series",
    "correlations": "correlations", "theorem4": "theorem4",
    "theorem5": "theorem5", "kober": "kober", "jutila": "jutila",
    "atkinson": "atkinson", "moments": "moments", "funceq": "funceq",
    "mellin": "mellin", "zeta-funceq": "zeta_funceq",
    "identities": "laplace_closed",
}

ALL_ORDER = ["sieve", "zeta-funceq", "identities", "funceq", "mellin",
             "errterm", "correlations", "series", "theorem4", "theorem5",
             "kober", "jutila", "moments", "atkinson"]


def _parse_floats(text: str):
    return tuple(float(v) for v in text.split(",") if v.strip())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="latlab", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", default=None, help="key=value config file")
    p.add_argument("--out", default="latlab_out", help="report directory")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--budget-seconds", type=float, default=None)
    p.add_argument("--cache", default=None,
                   help="sieve cache dir (overrides LATLAB_CACHE_DIR)")
    p.add_argument("--N", type=int, default=None, help="sieve/series limit")
    p.add_argument("--T", type=str, default=None, help="comma-separated T grid")
    p.add_argument("--sigma", type=str, default=None,
                   help="comma-separated sigma grid (kober)")
    p.add_argument("--s", type=str, default=None,
                   help="comma-separated s grid (jutila)")
    p.add_argument("--grid", type=str, default="default", help="funceq grid")
    p.add_argument("--nodes", type=int, default=None,
                   help="Gauss-Legendre nodes per panel")
    return p


def _load_config(path: str | None) -> configparser.ConfigParser:
    cp = configparser.ConfigParser()
    if path is not None:
        if not os.path.exists(path):
            raise ValueError(f"config file {path} not found")
        try:
            with open(path) as fh:
                cp.read_file(fh)
        except configparser.Error as exc:
            raise ValueError(f"config parse error: {exc}") from exc
    return cp


def _suite_kwargs(command: str, args, cp: configparser.ConfigParser) -> dict:
    section = command.replace("-", "_")
    conf = dict(cp[section]) if cp.has_section(section) else {}
    kw = {}
    if command == "sieve":
        N = args.N or int(conf.get("n", 10_000))
        kw["N"] = N
    elif command == "series" and (args.N or "n" in conf):
        kw["N"] = args.N or int(conf["n"])
    elif command in ("theorem4", "theorem5"):
        if args.T:
            kw["T_grid"] = _parse_floats(args.T)
        elif "t" in conf:
            kw["T_grid"] = _parse_floats(conf["t"])
    elif command == "kober":
        if args.sigma:
            kw["sigma_grid"] = _parse_floats(args.sigma)
        elif "sigma" in conf:
            kw["sigma_grid"] = _parse_floats(conf["sigma"])
    elif command == "jutila":
        if args.s:
            kw["s_grid"] = _parse_floats(args.s)
        elif "s" in conf:
            kw["s_grid"] = _parse_floats(conf["s"])
    elif command == "funceq":
        kw["grid"] = args.grid
    return kw


def _emit(result: SuiteResult, out_dir: str, fmt: str) -> list:
    """Write the suite report; returns the file list."""
    files = []
    summary = {
        "suite": result.suite,
        "criteria": [{"name": c.name, "passed": c.passed, "detail": c.detail}
                     for c in result.criteria],
        "budget_exceeded": result.budget_exceeded,
        **result.summary,
    }
    if fmt == "csv":
        path = os.path.join(out_dir, f"{result.suite}.csv")
        write_csv(path, result.header, result.rows)
        files.append(path)
        spath = os.path.join(out_dir, f"{result.suite}_summary.json")
        write_json(spath, summary)
        files.append(spath)
    else:
        path = os.path.join(out_dir, f"{result.suite}.json")
        write_json(path, {"header": result.header,
                          "rows": [[str(v) if isinstance(v, complex) else v
                                    for v in row] for row in result.rows],
                          **summary})
        files.append(path)
    return files


def _run_sieve_build(args, cp) -> int:
    """`latlab sieve --N ...`: build/cache the table, then run the checks."""
    N = args.N or (int(cp["sieve"]["n"]) if cp.has_section("sieve")
                   and "n" in cp["sieve"] else None)
    if N is None:
        return 0
    _, hit = cached_sieve(N, args.cache)
    print(f"sieve cache {'hit' if hit else 'written'}: {cache_path(N, args.cache)}")
    return 0


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cp = _load_config(args.config)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.cache:
        os.environ["LATLAB_CACHE_DIR"] = args.cache
    quad = QuadratureConfig(nodes_per_panel=args.nodes) if args.nodes \
        else QuadratureConfig()
    env = Env(quad=quad, threads=args.threads, cache_dir=args.cache,
              use_cache=args.command == "sieve")
    budget = Budget(args.budget_seconds)
    commands = ALL_ORDER if args.command == "all" else [args.command]

    if args.command == "sieve" and args.N and args.N > 20_000:
        # large builds skip the brute-force equivalence (cache path only)
        return _run_sieve_build(args, cp)

    os.makedirs(args.out, exist_ok=True)
    exit_code = 0
    any_budget = False
    for command in commands:
        if command == "sieve" and args.N:
            _run_sieve_build(args, cp)
        suite_fn = suites.SUITES[_SUITE_OF_COMMAND[command]]
        kwargs = _suite_kwargs(command, args, cp)
        try:
            result = suite_fn(env, budget, **kwargs)
        except BudgetError as exc:
            print(f"[{command}] budget exceeded: {exc}", file=sys.stderr)
            return 3
        except LatlabError as exc:
            print(f"[{command}] error: {exc}", file=sys.stderr)
            return 1
        files = _emit(result, args.out, args.format)
        for c in result.criteria:
            status = "PASS" if c.passed else "FAIL"
            print(f"[{status}] {c.name}: {c.detail}")
        if result.budget_exceeded:
            print(f"[{command}] budget exceeded; partial results flagged",
                  file=sys.stderr)
            any_budget = True
        for f in files:
            print(f"  wrote {f}")
        if not result.passed:
            exit_code = 1
        if budget.exceeded():
            any_budget = True
            break
    if any_budget:
        return 3
    return exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

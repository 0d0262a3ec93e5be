"""``gaussacc`` command-line interface.

Exit codes: 0 success, 1 usage or config error, 2 threshold condition
fails, 3 numeric validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .duality import full_report
from .ensemble import GaussianEnsemble, lemma1_max_info
from .errors import ConfigError, GaussAccError, ThresholdViolation, UncertaintyViolation
from .io import JobConfig, convert, dumps, flat, load_config, provenance, report_document
from .single_mode import GridSpec, scan_to_csv, threshold_domain_scan
from .verify import SEEDED, SUITES, run_suite

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_THRESHOLD = 2
EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for threshold failures here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gaussacc", description="Accessible information of Gaussian ensembles.")
    p.add_argument("--version", action="version", version=f"gaussacc {__version__}")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    units = dict(choices=("nats", "bits"), default=None, help="override the config's units")

    c = sub.add_parser("compute", help="accessible information report for a Gaussian ensemble")
    c.add_argument("--config", required=True, help="JSON config with modes, gamma, beta")
    c.add_argument("--units", **units)
    c.add_argument("--out", help="write the report here instead of stdout")

    lm = sub.add_parser("lemma", help="maximal information of an observable at a fixed average state")
    lm.add_argument("--config", required=True, help="JSON config with modes, alpha, beta_m")
    lm.add_argument("--units", **units)
    lm.add_argument("--out")

    sc = sub.add_parser("scan", help="one-mode threshold-domain scan to CSV")
    sc.add_argument("--beta", type=float, required=True)
    sc.add_argument("--beta2", type=float, default=None, help="second diagonal entry of beta (default: --beta)")
    sc.add_argument("--grid", default="1e-2:1e2:200:log", help="MIN:MAX:N:log|lin")
    sc.add_argument("--out", required=True)

    v = sub.add_parser("verify", help="run an oracle or property suite")
    v.add_argument("suite", help="one of: " + ", ".join(SUITES))
    v.add_argument("--seed", type=_u64)
    v.add_argument("--n", type=int)
    v.add_argument("--cutoff", type=int)
    return p


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _with_units(cfg: JobConfig, units: Optional[str]) -> JobConfig:
    if units:
        cfg.units = units
    return cfg


def cmd_compute(args) -> int:
    cfg = _with_units(load_config(args.config), args.units)
    e = GaussianEnsemble(cfg.matrix("gamma"), cfg.matrix("beta"))
    rep = full_report(e)
    doc = report_document(rep, cfg)
    code = EXIT_OK
    if not rep.threshold_holds:
        doc["error"] = {
            "code": "threshold_violation",
            "message": "threshold condition fails; only the lower bound is available",
            "threshold_margin": rep.threshold_margin,
        }
        code = EXIT_THRESHOLD
    _emit(dumps(doc), args.out)
    return code


def cmd_lemma(args) -> int:
    cfg = _with_units(load_config(args.config), args.units)
    alpha = cfg.matrix("alpha")
    beta_m = cfg.matrix("beta_m")
    raw = {"modes": cfg.modes, "alpha": flat(alpha), "beta_m": flat(beta_m), "units": cfg.units}
    doc = {"provenance": provenance(cfg.raw), "modes": cfg.modes, "units": cfg.units, "config": raw}
    try:
        info, gamma = lemma1_max_info(alpha, beta_m)
    except ThresholdViolation as exc:
        doc["threshold_holds"] = False
        doc["threshold_margin"] = exc.margin
        doc["error"] = {"code": "threshold_violation", "message": str(exc), "threshold_margin": exc.margin}
        _emit(dumps(doc), args.out)
        return EXIT_THRESHOLD
    doc["threshold_holds"] = True
    doc[f"max_info_{cfg.units}"] = convert(info, cfg.units)
    doc["optimal_gamma"] = flat(gamma)
    _emit(dumps(doc), args.out)
    return EXIT_OK


def cmd_scan(args) -> int:
    try:
        grid = GridSpec.parse(args.grid)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if args.beta < 0.5 and args.beta2 is None:
        raise ConfigError("beta must be at least 1/2")
    try:
        rows = threshold_domain_scan(args.beta, grid, beta2=args.beta2)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    text = scan_to_csv(rows)
    try:
        Path(args.out).write_text(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {args.out}: {exc.strerror}") from None
    holds = sum(r.holds for r in rows)
    print(f"wrote {len(rows)} rows to {args.out} ({holds} inside the threshold domain)")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite not in SUITES:
        raise ConfigError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    if args.suite in SEEDED and args.seed is None:
        raise ConfigError(f"suite {args.suite!r} is randomized: pass --seed")
    checks = run_suite(args.suite, seed=args.seed, n=args.n, cutoff=args.cutoff)
    for c in checks:
        print(c.line())
    ok = all(c.passed for c in checks)
    print(f"{args.suite}: {'all checks passed' if ok else 'FAILED'}")
    return EXIT_OK if ok else EXIT_NUMERIC


COMMANDS = {"compute": cmd_compute, "lemma": cmd_lemma, "scan": cmd_scan, "verify": cmd_verify}


def _error(kind: str, exc: Exception, **extra) -> None:
    body = {"error": {"code": kind, "message": str(exc), **extra}}
    print(json.dumps(body), file=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.verb](args)
    except ConfigError as exc:
        _error("config_error", exc)
        return EXIT_USAGE
    except ThresholdViolation as exc:
        _error("threshold_violation", exc, threshold_margin=exc.margin)
        return EXIT_THRESHOLD
    except UncertaintyViolation as exc:
        _error("uncertainty_violation", exc, margin=exc.margin)
        return EXIT_NUMERIC
    except GaussAccError as exc:
        _error("numeric_error", exc)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

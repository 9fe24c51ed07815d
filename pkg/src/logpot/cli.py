"""Command-line front end: ``logpot {spectrum,verify,action}``.

Settings come from built-in defaults, then an optional ``key=value`` config
file, then flags.  ``LOGPOT_OUT`` sets the default output directory.

Exit codes: 0 success, 2 when a closed-form row is flagged INVALID (the table
is still written), 1 on any hard error (message on stderr, no file written).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import LogPotError, SizeError
from .output import atomic_write_text, fmt17
from .params import SpectralParams
from .quadrature import DEFAULT_N_ANGULAR, DEFAULT_N_RADIAL, build_disk_rule
from .spectrum import CLOSED_VARIANTS, build_table, oracle_resolution
from .transform import branch_of, oracle_radial, radial_action
from .verify import run_all

DEFAULTS = {
    "nu": 1.0,
    "m": 0,
    "kmax": 10,
    "k": 0,
    "n_radial": DEFAULT_N_RADIAL,
    "n_angular": DEFAULT_N_ANGULAR,
    "format": "csv",
    "samples": 19,
    "closed": "printed",
}
_TYPES = {"nu": float, "m": int, "kmax": int, "k": int, "n_radial": int, "n_angular": int,
          "format": str, "samples": int, "closed": str, "out": str}


@dataclass(frozen=True)
class RunConfig:
    params: SpectralParams
    k_max: int
    n_radial: int
    n_angular: int
    out_dir: Path
    format: str = "csv"

    def __post_init__(self):
        if self.k_max < 0:
            raise LogPotError(f"kmax must be >= 0, got {self.k_max}")
        if self.format not in ("csv", "json"):
            raise LogPotError(f"unknown format {self.format!r}")
        build_disk_rule(self.n_radial, self.n_angular)  # SizeError on bad counts

    @property
    def quad(self):
        return build_disk_rule(self.n_radial, self.n_angular)

    @property
    def tag(self) -> str:
        return f"nu{self.params.nu:g}_m{self.params.m}"


def read_config(path) -> dict:
    """Parse ``key=value`` lines; ``#`` starts a comment, dashes in keys become underscores."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise LogPotError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _TYPES:
            raise LogPotError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = _TYPES[key](value)
        except ValueError:
            raise LogPotError(f"{path}:{lineno}: bad value for {key}: {value!r}") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="logpot", description="Singular values of the weighted "
                                     "logarithmic potential transform on hyperbolic Landau levels.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key=value settings file (flags override it)")
        p.add_argument("--nu", type=float, help="magnetic strength, 2nu > 1 (default 1)")
        p.add_argument("--m", type=int, help="Landau level, 0 <= m <= floor(nu - 1/2) (default 0)")
        p.add_argument("--n-radial", dest="n_radial", type=int, help=f"radial nodes (default {DEFAULT_N_RADIAL})")
        p.add_argument("--n-angular", dest="n_angular", type=int, help=f"angular nodes (default {DEFAULT_N_ANGULAR})")
        p.add_argument("--out", help="output directory (default $LOGPOT_OUT or .)")
        p.add_argument("--format", choices=("csv", "json"), help="table format (default csv)")

    p = sub.add_parser("spectrum", help="tabulate lambda_k for k = 0..kmax")
    common(p)
    p.add_argument("--kmax", type=int, help="largest k (default 10); a fit is added when kmax >= 50")
    p.add_argument("--closed", choices=CLOSED_VARIANTS, help="closed-form series to compare (default printed)")

    p = sub.add_parser("verify", help="run the verification suites and write a JSON report")
    common(p)
    p.add_argument("--kmax", type=int, help="largest k in the resolution-doubling check (default 10)")

    p = sub.add_parser("action", help="radial profile of L Phi_k, closed form against oracle")
    common(p)
    p.add_argument("--k", type=int, help="basis index (default 0)")
    p.add_argument("--samples", type=int, help="number of equispaced interior radii (default 19)")
    return parser


def resolve_settings(args: argparse.Namespace) -> dict:
    settings = dict(DEFAULTS)
    settings["out"] = os.environ.get("LOGPOT_OUT", ".")
    if args.config:
        settings.update(read_config(args.config))
    for key in _TYPES:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return settings


def make_config(settings: dict) -> RunConfig:
    params = SpectralParams(settings["nu"], settings["m"])
    return RunConfig(params, settings["kmax"], settings["n_radial"], settings["n_angular"],
                     Path(settings["out"]), settings["format"])


def cmd_spectrum(config: RunConfig, closed: str = "printed") -> int:
    table = build_table(config.params, config.k_max, config.quad, closed_variant=closed)
    stem = f"spectrum_{config.tag}"
    if config.format == "json":
        atomic_write_text(config.out_dir / f"{stem}.json", table.to_json())
    else:
        atomic_write_text(config.out_dir / f"{stem}.csv", table.to_csv())
        if table.fit is not None:
            slope, const, (lo, hi) = table.fit
            expected = (config.params.m - 4.0 * config.params.nu + 1.0) / 2.0
            text = ("slope,constant,k_min,k_max,expected_slope\r\n"
                    f"{fmt17(slope)},{fmt17(const)},{lo},{hi},{fmt17(expected)}\r\n")
            atomic_write_text(config.out_dir / f"spectrum_{config.tag}_fit.csv", text)
    return 2 if table.any_invalid else 0


def cmd_verify(config: RunConfig) -> int:
    report = run_all(config.params, config.quad, config.k_max)
    ledger = "\n".join(report["ledger"]) + "\n"
    atomic_write_text(config.out_dir / f"reconciliation_{config.tag}.txt", ledger)
    atomic_write_text(config.out_dir / f"verify_{config.tag}.json",
                      json.dumps(report, indent=2, ensure_ascii=False) + "\n")
    return 0 if report["all_pass"] else 2


def cmd_action(config: RunConfig, k: int, samples: int) -> int:
    if k < 0:
        raise LogPotError(f"k must be >= 0, got {k}")
    if samples < 1:
        raise SizeError(f"samples must be >= 1, got {samples}")
    rhos = np.arange(1, samples + 1) / (samples + 1)
    oracle = oracle_radial(config.params, k, rhos, oracle_resolution(config.params, k, config.quad))
    closed = np.array([radial_action(config.params, k, float(r)) for r in rhos])
    lines = ["rho,closed,oracle,rel_diff"]
    rows = []
    for r, c, o in zip(rhos, closed, oracle):
        rel = abs(c - o) / max(1e-12, abs(o))
        lines.append(f"{fmt17(r)},{fmt17(c)},{fmt17(o)},{fmt17(rel)}")
        rows.append({"rho": fmt17(r), "closed": fmt17(c), "oracle": fmt17(o), "rel_diff": fmt17(rel)})
    stem = f"action_{config.tag}_k{k}"
    if config.format == "json":
        doc = {"params": {"nu": fmt17(config.params.nu), "m": config.params.m}, "k": k,
               "branch": branch_of(config.params, k), "rows": rows}
        atomic_write_text(config.out_dir / f"{stem}.json", json.dumps(doc, indent=2) + "\n")
    else:
        atomic_write_text(config.out_dir / f"{stem}.csv", "\r\n".join(lines) + "\r\n")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = resolve_settings(args)
        config = make_config(settings)
        if args.command == "spectrum":
            return cmd_spectrum(config, settings["closed"])
        if args.command == "verify":
            return cmd_verify(config)
        return cmd_action(config, settings["k"], settings["samples"])
    except (LogPotError, OSError, ValueError, ArithmeticError) as exc:
        print(f"logpot {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

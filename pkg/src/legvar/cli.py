"""Command-line interface: ``legvar {equations|classify|verify|tangent-cone}``.

Exit codes: 0 pass, 1 mathematical failure, 2 usage error, 3 point not on
the required variety, 4 inconclusive.  Reports are JSON with a fixed key
order, so identical arguments give byte-identical output.
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

from .certify import SUITES, generator_counts, run_suite, suite_status
from .errors import InconclusiveError, LegvarError, MembershipError
from .geometry import AffineChart, chart_p1, chart_p2, cone_candidate
from .group import classify
from .symplectic import PhaseVector
from .varieties import EquationSet, equations_Xdeg, equations_Xinv, equations_Y
from .variants import equations_Xinv_skew, equations_Xinv_sym

log = logging.getLogger("legvar")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_MEMBERSHIP = 3
EXIT_INCONCLUSIVE = 4

FAMILIES = ("Y", "Xdeg", "Xinv", "XinvSym", "XinvSkew")
CONE_FAMILIES = ("Y", "Xdeg", "Xinv")


@dataclass(frozen=True)
class RunConfig:
    command: str
    family: str | None = None
    m: int | None = None
    k: int | None = None
    l: int | None = None
    seed: int = 0
    point: str | None = None
    suite: str | None = None
    out_path: str | None = None
    verbosity: int = 0


class UsageError(LegvarError):
    """Bad command-line arguments detected after parsing."""


def _require(cfg: RunConfig, *names: str) -> None:
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise UsageError(f"{cfg.command} needs --{' --'.join(missing)}")


def _json_default(x):
    if isinstance(x, Fraction):
        return str(x)
    raise TypeError(f"cannot serialise {type(x).__name__}")


def dump_json(data) -> str:
    return json.dumps(data, indent=2, default=_json_default) + "\n"


def _emit(cfg: RunConfig, data) -> None:
    text = dump_json(data)
    if cfg.out_path:
        Path(cfg.out_path).write_text(text)
        log.info("wrote %s", cfg.out_path)
    else:
        sys.stdout.write(text)


def build_equations(family: str, m: int, k: int | None) -> EquationSet:
    if family == "Y":
        return equations_Y(m)
    if family == "Xdeg":
        if k is None:
            raise UsageError("family Xdeg needs --k")
        return equations_Xdeg(m, k)
    if family == "Xinv":
        return equations_Xinv(m)
    if family == "XinvSym":
        return equations_Xinv_sym(m)
    if family == "XinvSkew":
        return equations_Xinv_skew(m)
    raise UsageError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


def load_point(path: str) -> PhaseVector:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read point file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("point file must hold a JSON object with keys A and B")
    try:
        return PhaseVector.from_json(data)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"malformed point: {exc}") from exc


def cmd_equations(cfg: RunConfig) -> int:
    _require(cfg, "family", "m")
    eqs = build_equations(cfg.family, cfg.m, cfg.k)
    _emit(cfg, eqs.to_json())
    return EXIT_OK


def cmd_classify(cfg: RunConfig) -> int:
    _require(cfg, "point")
    p = load_point(cfg.point)
    if cfg.m is not None and cfg.m != p.m:
        raise UsageError(f"--m {cfg.m} does not match the {p.m}x{p.m} point")
    _emit(cfg, classify(p).to_json())
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    _require(cfg, "suite", "m")
    certs = run_suite(cfg.suite, cfg.m, cfg.seed)
    status = suite_status(certs)
    report = {
        "suite": cfg.suite,
        "m": cfg.m,
        "seed": cfg.seed,
        "status": status,
        "generator_counts": generator_counts(cfg.m),
        "certificates": [c.to_json() for c in certs],
    }
    _emit(cfg, report)
    for c in certs:
        log.info("%s %s %s", c.claim, json.dumps(c.params), c.verdict)
    return {"PASS": EXIT_OK, "FAIL": EXIT_FAIL, "INCONCLUSIVE": EXIT_INCONCLUSIVE}[status]


def chart_for(point: str, m: int) -> AffineChart:
    """``p1`` / ``p2`` name the standard charts; anything else is a point file, charted at its first nonzero coordinate."""
    if point == "p1":
        return chart_p1(m)
    if point == "p2":
        return chart_p2(m)
    p = load_point(point)
    if p.m != m:
        raise UsageError(f"--m {m} does not match the {p.m}x{p.m} point")
    values = p.values()
    if not values:
        raise UsageError("the zero pair is not a projective point")
    return AffineChart(min(values), p)


def cmd_tangent_cone(cfg: RunConfig) -> int:
    _require(cfg, "family", "m", "point")
    if cfg.family not in CONE_FAMILIES:
        raise UsageError(f"tangent-cone supports families {', '.join(CONE_FAMILIES)}")
    eqs = build_equations(cfg.family, cfg.m, cfg.k)
    cone = cone_candidate(eqs, chart_for(cfg.point, cfg.m))
    _emit(cfg, cone.to_json())
    return EXIT_OK


COMMANDS = {
    "equations": cmd_equations,
    "classify": cmd_classify,
    "verify": cmd_verify,
    "tangent-cone": cmd_tangent_cone,
}


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from exc
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="legvar",
        description="Exact equations, orbit classification and certificates for Legendrian matrix varieties.",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--family", choices=FAMILIES)
    parser.add_argument("--m", type=int)
    parser.add_argument("--k", type=int)
    parser.add_argument("--l", type=int)
    parser.add_argument("--seed", type=_seed, default=0)
    parser.add_argument("--point", help="point JSON file {\"A\": [[...]], \"B\": [[...]]}, or p1 / p2 for tangent-cone")
    parser.add_argument("--suite", choices=sorted(SUITES))
    parser.add_argument("--out", dest="out_path", help="write the JSON report here instead of standard output")
    parser.add_argument("-v", "--verbose", dest="verbosity", action="count", default=0)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**vars(args))
    logging.basicConfig(level=logging.INFO if cfg.verbosity else logging.WARNING,
                        format="legvar: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[cfg.command](cfg)
    except MembershipError as exc:
        print(f"legvar: {exc}", file=sys.stderr)
        return EXIT_MEMBERSHIP
    except InconclusiveError as exc:
        print(f"legvar: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (UsageError, ValueError) as exc:
        print(f"legvar: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

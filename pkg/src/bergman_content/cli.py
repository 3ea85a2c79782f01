"""Command-line front end.

Exit status: 0 success / PASS, 1 validation error, 2 oracle FAIL,
3 internal numerical error.

Examples
--------
    bergman-content compute --domain '{"kind": "polymap", "coeffs": [1, 0.5]}'
    bergman-content verify --domain '{"kind": "annulus", "r": 1, "R": 2}'
    bergman-content sweep-epicycloid --n 4 --steps 5 --format csv
    bergman-content export --domain domain.json --what boundary --resolution 360
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .commands import (
    OracleOptions,
    Tolerances,
    cmd_compute,
    cmd_export,
    cmd_sweep_epicycloid,
    cmd_verify,
    load_domain,
)
from .errors import BergmanContentError, DomainError
from .report import csv_text, dumps

EXIT_OK, EXIT_INVALID, EXIT_FAIL, EXIT_NUMERICAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise DomainError(message)


def _common(p: argparse.ArgumentParser, domain: bool = True) -> None:
    if domain:
        p.add_argument("--domain", required=True,
                       help="inline JSON document or path to a JSON file")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", type=Path, default=None, help="write output here instead of stdout")
    p.add_argument("--tol-closed", type=float, default=1e-12)
    p.add_argument("--tol-oracle", type=float, default=1e-6)
    p.add_argument("--tol-fd", type=float, default=2e-2)
    p.add_argument("--tol-quad", type=float, default=1e-8)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bergman-content", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", help="closed-form content, torsion and coefficients")
    _common(p)

    p = sub.add_parser("verify", help="compare closed forms with numerical oracles")
    _common(p)
    p.add_argument("--basis-size", type=int, default=24)
    p.add_argument("--basis", choices=("pullback", "monomial"), default="pullback")
    p.add_argument("--fd-h", type=float, default=None, help="run the FD torsion check at this spacing")
    p.add_argument("--fd-boundary", choices=("snap", "shortley-weller"), default="snap")
    p.add_argument("--radial-nodes", type=int, default=64)
    p.add_argument("--angular-nodes", type=int, default=256)
    p.add_argument("--min-deg", type=int, default=None)
    p.add_argument("--max-deg", type=int, default=None)

    p = sub.add_parser("sweep-epicycloid", help="content of z + a z^n for a in [0, 1/n]")
    _common(p, domain=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--steps", type=int, required=True)

    p = sub.add_parser("export", help="boundary curves or best-approximation samples")
    _common(p)
    p.add_argument("--what", choices=("boundary", "field"), required=True)
    p.add_argument("--resolution", type=int, default=360)
    p.add_argument("--grid", choices=("polar", "cartesian"), default="polar")
    return parser


def _tolerances(args) -> Tolerances:
    return Tolerances(closed=args.tol_closed, oracle=args.tol_oracle,
                      fd=args.tol_fd, quad=args.tol_quad)


def _flatten(prefix: str, value, out: list) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, out)
    else:
        out.append([prefix, value])


def _render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return dumps(doc)
    if "rows" in doc:
        return csv_text(doc["columns"], doc["rows"])
    if "checks" in doc:
        cols = ["name", "closed_form", "oracle", "rel_err", "tol", "pass"]
        return csv_text(cols, [[c.get(k, "") for k in cols] for c in doc["checks"]])
    rows: list = []
    _flatten("", doc.get("results", {}), rows)
    return csv_text(["key", "value"], [[k, v if not isinstance(v, list) else dumps(v).strip()]
                                       for k, v in rows])


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        tol = _tolerances(args)
        if args.command == "compute":
            doc = cmd_compute(load_domain(args.domain), tol)
        elif args.command == "verify":
            opt = OracleOptions(
                basis_size=args.basis_size, basis=args.basis, fd_h=args.fd_h,
                fd_boundary=args.fd_boundary, radial_nodes=args.radial_nodes,
                angular_nodes=args.angular_nodes, min_deg=args.min_deg,
                max_deg=args.max_deg, tol=tol)
            doc = cmd_verify(load_domain(args.domain), opt)
        elif args.command == "sweep-epicycloid":
            doc = cmd_sweep_epicycloid(args.n, args.steps, tol)
        else:
            doc = cmd_export(load_domain(args.domain), args.what, args.resolution,
                             args.grid, tol)
    except DomainError as exc:
        sys.stderr.write(dumps({"error": {"code": exc.code, "message": str(exc)}}))
        return EXIT_INVALID
    except BergmanContentError as exc:
        sys.stderr.write(dumps({"error": {"code": exc.code, "message": str(exc)}}))
        return EXIT_NUMERICAL
    except (ArithmeticError, ValueError, KeyError) as exc:
        sys.stderr.write(dumps({"error": {"code": "internal", "message": repr(exc)}}))
        return EXIT_NUMERICAL

    text = _render(doc, args.format)
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text, encoding="utf-8")
    if doc.get("status") == "FAIL":
        return EXIT_FAIL
    return EXIT_OK


def main() -> None:
    sys.exit(run())

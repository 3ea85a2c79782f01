"""Command implementations behind the CLI.

Each ``cmd_*`` function takes parsed inputs and returns a plain document
(nested dicts and lists) ready for :func:`bergman_content.report.dumps`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .closedform import (
    annulus_closedforms,
    bergman_content,
    best_approx_primitive,
    confocal_coeffs,
    confocal_content_sq,
    confocal_projection_norm_sq,
    confocal_zbar_norm_sq,
    monomial_bounded,
    monomial_critical_constant,
    monomial_radial_profile,
)
from .errors import BergmanContentError, DomainError
from .oracle import (
    fd_torsion,
    gram_project_annulus,
    gram_project_confocal,
    gram_project_disk,
    quad_project_disk,
)
from .polydomain import (
    AnnulusDomain,
    ConfocalDomain,
    MapCoeffs,
    MonomialLevelParams,
    boundary_points,
    check_univalence,
    grid_winding_numbers,
    invert_map,
)

KINDS = ("polymap", "annulus", "confocal", "monomial-level")


@dataclass(frozen=True)
class DomainSpec:
    kind: str
    parameters: dict

    def echo(self) -> dict:
        return {"kind": self.kind, "parameters": dict(self.parameters)}

    def build(self):
        """The domain object described by this spec."""
        p = self.parameters
        if self.kind == "polymap":
            return MapCoeffs(tuple(p["coeffs"]))
        if self.kind == "annulus":
            return AnnulusDomain(p["r"], p["R"])
        if self.kind == "confocal":
            return ConfocalDomain(p["r"], p["R"])
        return MonomialLevelParams(p["n"], p["C"])


def _real(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DomainError(f"{name} must be a real number, got {value!r}")
    return float(value)


def _coeff(value, i):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return [float(value), 0.0]
    if (isinstance(value, (list, tuple)) and len(value) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)):
        return [float(value[0]), float(value[1])]
    raise DomainError(f"coefficient {i} must be a real or an [re, im] pair, got {value!r}")


def parse_domain(doc: Any) -> DomainSpec:
    """Validate a domain document.

    Accepts ``{"kind": ..., "parameters": {...}}`` or the same keys inline,
    e.g. ``{"kind": "polymap", "coeffs": [1, [0.5, 0]]}``.
    """
    if not isinstance(doc, dict):
        raise DomainError("domain document must be a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise DomainError(f"kind must be one of {KINDS}, got {kind!r}")
    params = doc.get("parameters", {k: v for k, v in doc.items() if k != "kind"})
    if not isinstance(params, dict):
        raise DomainError("parameters must be an object")
    if kind == "polymap":
        coeffs = params.get("coeffs")
        if not isinstance(coeffs, list) or not coeffs:
            raise DomainError("polymap needs a nonempty 'coeffs' list (a_1, ..., a_n)")
        clean = {"coeffs": [_coeff(c, i + 1) for i, c in enumerate(coeffs)]}
    elif kind in ("annulus", "confocal"):
        if "r" not in params or "R" not in params:
            raise DomainError(f"{kind} needs 'r' and 'R'")
        clean = {"r": _real(params["r"], "r"), "R": _real(params["R"], "R")}
    else:
        if "n" not in params or "C" not in params:
            raise DomainError("monomial-level needs 'n' and 'C'")
        n = params["n"]
        if isinstance(n, bool) or not isinstance(n, (int, float)) or int(n) != n:
            raise DomainError(f"n must be an integer, got {n!r}")
        clean = {"n": int(n), "C": _real(params["C"], "C")}
    spec = DomainSpec(kind, clean)
    spec.build()  # raises DomainError on invariant violations
    return spec


def load_domain(text: str) -> DomainSpec:
    """Parse ``--domain``: inline JSON, or a path to a JSON file."""
    stripped = text.strip()
    if not stripped.startswith("{"):
        path = Path(text)
        if not path.is_file():
            raise DomainError(f"--domain is neither inline JSON nor a readable file: {text!r}")
        stripped = path.read_text(encoding="utf-8")
    try:
        doc = json.loads(stripped)
    except json.JSONDecodeError as exc:
        raise DomainError(f"invalid JSON in domain document: {exc}") from None
    return parse_domain(doc)


@dataclass
class Tolerances:
    closed: float = 1e-12
    oracle: float = 1e-6
    fd: float = 2e-2
    quad: float = 1e-8

    def as_dict(self) -> dict:
        return {"closed": self.closed, "oracle": self.oracle, "fd": self.fd, "quad": self.quad}


@dataclass
class OracleOptions:
    basis_size: int = 24
    basis: str = "pullback"
    fd_h: float | None = None
    fd_boundary: str = "snap"
    radial_nodes: int = 64
    angular_nodes: int = 256
    min_deg: int | None = None
    max_deg: int | None = None
    tol: Tolerances = field(default_factory=Tolerances)

    def as_dict(self) -> dict:
        return {"basis_size": self.basis_size, "basis": self.basis, "fd_h": self.fd_h,
                "fd_boundary": self.fd_boundary, "radial_nodes": self.radial_nodes,
                "angular_nodes": self.angular_nodes, "min_deg": self.min_deg,
                "max_deg": self.max_deg}


def _header(command: str, echo: dict, tol: Tolerances) -> dict:
    return {
        "command": command,
        "version": __version__,
        "spec": echo,
        "tolerances": tol.as_dict(),
    }


# --------------------------------------------------------------------------
# compute
# --------------------------------------------------------------------------


def _compute_results(spec: DomainSpec) -> dict:
    dom = spec.build()
    if spec.kind == "polymap":
        br = bergman_content(dom)
        prim = best_approx_primitive(dom)
        return {
            "content": br.content,
            "content_sq": br.content ** 2,
            "zbar_norm_sq": br.zbar_norm_sq,
            "proj_norm_sq": br.proj_norm_sq,
            "torsion": br.content ** 2,
            "torsion_source": "content_sq (simply connected)",
            "primitive_constant": prim.constant,
            "primitive_coeffs": list(prim.coeffs),
            "product_coeffs": list(br.c),
            "univalence_heuristic": check_univalence(dom),
        }
    if spec.kind == "annulus":
        cf = annulus_closedforms(dom)
        return {
            "best_coeff": cf.best_coeff,
            "content": math.sqrt(cf.content_sq),
            "content_sq": cf.content_sq,
            "zbar_norm_sq": cf.torsion,
            "torsion": cf.torsion,
            "gap": cf.gap,
        }
    if spec.kind == "confocal":
        k = confocal_coeffs(dom)
        csq = confocal_content_sq(dom)
        return {
            "A": k.A, "B": k.B, "C": k.C, "D": k.D,
            "zbar_norm_sq": confocal_zbar_norm_sq(dom),
            "proj_norm_sq": confocal_projection_norm_sq(dom),
            "content": math.sqrt(csq),
            "content_sq": csq,
            "content_sq_printed": confocal_content_sq(dom, printed=True),
        }
    out = {
        "critical_constant": monomial_critical_constant(dom.n),
        "bounded": monomial_bounded(dom),
        "best_approx_coeff": dom.C * dom.n / 2,
        "best_approx_degree": dom.n - 1,
    }
    if dom.n >= 3 and dom.C > 0:
        prof = monomial_radial_profile(dom)
        out["R_crit"] = prof.R_crit
        out["F_at_R"] = prof.F_at_R
    return out


def cmd_compute(spec: DomainSpec, tol: Tolerances | None = None) -> dict:
    tol = tol or Tolerances()
    doc = _header("compute", spec.echo(), tol)
    doc["results"] = _compute_results(spec)
    return doc


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b) if b != 0 else abs(a - b)


def _check(name: str, closed: float, oracle: float, tol: float) -> dict:
    err = _rel(oracle, closed)
    return {"name": name, "closed_form": closed, "oracle": oracle, "rel_err": err,
            "tol": tol, "pass": bool(err <= tol)}


def _verify_polymap(dom: MapCoeffs, opt: OracleOptions) -> list:
    tol = opt.tol
    lam = bergman_content(dom).content
    g = gram_project_disk(dom, opt.basis_size, basis=opt.basis)
    q = quad_project_disk(dom, opt.basis_size, opt.radial_nodes, opt.angular_nodes,
                          basis=opt.basis)
    checks = [
        _check("content_vs_gram", lam, g.residual_norm, tol.oracle),
        _check("quad_vs_gram", g.residual_norm, q.residual_norm, tol.quad),
    ]
    checks[0]["gram_condition"] = g.gram_condition
    if opt.fd_h is not None:
        t = fd_torsion(dom, opt.fd_h, boundary=opt.fd_boundary)
        c = _check("torsion_fd_vs_content_sq", lam ** 2, t.rho, tol.fd)
        c.update(interior_cells=t.interior_cells, grid_h=t.grid_h, boundary=t.boundary)
        checks.append(c)
    return checks


def _verify_annulus(dom: AnnulusDomain, opt: OracleOptions) -> list:
    tol = opt.tol
    lo = -4 if opt.min_deg is None else opt.min_deg
    hi = 4 if opt.max_deg is None else opt.max_deg
    cf = annulus_closedforms(dom)
    g = gram_project_annulus(dom, lo, hi)
    gap_formula = 0.5 * math.pi * (dom.R ** 2 - dom.r ** 2) ** 2 / math.log(dom.R / dom.r)
    checks = [_check("content_sq_vs_gram", cf.content_sq, g.residual_sq, tol.oracle)]
    if lo <= -1 <= hi:
        checks.append(_check("best_coeff_vs_gram", cf.best_coeff, g.coeff(-1).real, tol.oracle))
    gap = cf.torsion - g.residual_sq
    checks.append({"name": "content_sq_below_torsion", "closed_form": cf.torsion,
                   "oracle": g.residual_sq, "gap": gap, "pass": bool(gap > 0)})
    checks.append(_check("gap_vs_formula", gap_formula, gap, tol.oracle))
    return checks


def _verify_confocal(dom: ConfocalDomain, opt: OracleOptions) -> list:
    tol = opt.tol
    lo = -8 if opt.min_deg is None else opt.min_deg
    hi = 8 if opt.max_deg is None else opt.max_deg
    k = confocal_coeffs(dom)
    g = gram_project_confocal(dom, lo, hi)
    printed = _check("printed_content_sq_vs_gram", confocal_content_sq(dom, printed=True),
                     g.residual_sq, tol.oracle)
    printed["gating"] = False
    checks = [
        _check("content_sq_vs_gram", confocal_content_sq(dom), g.residual_sq, tol.oracle),
        {"name": "coeff_equations", "max_rel_residual": float(np.max(k.residuals(dom))),
         "tol": tol.closed, "pass": bool(np.max(k.residuals(dom)) <= tol.closed)},
    ]
    for deg, val in k.pullback_coeffs().items():
        checks.append(_check(f"pullback_coeff_deg{deg}", val, g.coeff(deg).real, tol.oracle))
    checks.append(printed)
    return checks


def _brute_force_bounded(params: MonomialLevelParams, points: int = 100_000) -> bool:
    n, C = params.n, params.C
    if C == 0:
        return True
    if n == 2:
        r_max = 4.0 + 10.0 / math.sqrt(abs(1.0 - C) or 1e-12)
    else:
        r_max = max(4.0, 2.0 * (4.0 / C) ** (1.0 / (n - 2)))
    r = np.linspace(0.0, r_max, points)
    return bool(np.min(C * r ** n - r * r + 1.0) <= 0.0)


def _verify_monomial(dom: MonomialLevelParams, opt: OracleOptions) -> list:
    verdict = monomial_bounded(dom)
    brute = _brute_force_bounded(dom)
    return [{"name": "bounded_vs_grid_minimum", "closed_form": verdict, "oracle": brute,
             "pass": verdict == brute}]


def cmd_verify(spec: DomainSpec, opt: OracleOptions | None = None) -> dict:
    opt = opt or OracleOptions()
    dom = spec.build()
    runner = {"polymap": _verify_polymap, "annulus": _verify_annulus,
              "confocal": _verify_confocal, "monomial-level": _verify_monomial}[spec.kind]
    checks = runner(dom, opt)
    doc = _header("verify", spec.echo(), opt.tol)
    doc["options"] = opt.as_dict()
    doc["checks"] = checks
    doc["status"] = "PASS" if all(c["pass"] for c in checks if c.get("gating", True)) else "FAIL"
    return doc


# --------------------------------------------------------------------------
# sweep
# --------------------------------------------------------------------------

SWEEP_COLUMNS = ("a", "content", "content_sq")


def cmd_sweep_epicycloid(n: int, steps: int, tol: Tolerances | None = None) -> dict:
    if int(n) != n or n < 2:
        raise DomainError("n must be an integer >= 2")
    if int(steps) != steps or steps < 2:
        raise DomainError("steps must be an integer >= 2")
    rows = []
    for i in range(steps):
        a = (1.0 / n) * i / (steps - 1)
        lam = bergman_content(MapCoeffs.epicycloid(n, a)).content
        rows.append([a, lam, lam * lam])
    doc = _header("sweep-epicycloid", {"n": n, "steps": steps}, tol or Tolerances())
    doc["columns"] = list(SWEEP_COLUMNS)
    doc["rows"] = rows
    return doc


# --------------------------------------------------------------------------
# export
# --------------------------------------------------------------------------

BOUNDARY_COLUMNS = ("component", "x", "y")
FIELD_COLUMNS = ("x", "y", "re_f", "im_f", "residual")


def _xy(z):
    return [[float(p.real), float(p.imag)] for p in np.atleast_1d(z)]


def _level_roots(n: int, C: float, theta: float) -> np.ndarray:
    """Positive roots of ``C cos(n theta) r^n - r^2 + 1``, ascending."""
    coef = np.zeros(n + 1)
    coef[0] = C * math.cos(n * theta)
    coef[n - 2] += -1.0
    coef[n] += 1.0
    roots = np.roots(np.trim_zeros(coef, "f"))
    real = roots[np.abs(roots.imag) <= 1e-9 * np.maximum(1.0, np.abs(roots))].real
    return np.sort(real[real > 0])


def _export_boundary(spec: DomainSpec, dom, resolution: int):
    t = np.exp(2j * np.pi * np.arange(resolution) / resolution)
    meta = {}
    if spec.kind == "polymap":
        rows = [[0] + p for p in _xy(boundary_points(dom, resolution))]
    elif spec.kind == "annulus":
        rows = [[0] + p for p in _xy(dom.R * t)] + [[1] + p for p in _xy(dom.r * t)]
    elif spec.kind == "confocal":
        rows = ([[0] + p for p in _xy(dom.map(dom.R * t))]
                + [[1] + p for p in _xy(dom.map(dom.r * t))])
    else:
        rows, open_rays = [], 0
        for theta in 2 * np.pi * np.arange(resolution) / resolution:
            roots = _level_roots(dom.n, dom.C, theta)
            if roots.size == 0:
                open_rays += 1
            for b, r in enumerate(roots):
                rows.append([b] + _xy(r * np.exp(1j * theta))[0])
        meta = {"bounded": monomial_bounded(dom), "open_rays": open_rays}
    return rows, meta


def _polar(lo: float, hi: float, resolution: int):
    rho = lo + (hi - lo) * (np.arange(resolution) + 0.5) / resolution
    theta = 2 * np.pi * np.arange(resolution) / resolution
    return (rho[:, None] * np.exp(1j * theta[None, :])).ravel()


def _field_rows(z, f):
    res = np.abs(np.conj(z) - f)
    return [[float(a.real), float(a.imag), float(b.real), float(b.imag), float(c)]
            for a, b, c in zip(z, f, res)]


def _export_field(spec: DomainSpec, dom, resolution: int, grid: str):
    meta = {"grid": grid, "skipped": 0}
    if spec.kind == "polymap":
        prim = best_approx_primitive(dom)
        if grid == "polar":
            zeta = _polar(0.0, 1.0, resolution)
            return _field_rows(dom(zeta), prim.best_approximation(dom, zeta)), meta
        poly = boundary_points(dom, 4096)
        xs = np.linspace(poly.real.min(), poly.real.max(), resolution)
        ys = np.linspace(poly.imag.min(), poly.imag.max(), resolution)
        inside = grid_winding_numbers(poly, xs, ys) != 0
        zs, fs = [], []
        for j, i in zip(*np.nonzero(inside)):
            z = complex(xs[i], ys[j])
            try:
                zeta = invert_map(dom, z)
            except BergmanContentError:
                meta["skipped"] += 1
                continue
            zs.append(z)
            fs.append(prim.best_approximation(dom, zeta))
        return _field_rows(np.array(zs), np.array(fs)), meta
    if spec.kind == "annulus":
        z = _polar(dom.r, dom.R, resolution)
        C = annulus_closedforms(dom).best_coeff
        meta["best_coeff"] = C
        return _field_rows(z, C / z), meta
    if spec.kind == "confocal":
        zeta = _polar(dom.r, dom.R, resolution)
        h = sum(c * zeta ** d for d, c in confocal_coeffs(dom).pullback_coeffs().items())
        return _field_rows(dom.map(zeta), h / (1 - zeta ** -2)), meta
    if not monomial_bounded(dom):
        raise DomainError("level domain has no bounded component; no field to export")
    zs = []
    for theta in 2 * np.pi * np.arange(resolution) / resolution:
        rb = _level_roots(dom.n, dom.C, theta)[0]
        rho = rb * (np.arange(resolution) + 0.5) / resolution
        zs.append(rho * np.exp(1j * theta))
    z = np.concatenate(zs)
    return _field_rows(z, dom.C * dom.n / 2 * z ** (dom.n - 1)), meta


def cmd_export(spec: DomainSpec, what: str, resolution: int, grid: str = "polar",
               tol: Tolerances | None = None) -> dict:
    if what not in ("boundary", "field"):
        raise DomainError("what must be 'boundary' or 'field'")
    if grid not in ("polar", "cartesian"):
        raise DomainError("grid must be 'polar' or 'cartesian'")
    if resolution < 3:
        raise DomainError("resolution must be >= 3")
    dom = spec.build()
    if what == "boundary":
        rows, meta = _export_boundary(spec, dom, resolution)
        columns = BOUNDARY_COLUMNS
    else:
        rows, meta = _export_field(spec, dom, resolution, grid)
        columns = FIELD_COLUMNS
    doc = _header("export", spec.echo(), tol or Tolerances())
    doc["what"] = what
    doc["resolution"] = resolution
    doc.update(meta)
    doc["columns"] = list(columns)
    doc["rows"] = rows
    return doc

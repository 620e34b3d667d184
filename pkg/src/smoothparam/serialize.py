"""Versioned JSON artifacts for parametrizations, approximations, point
counts, norming reports, and entropy tables.

Rationals are serialized as "p/q" strings (never floats), floats are rounded
to a fixed precision before emission, and keys are sorted, so identical
inputs produce byte-identical artifacts.  `verify_bundle` re-checks a parsed
artifact: structural invariants always, and full certificate re-verification
at 4x resolution whenever the chart functions are expressible in the
serializable node language."""

from __future__ import annotations

import dataclasses
import json
from fractions import Fraction

from .charts import Chart, verify_ck_chart
from .config import DEFAULT, Config
from .errors import SchemaVersionMismatch
from .funcs import (AddExpr, ComposeExpr, ConstExpr, FunctionExpr, MulExpr,
                    PowExpr, RationalExpr, SqrtExpr)
from .poly import Poly

SCHEMA = "smoothparam@1"
FLOAT_DIGITS = 12


# -- primitives ----------------------------------------------------------------

def frac_to_str(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def str_to_frac(s: str) -> Fraction:
    return Fraction(s)


def _fix_float(x: float) -> float:
    return float(f"{float(x):.{FLOAT_DIGITS}e}")


def _fix(obj):
    """Recursively clamp floats to the fixed precision."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return _fix_float(obj)
    if isinstance(obj, Fraction):
        return frac_to_str(obj)
    if isinstance(obj, dict):
        return {str(k): _fix(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_fix(v) for v in obj]
    return obj


def poly_to_json(p: Poly) -> list:
    return [frac_to_str(c) for c in p.coeffs]


def poly_from_json(cs: list) -> Poly:
    return Poly([str_to_frac(c) for c in cs])


def number_to_json(x):
    if isinstance(x, (int, Fraction)):
        return frac_to_str(x)
    return _fix_float(float(x))


def number_from_json(x):
    if isinstance(x, str):
        return str_to_frac(x)
    return float(x)


# -- function expressions ------------------------------------------------------

def expr_to_json(e: FunctionExpr) -> dict:
    if isinstance(e, RationalExpr):
        return {"kind": "rational", "num": poly_to_json(e.num),
                "den": poly_to_json(e.den)}
    if isinstance(e, ConstExpr):
        return {"kind": "const", "value": number_to_json(e.c)}
    if isinstance(e, SqrtExpr):
        return {"kind": "sqrt", "inner": expr_to_json(e.inner)}
    if isinstance(e, AddExpr):
        return {"kind": "add", "terms": [expr_to_json(t) for t in e.terms]}
    if isinstance(e, MulExpr):
        return {"kind": "mul", "f": expr_to_json(e.f),
                "g": expr_to_json(e.g)}
    if isinstance(e, PowExpr):
        return {"kind": "pow", "f": expr_to_json(e.f), "n": e.n}
    if isinstance(e, ComposeExpr):
        return {"kind": "compose", "outer": expr_to_json(e.outer),
                "inner": expr_to_json(e.inner)}
    raise ValueError(f"expression node {type(e).__name__} is not serializable")


def expr_from_json(d: dict) -> FunctionExpr:
    kind = d["kind"]
    if kind == "rational":
        return RationalExpr(poly_from_json(d["num"]), poly_from_json(d["den"]))
    if kind == "const":
        return ConstExpr(number_from_json(d["value"]))
    if kind == "sqrt":
        return SqrtExpr(expr_from_json(d["inner"]))
    if kind == "add":
        return AddExpr(*[expr_from_json(t) for t in d["terms"]])
    if kind == "mul":
        return MulExpr(expr_from_json(d["f"]), expr_from_json(d["g"]))
    if kind == "pow":
        return PowExpr(expr_from_json(d["f"]), int(d["n"]))
    if kind == "compose":
        return ComposeExpr(expr_from_json(d["outer"]),
                           expr_from_json(d["inner"]))
    raise ValueError(f"unknown expression kind {kind!r}")


def _try_expr(e) -> dict:
    try:
        return expr_to_json(e)
    except ValueError:
        return {"kind": "opaque", "repr": type(e).__name__}


def _meta_to_json(meta: dict) -> dict:
    out = {}
    for k, v in meta.items():
        if isinstance(v, (str, int, bool)):
            out[k] = v
        elif isinstance(v, float):
            out[k] = _fix_float(v)
        elif isinstance(v, Fraction):
            out[k] = frac_to_str(v)
    return out


# -- charts and parametrizations -----------------------------------------------

def chart_to_json(ch: Chart) -> dict:
    return {"psi": poly_to_json(ch.psi),
            "f": _try_expr(ch.f_comp),
            "k": ch.k,
            "image": [number_to_json(v) for v in ch.image]
            if ch.image is not None else None,
            "bounds": {str(k): _fix_float(float(v))
                       for k, v in ch.bounds.items()},
            "meta": _meta_to_json(ch.meta)}


def chart_from_json(d: dict) -> Chart:
    f = None
    if d["f"].get("kind") != "opaque":
        f = expr_from_json(d["f"])
    return Chart(psi=poly_from_json(d["psi"]), f_comp=f, k=int(d["k"]),
                 image=tuple(number_from_json(v) for v in d["image"])
                 if d.get("image") else None,
                 bounds=dict(d["bounds"]),
                 meta=dict(d.get("meta", {})))


def parametrization_to_json(P, kind: str) -> dict:
    doc = {"schema": SCHEMA, "kind": f"{kind}-parametrization",
           "charts": [chart_to_json(c) for c in P.charts],
           "domain": [number_to_json(v) for v in P.domain],
           "normalization": _fix(P.normalization),
           "meta": _meta_to_json(P.meta)}
    if kind == "ck":
        doc["k"] = P.k
    else:
        doc["delta"] = frac_to_str(P.delta)
        doc["removed"] = [[number_to_json(a), number_to_json(b)]
                          for (a, b) in P.removed]
    return doc


def approximation_to_json(A, source=None) -> dict:
    return {"schema": SCHEMA, "kind": "approximation",
            "epsilon": _fix_float(A.epsilon), "route": A.route,
            "complexity": A.complexity,
            "source": _try_expr(source) if source is not None else None,
            "meta": _meta_to_json(A.meta),
            "patches": [{"dim": p.dim, "degree": p.degree,
                         "center": [number_to_json(c) for c in p.center],
                         "side": _fix_float(float(p.side)),
                         "source": p.source,
                         "sup_error": _fix_float(float(p.sup_error)),
                         "bound": _fix_float(float(p.bound)),
                         "coeffs": [poly_to_json(c) if isinstance(c, Poly)
                                    else number_to_json(c)
                                    for c in p.coeffs]}
                        for p in A.patches]}


def count_report_to_json(t: int, d: int, points, cover: dict = None) -> dict:
    return {"schema": SCHEMA, "kind": "count-points", "t": t, "d": d,
            "count": len(points),
            "points": sorted([frac_to_str(x), frac_to_str(y)]
                             for (x, y) in points),
            "cover": _fix(cover) if cover else None}


def remez_report_to_json(rep) -> dict:
    return {"schema": SCHEMA, "kind": "remez",
            "R": _fix_float(rep.R),
            "Q_star": [_fix_float(float(v)) for v in rep.Q_star],
            "monomials": [list(m) for m in rep.monomials],
            "y_star": [_fix_float(float(v)) for v in rep.y_star],
            "meta": _fix(rep.meta)}


def entropy_report_to_json(rep) -> dict:
    return {"schema": SCHEMA, "kind": "entropy", "system": rep.system,
            "n_values": rep.n_values, "eps_values": _fix(rep.eps_values),
            "rows": _fix(rep.rows), "h_estimates": _fix(rep.h_estimates),
            "grid_spec": _fix(rep.grid_spec)}


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def loads(text: str) -> dict:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA:
        raise SchemaVersionMismatch(
            f"artifact schema {doc.get('schema')!r}, expected {SCHEMA!r}")
    return doc


# -- verification --------------------------------------------------------------

def _scale_cfg(cfg: Config, factor: int) -> Config:
    return dataclasses.replace(
        cfg, grid_points=cfg.grid_points * factor,
        exact_grid_points=cfg.exact_grid_points * factor,
        a_chart_angles=cfg.a_chart_angles * factor,
        patch_samples=cfg.patch_samples * factor)


def _verify_charts(doc: dict, cfg: Config, failures: list) -> None:
    analytic = doc["kind"].startswith("analytic")
    for i, cd in enumerate(doc["charts"]):
        tag = f"chart {i}"
        limit = cd["meta"].get("K", 1.0) if analytic else 1.0
        for order, val in cd["bounds"].items():
            if val > limit + cfg.ck_tolerance_float:
                failures.append(f"{tag}: stored bound {val} at order {order} "
                                f"exceeds {limit}")
        if cd["f"].get("kind") == "opaque":
            continue
        ch = chart_from_json(cd)
        fine = _scale_cfg(cfg, 4)
        if analytic:
            from .analytic_param import verify_a_chart_variation
            kvar = ch.meta.get("Kvar")
            if kvar is None:
                continue
            var = verify_a_chart_variation(ch, cfg=fine)
            if var > float(kvar) * (1 + 1e-6):
                failures.append(f"{tag}: re-measured variation {var} "
                                f"exceeds stored {kvar}")
        else:
            rep = verify_ck_chart(ch, cfg=fine)
            if not rep.ok:
                failures.append(f"{tag}: re-verification failed "
                                f"(max bound {rep.max_bound})")


def _verify_approximation(doc: dict, cfg: Config, failures: list) -> None:
    src = doc.get("source")
    f = expr_from_json(src) if src and src.get("kind") != "opaque" else None
    eps = doc["epsilon"]
    for i, pd in enumerate(doc["patches"]):
        if pd["sup_error"] > eps * (1 + 1e-9):
            failures.append(f"patch {i}: stored error {pd['sup_error']} "
                            f"exceeds epsilon {eps}")
        if f is None or pd["dim"] != 1:
            continue
        poly = poly_from_json(pd["coeffs"][1]) if isinstance(
            pd["coeffs"][1], list) else None
        psi = poly_from_json(pd["coeffs"][0]) if isinstance(
            pd["coeffs"][0], list) else None
        if poly is None or psi is None:
            continue
        import numpy as np
        ts = np.linspace(-1.0, 1.0, 4 * cfg.patch_samples)
        xs = psi.eval_array(ts)
        err = float(np.max(np.abs(f.eval_array(xs) - poly.eval_array(ts))))
        if err > eps * (1 + 1e-6):
            failures.append(f"patch {i}: resampled error {err} exceeds {eps}")


def verify_bundle(doc, cfg: Config = DEFAULT) -> dict:
    """Re-check a parsed (or raw-text) artifact.  Returns
    {"ok": bool, "kind": ..., "failures": [...]}."""
    if isinstance(doc, str):
        doc = loads(doc)
    if doc.get("schema") != SCHEMA:
        raise SchemaVersionMismatch(
            f"artifact schema {doc.get('schema')!r}, expected {SCHEMA!r}")
    failures: list = []
    kind = doc["kind"]
    if kind.endswith("parametrization"):
        _verify_charts(doc, cfg, failures)
    elif kind == "approximation":
        _verify_approximation(doc, cfg, failures)
    elif kind == "entropy":
        for r in doc["rows"]:
            if r["M_lower"] > r["M_upper"]:
                failures.append(f"entropy cell n={r['n']} eps={r['eps']}: "
                                "lower exceeds upper")
    elif kind == "remez":
        if doc["R"] < 1.0 - 1e-9:
            failures.append(f"norming constant {doc['R']} below 1")
    elif kind == "count-points":
        if doc["count"] != len(doc["points"]):
            failures.append("stored count disagrees with point list")
    else:
        failures.append(f"unknown artifact kind {kind!r}")
    return {"ok": not failures, "kind": kind, "failures": failures}

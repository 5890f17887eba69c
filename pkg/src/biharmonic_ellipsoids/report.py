"""Deterministic JSON and CSV emitters.

Floats are written with 17 significant digits in lowercase scientific
notation, so identical inputs give byte-identical files. Every number in a
JSON report is wrapped as ``{"value": ..., "paper_ref": ...}`` where the
reference names the formula the number comes from.
"""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

SCHEMA = "bitension-report/1"

REFS = {
    "quadric": "Q = {|x|^2/c^2 + |y|^2/d^2 = 1}",
    "constraint": "a^2/c^2 + b^2/d^2 = 1",
    "t": "a = c cos t, b = d sin t",
    "lambda": "tau = lambda eta1_T, lambda = -[c^4/a^2 + d^4/b^2]^-1 [p c^2/a^2 - q d^2/b^2]",
    "mu": "Delta tau = mu eta1_T, mu = (lambda/|eta1_T|^2) [p c^4/a^4 + q d^4/b^4]",
    "normal_bitension": ("<tau2, eta1_T> = -lambda {[p c^4/a^4 + q d^4/b^4]"
                         " - |eta1_Q|^-2 [c^2/a^2 + d^2/b^2] [p/c^2 + q/d^2]}"),
    "minimal_radii": "a^2 = c^2 p/(p+q), b^2 = d^2 q/(p+q)",
    "biharmonic_radii": "a^2 = c^3/(c+d), b^2 = d^3/(c+d)",
    "hypersphere_radii": "a = c sqrt(c/(c+d)), b = +-d sqrt(d/(c+d))",
    "equator": "a = c, b = 0 (totally geodesic)",
    "tau": "tau = trace B(., .)",
    "sff_T": "B_T(W1, W2) = -|eta1_T|^-2 [(c^2/a^2) <X1, X2> - (d^2/b^2) <Y1, Y2>] eta1_T",
    "delta_tau": "Delta = -sum_i (nabla_ei nabla_ei - nabla_(nabla_ei ei))",
    "curvature_term": "trace R^Q(d phi, tau) d phi, Gauss equation of Q in R^n",
    "tau2": "tau2 = -Delta tau - trace R^Q(d phi, tau) d phi",
    "tangential": "<tau2, W> = 0 for every W tangent to the submanifold",
    "nu": "tau(i o phi) = -nu eta_S, nu = m (c^2/a^2) / |eta1_S|",
    "composed_bracket": "{c^4/a^4 - |eta1_Q|^-2 [c^2/a^2 + d^2/b^2] [1/c^2]} = 0",
    "parallel": "normal-bundle part of nabla^Q_e tau = 0",
    "step": "finite-difference step (units of the smallest length)",
    "seed": "seed of the Philox generator for random check points",
    "tolerance": "acceptance tolerance of the check",
    "count": "number of evaluation points",
    "sign_changes": "number of sign changes along the sampled constraint curve",
}


def fmt(x: float) -> str:
    return format(float(x), ".16e")


def quantity(value, ref: str) -> dict:
    """Numeric value tagged with the formula it comes from."""
    if ref in REFS:
        ref = REFS[ref]
    if isinstance(value, np.ndarray):
        value = [float(v) for v in value]
    return {"value": value, "paper_ref": ref}


def check(name: str, passed: bool, measured, limit, ref: str, relation="<=") -> dict:
    return {
        "name": name,
        "passed": bool(passed),
        "relation": relation,
        "measured": quantity(float(measured), ref),
        "limit": quantity(float(limit), "tolerance"),
    }


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_encode(v, indent, level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=2) -> str:
    """JSON text with fixed float formatting; keys keep insertion order."""
    return _encode(obj, indent, 0) + "\n"


def sweep_csv(rows) -> str:
    from .classify import SweepRow

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SweepRow.FIELDS)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else fmt(v) for v in row.values()])
    return buf.getvalue()

"""Descriptor files: a Selberg datum as UTF-8 ``key = value`` lines.

    label = myL
    q = 1
    Q = 0.5641895835477563
    lambda = [0.5]
    mu = [[0, 0]]
    omega = [1, 0]
    pole_order = 1
    coeffs = table:coeffs.csv

Values are JSON (bare words are allowed for ``label`` and ``coeffs``);
``#`` starts a comment.  ``coeffs`` is ``zeta``, ``delta``,
``rankin_selberg`` or ``table:<path>`` with a CSV of rows ``n,re,im``
(path relative to the descriptor).  Unknown keys are rejected.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .datum import CoefficientSource, SelbergDatum, builtin, builtin_labels
from .errors import ValidationError

KEYS = ("label", "q", "Q", "lambda", "mu", "omega", "pole_order", "coeffs")
REQUIRED = ("q", "Q", "lambda", "mu", "omega", "pole_order", "coeffs")


def parse_text(text: str) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError("descriptor", f"line {lineno}: expected 'key = value'")
        key, value = (p.strip() for p in line.split("=", 1))
        if key not in KEYS:
            raise ValidationError(key, f"unknown descriptor field (line {lineno})")
        if key in out:
            raise ValidationError(key, f"duplicate field (line {lineno})")
        if key in ("label", "coeffs"):
            out[key] = value.strip('"')
            continue
        try:
            out[key] = json.loads(value)
        except json.JSONDecodeError:
            raise ValidationError(key, f"cannot parse value {value!r} (line {lineno})") from None
    missing = [k for k in REQUIRED if k not in out]
    if missing:
        raise ValidationError(missing[0], "missing descriptor field")
    return out


def _pair(v, field: str) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    raise ValidationError(field, f"expected [re, im], got {v!r}")


def read_table(path: Path) -> np.ndarray:
    """CSV rows n,re,im with n = 1, 2, ... in order."""
    vals = []
    with open(path, newline="", encoding="utf-8") as fh:
        for i, row in enumerate(csv.reader(fh), start=1):
            if not row or row[0].strip().startswith("#"):
                continue
            try:
                n, re, im = int(row[0]), float(row[1]), float(row[2])
            except (ValueError, IndexError):
                raise ValidationError("coeffs", f"{path}: bad row {i}: {row!r}") from None
            if n != len(vals) + 1:
                raise ValidationError("coeffs", f"{path}: expected n = {len(vals) + 1}, got {n}")
            vals.append(complex(re, im))
    if not vals:
        raise ValidationError("coeffs", f"{path}: coefficient table is empty")
    return np.array(vals, dtype=complex)


def _source(spec: str, base: Path) -> CoefficientSource:
    if spec == "zeta":
        return CoefficientSource("zeta")
    if spec == "delta":
        return CoefficientSource("cusp_form_delta")
    if spec == "rankin_selberg":
        return CoefficientSource("rankin_selberg")
    if spec.startswith("table:"):
        path = Path(spec[len("table:"):])
        if not path.is_absolute():
            path = base / path
        return CoefficientSource("user_table", table=read_table(path))
    raise ValidationError("coeffs", f"expected zeta|delta|rankin_selberg|table:<path>, got {spec!r}")


def datum_from_fields(fields: dict, base: Path = Path(".")) -> SelbergDatum:
    q = fields["q"]
    if not isinstance(q, int) or isinstance(q, bool):
        raise ValidationError("q", "must be a positive integer")
    lambdas = fields["lambda"]
    if not isinstance(lambdas, list):
        raise ValidationError("lambda", "expected a list")
    mus = fields["mu"]
    if not isinstance(mus, list):
        raise ValidationError("mu", "expected a list of [re, im] pairs")
    pole_order = fields["pole_order"]
    if not isinstance(pole_order, int) or isinstance(pole_order, bool):
        raise ValidationError("pole_order", "must be a nonnegative integer")
    Q = fields["Q"]
    if not isinstance(Q, (int, float)) or isinstance(Q, bool):
        raise ValidationError("Q", "must be a positive real")
    return SelbergDatum(
        q=q, Q=float(Q), lambdas=tuple(float(x) for x in lambdas),
        mus=tuple(_pair(mu, "mu") for mu in mus), omega=_pair(fields["omega"], "omega"),
        pole_order=pole_order, coeff_source=_source(fields["coeffs"], base),
        label=fields.get("label", "F"))


def load_descriptor(path) -> SelbergDatum:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return datum_from_fields(parse_text(text), path.parent)


def resolve_datum(ref: str) -> SelbergDatum:
    """A built-in label or a descriptor path."""
    if ref in builtin_labels() or ref == "cusp_form_delta":
        return builtin(ref)
    path = Path(ref)
    if not path.exists():
        raise ValidationError("datum", f"{ref!r} is neither a built-in label "
                              f"({', '.join(builtin_labels())}) nor a descriptor file")
    return load_descriptor(path)

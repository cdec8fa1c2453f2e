"""File formats: matrix JSON/CSV, spectrum and series files, report
serialization, and the deterministic JSON emitter behind all of them.

Every float in a JSON document is printed with 17 significant digits so
any finite double survives a dump/load cycle bit for bit; CSV complex
tokens use shortest-repr parts for the same reason.
"""

import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, ShapeError
from .matrix import LaguerreSeries
from .params import BasisParams


def _fmt_float(x):
    x = float(x)
    if not math.isfinite(x):
        raise ParameterError(f"cannot serialize non-finite value {x}")
    s = "%.17g" % x
    if "." not in s and "e" not in s:
        # bare "-0" would reload as int 0 and drop the sign
        s += ".0"
    return s


def dumps_json(obj, indent=0):
    """Deterministic JSON: sorted keys, %.17g floats, 2-space indent."""
    pad = " " * indent
    inner = " " * (indent + 2)
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = []
        for k in sorted(obj):
            if not isinstance(k, str):
                raise ParameterError(f"JSON object keys must be strings, got {k!r}")
            items.append(f"{inner}{json.dumps(k)}: {dumps_json(obj[k], indent + 2)}")
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        # short numeric rows like [re, im] stay on one line
        if all(isinstance(v, (int, float, np.integer, np.floating)) for v in seq):
            return "[" + ", ".join(dumps_json(v) for v in seq) + "]"
        items = [f"{inner}{dumps_json(v, indent + 2)}" for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise ParameterError(f"cannot serialize object of type {type(obj).__name__}")


def _read_text(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParameterError(f"cannot read {path}: {exc}") from exc


def _write_text(path, text):
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _loads(text, what):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParameterError(f"invalid JSON in {what}: {exc}") from exc


# ---------------------------------------------------------------- matrices

def matrix_to_entries(a):
    a = np.asarray(a, dtype=complex)
    return [[float(v.real), float(v.imag)] for v in a.ravel(order="C")]


def _entries_to_matrix(m, entries, what):
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise ParameterError(f'"m" must be a positive integer in {what}')
    if not isinstance(entries, list) or len(entries) != m * m:
        raise ParameterError(f'"entries" must hold {m * m} pairs in {what}')
    flat = np.empty(m * m, dtype=complex)
    for i, pair in enumerate(entries):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParameterError(f"entry {i} is not an [re, im] pair in {what}")
        try:
            flat[i] = complex(float(pair[0]), float(pair[1]))
        except (TypeError, ValueError) as exc:
            raise ParameterError(f"entry {i} is not numeric in {what}") from exc
    if not np.all(np.isfinite(flat.real)) or not np.all(np.isfinite(flat.imag)):
        raise ParameterError(f"non-finite entries in {what}")
    return flat.reshape(m, m)


def dump_matrix_json(a):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"matrix must be square, got shape {a.shape}")
    doc = {"m": int(a.shape[0]), "entries": matrix_to_entries(a)}
    return dumps_json(doc) + "\n"


def format_complex_token(z):
    z = complex(z)
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


def parse_complex_token(tok, what="token"):
    try:
        return complex(tok.strip().replace("i", "j"))
    except ValueError as exc:
        raise ParameterError(f"bad complex {what}: {tok.strip()!r}") from exc


def dump_matrix_csv(a):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"matrix must be square, got shape {a.shape}")
    lines = [",".join(format_complex_token(v) for v in row) for row in a]
    return "\n".join(lines) + "\n"


def parse_matrix(text, what="matrix"):
    """Accept either the JSON object or the CSV token grid."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = _loads(text, what)
        if not isinstance(doc, dict) or "m" not in doc or "entries" not in doc:
            raise ParameterError(f'expected {{"m", "entries"}} object in {what}')
        return _entries_to_matrix(doc["m"], doc["entries"], what)
    rows = [ln for ln in (ln.strip() for ln in text.splitlines()) if ln]
    if not rows:
        raise ParameterError(f"empty {what}")
    mat = [
        [parse_complex_token(tok, what) for tok in ln.split(",")] for ln in rows
    ]
    m = len(mat)
    if any(len(r) != m for r in mat):
        raise ParameterError(f"{what} CSV is not a square grid")
    a = np.asarray(mat, dtype=complex)
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ParameterError(f"non-finite entries in {what}")
    return a


def load_matrix(path):
    return parse_matrix(_read_text(path), what=path)


def save_matrix(a, path, fmt="json"):
    if fmt == "json":
        _write_text(path, dump_matrix_json(a))
    elif fmt == "csv":
        _write_text(path, dump_matrix_csv(a))
    else:
        raise ParameterError(f"unknown matrix format {fmt!r}")


# ---------------------------------------------------------------- spectra

def dump_spectrum(lam):
    lam = np.asarray(lam, dtype=complex).ravel()
    return dumps_json([[float(z.real), float(z.imag)] for z in lam]) + "\n"


def parse_spectrum(text, what="spectrum"):
    doc = _loads(text, what)
    if not isinstance(doc, list) or not doc:
        raise ParameterError(f"{what} must be a non-empty JSON array of [re, im] pairs")
    lam = np.empty(len(doc), dtype=complex)
    for i, pair in enumerate(doc):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParameterError(f"element {i} of {what} is not an [re, im] pair")
        try:
            lam[i] = complex(float(pair[0]), float(pair[1]))
        except (TypeError, ValueError) as exc:
            raise ParameterError(f"element {i} of {what} is not numeric") from exc
    if not np.all(np.isfinite(lam.real)) or not np.all(np.isfinite(lam.imag)):
        raise ParameterError(f"non-finite values in {what}")
    return lam


def load_spectrum(path):
    return parse_spectrum(_read_text(path), what=path)


def save_spectrum(lam, path):
    _write_text(path, dump_spectrum(lam))


# ---------------------------------------------------------------- series

def dump_series(series: LaguerreSeries):
    p = series.params
    doc = {
        "params": {"tau": p.tau, "alpha": p.alpha, "n_trunc": p.n_trunc},
        "m": series.dim,
        "coeffs": [matrix_to_entries(c) for c in series.coeffs],
    }
    return dumps_json(doc) + "\n"


def parse_series(text, what="series"):
    doc = _loads(text, what)
    if not isinstance(doc, dict) or not {"params", "m", "coeffs"} <= set(doc):
        raise ParameterError(f'expected {{"params", "m", "coeffs"}} object in {what}')
    p = doc["params"]
    if not isinstance(p, dict) or not {"tau", "alpha", "n_trunc"} <= set(p):
        raise ParameterError(f'series "params" must hold tau, alpha, n_trunc in {what}')
    try:
        params = BasisParams(
            tau=float(p["tau"]), alpha=float(p["alpha"]), n_trunc=int(p["n_trunc"])
        )
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"bad series params in {what}: {exc}") from exc
    m = doc["m"]
    coeffs_doc = doc["coeffs"]
    if not isinstance(coeffs_doc, list) or len(coeffs_doc) != params.n_trunc + 1:
        raise ParameterError(
            f'"coeffs" must hold n_trunc + 1 = {params.n_trunc + 1} matrices in {what}'
        )
    coeffs = np.stack(
        [_entries_to_matrix(m, c, f"{what} coeff {n}") for n, c in enumerate(coeffs_doc)]
    )
    return LaguerreSeries(params=params, coeffs=coeffs)


def load_series(path):
    return parse_series(_read_text(path), what=path)


def save_series(series, path):
    _write_text(path, dump_series(series))


# ---------------------------------------------------------------- reports

def dump_report(doc: dict):
    return dumps_json(doc) + "\n"


def load_report(path):
    doc = _loads(_read_text(path), what=path)
    if not isinstance(doc, dict):
        raise ParameterError(f"report {path} is not a JSON object")
    return doc


def write_csv(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(str(v) for v in row))
    _write_text(path, "\n".join(lines) + "\n")

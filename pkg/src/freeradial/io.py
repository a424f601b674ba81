"""CSV/JSON file formats used by the command line tool.

Radial CSV ``n,re,im``; tree CSV ``word,re,im`` (words like ``a+b-a+``,
``e`` for the identity); transform CSV ``theta,re,im``; quadrature CSV
``theta_k,w_k``; measures as JSON.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import FormatError
from .hypergroup import RadialMeasure, measure_from_samples
from .radial import RadialFunction, TreeFunction
from .spherical import SphericalParameter, gauss_rule
from .words import format_word, letter_code, parse_word

RADIAL_HEADER = ["n", "re", "im"]
TREE_HEADER = ["word", "re", "im"]
TRANSFORM_HEADER = ["theta", "re", "im"]
QUADRATURE_HEADER = ["theta_k", "w_k"]


def fmt(v: float) -> str:
    return repr(float(v))


def atomic_write_text(path, text: str) -> None:
    """Write-then-rename so readers never see a partial file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _read_rows(path, header, text=None):
    """Yield (line_number, row) after checking the header."""
    if text is None:
        try:
            text = Path(path).read_text()
        except UnicodeDecodeError as exc:
            raise FormatError(f"not a text file ({exc})", path) from None
    reader = csv.reader(io.StringIO(text))
    try:
        first = next(reader)
    except StopIteration:
        raise FormatError("empty file", path, 1) from None
    if [h.strip() for h in first] != header:
        raise FormatError(f"expected header {','.join(header)}, got {','.join(first)}", path, 1)
    for row in reader:
        lineno = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise FormatError(f"expected {len(header)} fields, got {len(row)}", path, lineno)
        yield lineno, [c.strip() for c in row]


def _float(text, path, lineno):
    try:
        return float(text)
    except ValueError:
        raise FormatError(f"not a number: {text!r}", path, lineno) from None


def read_header(path) -> list[str]:
    with open(path, newline="") as fh:
        first = next(csv.reader(fh), None)
    if first is None:
        raise FormatError("empty file", path, 1)
    return [h.strip() for h in first]


def radial_to_csv(x: RadialFunction) -> str:
    return rows_to_csv(RADIAL_HEADER, [[n, fmt(v.real), fmt(v.imag)] for n, v in enumerate(x.values)])


def read_radial_csv(path, r: int) -> RadialFunction:
    entries = {}
    for lineno, (n, re, im) in _read_rows(path, RADIAL_HEADER):
        try:
            level = int(n)
        except ValueError:
            raise FormatError(f"level must be an integer, got {n!r}", path, lineno) from None
        if level < 0:
            raise FormatError(f"negative level {level}", path, lineno)
        if level in entries:
            raise FormatError(f"duplicate level {level}", path, lineno)
        entries[level] = complex(_float(re, path, lineno), _float(im, path, lineno))
    if not entries:
        raise FormatError("no data rows", path)
    vals = np.zeros(max(entries) + 1, dtype=complex)
    for k, v in entries.items():
        vals[k] = v
    return RadialFunction(r, vals)


def tree_to_csv(f: TreeFunction) -> str:
    keys = sorted(f.values, key=lambda w: (len(w), [letter_code(s) for s in w]))
    return rows_to_csv(TREE_HEADER, [[format_word(w), fmt(f.values[w].real), fmt(f.values[w].imag)] for w in keys])


def read_tree_csv(path, r: int) -> TreeFunction:
    vals = {}
    for lineno, (word, re, im) in _read_rows(path, TREE_HEADER):
        try:
            w = parse_word(word, r)
        except FormatError as exc:
            raise FormatError(str(exc), path, lineno) from None
        vals[w] = vals.get(w, 0j) + complex(_float(re, path, lineno), _float(im, path, lineno))
    return TreeFunction(r, vals)


def read_function_csv(path, r: int):
    """Radial or tree CSV, told apart by the header."""
    head = read_header(path)
    if head == RADIAL_HEADER:
        return read_radial_csv(path, r)
    if head == TREE_HEADER:
        return read_tree_csv(path, r)
    raise FormatError(f"unrecognized header {','.join(head)}", path, 1)


def transform_to_csv(thetas, values) -> str:
    return rows_to_csv(TRANSFORM_HEADER, [[fmt(t), fmt(v.real), fmt(v.imag)] for t, v in zip(thetas, np.asarray(values, dtype=complex))])


def read_transform_csv(path):
    thetas, vals = [], []
    for lineno, (t, re, im) in _read_rows(path, TRANSFORM_HEADER):
        thetas.append(_float(t, path, lineno))
        vals.append(complex(_float(re, path, lineno), _float(im, path, lineno)))
    if not thetas:
        raise FormatError("no data rows", path)
    return np.array(thetas), np.array(vals)


def quadrature_to_csv(rule) -> str:
    return rows_to_csv(QUADRATURE_HEADER, [[fmt(t), fmt(w)] for t, w in zip(rule.nodes, rule.weights)])


def read_quadrature_csv(path):
    nodes, weights = [], []
    for lineno, (t, w) in _read_rows(path, QUADRATURE_HEADER):
        nodes.append(_float(t, path, lineno))
        weights.append(_float(w, path, lineno))
    return np.array(nodes), np.array(weights)


def measure_to_dict(m: RadialMeasure, K: int) -> dict:
    atoms = [
        {"kind": p.kind, "value": p.value, "mass_re": float(np.real(a)), "mass_im": float(np.imag(a))}
        for p, a in m.atoms
    ]
    samples = []
    if m.density is not None:
        K = m.nodes_for(K)
        nodes = gauss_rule(2, K).nodes
        vals = m.density_on_rule(K)
        samples = [[float(t), float(v.real), float(v.imag)] for t, v in zip(nodes, vals)]
    return {"atoms": atoms, "density_samples": samples}


def measure_to_json(m: RadialMeasure, K: int) -> str:
    return json.dumps(measure_to_dict(m, K), indent=2) + "\n"


def measure_from_dict(data: dict, path=None) -> RadialMeasure:
    try:
        atoms = [
            (SphericalParameter(a["kind"], float(a["value"]), 2), complex(float(a["mass_re"]), float(a["mass_im"])))
            for a in data.get("atoms", [])
        ]
        samples = data.get("density_samples", [])
        thetas = [float(s[0]) for s in samples]
        vals = [complex(float(s[1]), float(s[2])) for s in samples]
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise FormatError(f"malformed measure: {exc}", path) from None
    return measure_from_samples(atoms, thetas, vals)


def read_measure_json(path) -> RadialMeasure:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", path, exc.lineno) from None
    if not isinstance(data, dict):
        raise FormatError("measure JSON must be an object", path)
    return measure_from_dict(data, path)

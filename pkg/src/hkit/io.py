"""Reading and writing sampled functions, coefficient tables and matrices.

Sampled functions are stored as CSV with header ``axis1,...,axisK,re,im``
and one row per grid point in row-major order, or as JSON with an explicit
grid block. Coefficient tables use ``alpha_1,...,alpha_n,re,im`` and
operator matrices ``alpha_1..alpha_n,beta_1..beta_n,re,im``.
"""

from __future__ import annotations

import csv
import json
import os

import numpy as np
from scipy.interpolate import FloaterHormannInterpolator

from .errors import InvalidGrid, ParseError
from .grids import (
    GAUSS_HERMITE,
    UNIFORM,
    GridSpec,
    PhaseSpaceFunction,
    SampledFunction,
    gauss_hermite_nodes,
    resample,
)
from .special import HermiteCoefficients
from .weyl import WeylOperatorMatrix

__all__ = [
    "FUNCTION_SCHEMA",
    "detect_grid",
    "ingest_function",
    "read_coefficients_csv",
    "read_matrix_csv",
    "write_coefficients_csv",
    "write_function",
    "write_matrix_csv",
]

FUNCTION_SCHEMA = {
    "type": "object",
    "required": ["grid", "values"],
    "properties": {
        "space": {"enum": ["function", "phase"]},
        "grid": {
            "type": "object",
            "required": ["nodes"],
            "properties": {
                "kind": {"enum": [GAUSS_HERMITE, UNIFORM, "nodes"]},
                "nodes": {"type": "array", "minItems": 1,
                          "items": {"type": "array", "minItems": 1, "items": {"type": "number"}}},
                "weights": {"type": "array",
                            "items": {"type": "array", "items": {"type": "number"}}},
                "scales": {"type": "array", "items": {"type": "number"}},
            },
        },
        "values": {
            "type": "object",
            "required": ["re", "im"],
            "properties": {
                "re": {"type": "array", "items": {"type": "number"}},
                "im": {"type": "array", "items": {"type": "number"}},
            },
        },
    },
}

_FMT = ".17g"


def _num(x):
    return format(float(x), _FMT)


def _axis_kind(x, rtol=1e-9):
    """Identify a node list: ``(kind, scale, weights)`` or ``None`` if irregular."""
    m = x.size
    if m >= 2:
        h = np.diff(x)
        if np.allclose(h, h[0], rtol=rtol, atol=0):
            return UNIFORM, float(h[0]), np.full(m, float(h[0]))
    g, w = gauss_hermite_nodes(m)
    if m >= 2 and g[-1] > 0:
        scale = x[-1] / g[-1]
        if scale > 0 and np.allclose(x, scale * g, rtol=rtol, atol=1e-12 * scale):
            return GAUSS_HERMITE, float(scale), scale * w
    return None


def detect_grid(nodes):
    """Build a :class:`GridSpec` from per-axis node lists.

    Returns ``None`` when an axis is neither uniform nor a scaled
    Gauss–Hermite node set, or when axes mix kinds.

    Raises
    ------
    InvalidGrid
        If an axis is not strictly increasing.
    """
    nodes = [np.asarray(x, dtype=float) for x in nodes]
    for a, x in enumerate(nodes):
        if x.size > 1 and np.any(np.diff(x) <= 0):
            raise InvalidGrid(f"axis {a + 1} is not strictly increasing")
    info = [_axis_kind(x) for x in nodes]
    if any(i is None for i in info) or len({i[0] for i in info}) != 1:
        return None
    return GridSpec(tuple(nodes), tuple(i[2] for i in info), info[0][0],
                    tuple(i[1] for i in info))


def _barycentric_resample(nodes, values, target):
    """Rational barycentric (Floater–Hormann) interpolation onto ``target``.

    Points outside the sampled range are set to zero (decaying data).
    """
    vals = np.asarray(values, dtype=complex)
    for a, x in enumerate(nodes):
        y = target.nodes[a]
        inside = (y >= x[0]) & (y <= x[-1])
        mat = np.zeros((y.size, x.size))
        if np.any(inside):
            d = min(3, x.size - 1)
            mat[inside] = FloaterHormannInterpolator(x, np.eye(x.size), d=d)(y[inside])
        vals = np.moveaxis(np.tensordot(mat, vals, axes=([1], [a])), 0, a)
    return vals


def _wrap(grid, values, space):
    cls = PhaseSpaceFunction if space == "phase" else SampledFunction
    return cls(grid, values)


def _resolve_space(K, space, n):
    if space is not None:
        if space not in ("function", "phase"):
            raise ParseError(f"unknown space {space!r}")
        if space == "phase" and K % 2:
            raise ParseError("phase-space data need an even number of axes")
        return space
    if n is not None and K == 2 * n:
        return "phase"
    return "function"


def _finish(nodes, values, space, target, weights=None, kind=None, scales=None):
    grid = None
    if weights is not None and kind in (GAUSS_HERMITE, UNIFORM):
        grid = GridSpec(tuple(nodes), tuple(np.asarray(w, float) for w in weights), kind,
                        tuple(scales) if scales is not None else (1.0,) * len(nodes))
    if grid is None:
        grid = detect_grid(nodes)
    if grid is None:
        if target is None:
            raise InvalidGrid("irregular node set: a target grid is needed for resampling")
        return _wrap(target, _barycentric_resample(nodes, values, target), space)
    f = _wrap(grid, values, space)
    if target is not None and target != grid:
        f = resample(f, target)
    return f


def _read_csv_function(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ParseError("empty file", 1)
    header = [h.strip() for h in rows[0]]
    if len(header) < 3 or header[-2:] != ["re", "im"]:
        raise ParseError("header must end with columns 're,im'", 1)
    K = len(header) - 2
    expected = [f"axis{k + 1}" for k in range(K)]
    if header[:K] != expected:
        raise ParseError(f"header must start with {','.join(expected)}", 1)
    data = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != K + 2:
            raise ParseError(f"expected {K + 2} fields, found {len(row)}", lineno)
        try:
            data.append([float(c) for c in row])
        except ValueError as exc:
            raise ParseError(f"non-numeric field ({exc})", lineno) from None
    if not data:
        raise ParseError("no data rows", 2)
    arr = np.array(data)
    return _tensor_from_rows(arr[:, :K], arr[:, K] + 1j * arr[:, K + 1])


def _tensor_from_rows(pts, vals):
    K = pts.shape[1]
    nodes = []
    for a in range(K):
        col = pts[:, a]
        _, first = np.unique(col, return_index=True)
        ordered = col[np.sort(first)]
        if ordered.size > 1 and np.any(np.diff(ordered) <= 0):
            raise InvalidGrid(f"axis {a + 1} is not monotone in row order")
        nodes.append(ordered)
    shape = tuple(x.size for x in nodes)
    if int(np.prod(shape)) != pts.shape[0]:
        raise ParseError(f"{pts.shape[0]} rows do not form a tensor grid of shape {shape}")
    mesh = np.stack(np.meshgrid(*nodes, indexing="ij"), axis=-1).reshape(-1, K)
    bad = np.nonzero(np.any(mesh != pts, axis=1))[0]
    if bad.size:
        raise ParseError("rows are not in row-major tensor order", int(bad[0]) + 2)
    return nodes, vals.reshape(shape)


def _read_json_function(path):
    import jsonschema

    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno) from None
    try:
        jsonschema.validate(doc, FUNCTION_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ParseError(f"schema violation at {list(exc.absolute_path)}: {exc.message}") from None
    g = doc["grid"]
    nodes = [np.asarray(x, dtype=float) for x in g["nodes"]]
    shape = tuple(x.size for x in nodes)
    re = np.asarray(doc["values"]["re"], dtype=float)
    im = np.asarray(doc["values"]["im"], dtype=float)
    if re.size != int(np.prod(shape)) or im.size != re.size:
        raise ParseError(f"values do not match the grid shape {shape}")
    for a, x in enumerate(nodes):
        if x.size > 1 and np.any(np.diff(x) <= 0):
            raise InvalidGrid(f"axis {a + 1} is not strictly increasing")
    extra = {"weights": g.get("weights"), "kind": g.get("kind"), "scales": g.get("scales")}
    return nodes, (re + 1j * im).reshape(shape), doc.get("space"), extra


def ingest_function(path, fmt=None, space=None, n=None, target=None):
    """Read a sampled function from CSV or JSON.

    Parameters
    ----------
    path : str
    fmt : {"csv", "json"}, optional
        Inferred from the file extension when omitted.
    space : {"function", "phase"}, optional
        Overrides the ``space`` field (JSON) and the axis-count rule.
    n : int, optional
        Configuration dimension; ``2n`` axes then denote phase space.
    target : GridSpec, optional
        Resample onto this grid when the node sets differ. Regular grids
        use their spectral interpolant; irregular node sets use rational
        barycentric interpolation and require a target.

    Raises
    ------
    ParseError
        Schema violations, with the offending line number where known.
    InvalidGrid
        Non-monotone axes or an irregular grid without a target.
    """
    fmt = fmt or os.path.splitext(path)[1].lstrip(".").lower()
    if fmt == "csv":
        nodes, vals = _read_csv_function(path)
        extra, declared = {}, None
    elif fmt == "json":
        nodes, vals, declared, extra = _read_json_function(path)
    else:
        raise ParseError(f"unknown input format {fmt!r}")
    space = _resolve_space(len(nodes), space or declared, n)
    return _finish(nodes, vals, space, target, **extra)


def write_function(f, path=None, fmt="csv"):
    """Write a sampled or phase-space function; returns the text."""
    pts = f.grid.points().reshape(-1, f.grid.dim)
    vals = f.values.ravel()
    if fmt == "csv":
        K = f.grid.dim
        lines = [",".join([f"axis{k + 1}" for k in range(K)] + ["re", "im"])]
        for p, v in zip(pts, vals):
            lines.append(",".join([_num(c) for c in p] + [_num(v.real), _num(v.imag)]))
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        doc = {
            "space": "phase" if isinstance(f, PhaseSpaceFunction) else "function",
            "grid": {"kind": f.grid.kind, "nodes": [x.tolist() for x in f.grid.nodes],
                     "weights": [w.tolist() for w in f.grid.weights],
                     "scales": list(f.grid.scales)},
            "values": {"re": vals.real.tolist(), "im": vals.imag.tolist()},
        }
        text = json.dumps(doc) + "\n"
    else:
        raise ParseError(f"unknown output format {fmt!r}")
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def write_coefficients_csv(c, path=None):
    """``alpha_1,...,alpha_n,re,im`` rows in graded order."""
    lines = [",".join([f"alpha_{j + 1}" for j in range(c.n)] + ["re", "im"])]
    for alpha, v in zip(c.indices, c.values):
        lines.append(",".join([str(a) for a in alpha] + [_num(v.real), _num(v.imag)]))
    text = "\n".join(lines) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def _read_index_csv(path, groups):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ParseError("empty file", 1)
    header = [h.strip() for h in rows[0]]
    if len(header) < 3 or header[-2:] != ["re", "im"]:
        raise ParseError("header must end with columns 're,im'", 1)
    width = len(header) - 2
    if width % len(groups):
        raise ParseError("index columns do not split evenly", 1)
    n = width // len(groups)
    expected = [f"{g}_{j + 1}" for g in groups for j in range(n)]
    if header[:width] != expected:
        raise ParseError(f"header must start with {','.join(expected)}", 1)
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != width + 2:
            raise ParseError(f"expected {width + 2} fields, found {len(row)}", lineno)
        try:
            idx = tuple(int(c) for c in row[:width])
            val = complex(float(row[width]), float(row[width + 1]))
        except ValueError as exc:
            raise ParseError(f"malformed field ({exc})", lineno) from None
        if any(i < 0 for i in idx):
            raise ParseError("negative multi-index", lineno)
        out.append((lineno, idx, val))
    return n, out


def read_coefficients_csv(path, N=None):
    """Read a coefficient table; missing indices are zero."""
    n, rows = _read_index_csv(path, ["alpha"])
    top = max((sum(i) for _, i, _ in rows), default=0)
    N = top if N is None else N
    entries = {}
    for lineno, idx, val in rows:
        if sum(idx) > N:
            continue
        if idx in entries:
            raise ParseError(f"duplicate index {idx}", lineno)
        entries[idx] = val
    return HermiteCoefficients.from_dict(n, N, entries)


def write_matrix_csv(M, path=None):
    """``alpha..., beta..., re, im`` rows for a :class:`WeylOperatorMatrix`."""
    n = M.n
    lines = [",".join([f"alpha_{j + 1}" for j in range(n)] + [f"beta_{j + 1}" for j in range(n)]
                      + ["re", "im"])]
    idx = M.indices
    for i, a in enumerate(idx):
        for j, b in enumerate(idx):
            v = M.matrix[i, j]
            lines.append(",".join([str(x) for x in a] + [str(x) for x in b]
                                  + [_num(v.real), _num(v.imag)]))
    text = "\n".join(lines) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def read_matrix_csv(path):
    """Inverse of :func:`write_matrix_csv`; missing entries are zero."""
    from .special import multi_indices

    n2, rows = _read_index_csv(path, ["alpha", "beta"])
    n = n2
    N = max((max(sum(r[1][:n]), sum(r[1][n:])) for r in rows), default=0)
    idx = multi_indices(n, N)
    pos = {a: i for i, a in enumerate(idx)}
    mat = np.zeros((len(idx), len(idx)), dtype=complex)
    for _, key, val in rows:
        mat[pos[key[:n]], pos[key[n:]]] = val
    return WeylOperatorMatrix(n, N, mat)

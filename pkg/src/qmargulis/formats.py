"""File formats: code descriptors (JSON), MacKay alist, and sparse coordinates."""

from __future__ import annotations

import json
import math
import os
from pathlib import Path

import numpy as np

from . import __version__
from .code import CssCode, assemble_code
from .errors import IntegrityError, ValidationError
from .generators import GeneratorSpec, check_spec
from .gf2 import BitMatrix

FORMAT_VERSION = 1


def _girth_json(g: float):
    return None if math.isinf(g) else int(g)


def _girth_from_json(g) -> float:
    return math.inf if g is None else int(g)


def code_descriptor(code: CssCode) -> dict:
    if code.spec is None:
        raise ValidationError("only codes built from a generator spec have descriptors")
    rows_hist = {int(k): int(v) for k, v in zip(*np.unique(code.hx.row_weights(), return_counts=True))}
    cols_hist = {int(k): int(v) for k, v in zip(*np.unique(code.hx.col_weights(), return_counts=True))}
    doc = {"format_version": FORMAT_VERSION, "generator": f"qmargulis {__version__}"}
    doc.update(code.spec.to_json())
    doc.update({
        "n": code.n,
        "k": code.k,
        "rank_x": code.rank_x,
        "rank_z": code.rank_z,
        "girth_x": _girth_json(code.girth_x),
        "girth_z": _girth_json(code.girth_z),
        "degree_profile": {
            "d_v": sorted(cols_hist),
            "d_c": sorted(rows_hist),
            "column_weights": {str(k): v for k, v in cols_hist.items()},
            "row_weights": {str(k): v for k, v in rows_hist.items()},
        },
        "label": code.label,
        "digest": code.digest(),
    })
    return doc


def write_descriptor(code: CssCode, path: str | os.PathLike) -> dict:
    doc = code_descriptor(code)
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return doc


def load_descriptor(path: str | os.PathLike, verify: bool = True) -> tuple[CssCode, dict]:
    """Rebuild a code from its descriptor.

    With ``verify`` the matrix digest and every cached parameter are
    recomputed and compared; any difference raises :class:`IntegrityError`.
    """
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read descriptor {path}: {exc}") from exc
    if doc.get("format_version") != FORMAT_VERSION:
        raise IntegrityError(f"unsupported descriptor format {doc.get('format_version')!r}")
    try:
        spec = GeneratorSpec.from_json(doc)
        check_spec(spec, allow_inverse_collisions=bool(doc.get("inverse_collisions")))
    except (KeyError, TypeError, ValueError) as exc:
        raise IntegrityError(f"descriptor generators are invalid: {exc}") from exc
    code = assemble_code(None, spec, with_girth=verify)
    if verify:
        problems = []
        if code.digest() != doc.get("digest"):
            problems.append("matrix digest")
        for key, value in (
            ("n", code.n),
            ("k", code.k),
            ("rank_x", code.rank_x),
            ("rank_z", code.rank_z),
            ("girth_x", _girth_json(code.girth_x)),
            ("girth_z", _girth_json(code.girth_z)),
        ):
            if doc.get(key) != value:
                problems.append(key)
        if problems:
            raise IntegrityError(f"descriptor {path} does not verify: {', '.join(problems)}")
    else:
        code = CssCode(
            hx=code.hx, hz=code.hz, k=int(doc["k"]), rank_x=code.rank_x, rank_z=code.rank_z,
            girth_x=_girth_from_json(doc.get("girth_x")),
            girth_z=_girth_from_json(doc.get("girth_z")), spec=spec,
        )
    return code, doc


# --------------------------------------------------------------------------
# alist


def to_alist(H: BitMatrix) -> str:
    """MacKay alist text; index lists are 1-based and zero-padded to the max degree."""
    dense = H.to_dense()
    m, n = dense.shape
    col_w = dense.sum(axis=0).astype(int)
    row_w = dense.sum(axis=1).astype(int)
    max_c = int(col_w.max()) if n else 0
    max_r = int(row_w.max()) if m else 0
    lines = [f"{n} {m}", f"{max_c} {max_r}",
             " ".join(map(str, col_w)), " ".join(map(str, row_w))]
    for j in range(n):
        idx = (np.flatnonzero(dense[:, j]) + 1).tolist()
        lines.append(" ".join(map(str, idx + [0] * (max_c - len(idx)))))
    for i in range(m):
        idx = (np.flatnonzero(dense[i]) + 1).tolist()
        lines.append(" ".join(map(str, idx + [0] * (max_r - len(idx)))))
    return "\n".join(lines) + "\n"


def from_alist(text: str) -> BitMatrix:
    rows = [[int(x) for x in ln.split()] for ln in text.splitlines() if ln.strip()]
    try:
        n, m = rows[0]
        col_w = rows[2]
        row_w = rows[3]
    except (IndexError, ValueError) as exc:
        raise ValidationError("malformed alist header") from exc
    if len(rows) < 4 + n + m or len(col_w) != n or len(row_w) != m:
        raise ValidationError("alist body does not match its header")
    dense = np.zeros((m, n), dtype=np.uint8)
    for j in range(n):
        for i in rows[4 + j]:
            if i:
                dense[i - 1, j] = 1
    for i in range(m):
        support = [j - 1 for j in rows[4 + n + i] if j]
        if sorted(np.flatnonzero(dense[i]).tolist()) != sorted(support):
            raise ValidationError(f"alist row {i + 1} disagrees with the column lists")
    if not (np.array_equal(dense.sum(axis=0), col_w) and np.array_equal(dense.sum(axis=1), row_w)):
        raise ValidationError("alist degree lines disagree with the index lists")
    return BitMatrix.from_dense(dense)


def write_alist(H: BitMatrix, path) -> None:
    Path(path).write_text(to_alist(H), encoding="utf-8")


def read_alist(path) -> BitMatrix:
    return from_alist(Path(path).read_text(encoding="utf-8"))


# --------------------------------------------------------------------------
# coordinates


def to_coords(H: BitMatrix) -> str:
    """One ``row col`` pair per nonzero, 0-based, row-major order."""
    rows, cols = np.nonzero(H.to_dense())
    return "".join(f"{r} {c}\n" for r, c in zip(rows.tolist(), cols.tolist()))


def from_coords(text: str, shape: tuple[int, int]) -> BitMatrix:
    dense = np.zeros(shape, dtype=np.uint8)
    for ln in text.splitlines():
        if ln.strip():
            r, c = map(int, ln.split())
            dense[r, c] = 1
    return BitMatrix.from_dense(dense)


def write_coords(H: BitMatrix, path) -> None:
    Path(path).write_text(to_coords(H), encoding="utf-8")

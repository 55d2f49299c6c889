"""Two-block CSS codes on the left-right Cayley complex of SL(2, p).

Qubits sit on two copies ``V0`` and ``V1`` of the group (columns
``[0, |G|)`` and ``[|G|, 2|G|)``); X checks and Z checks each sit on one copy.
With ``L`` the biadjacency of the left action of A and ``R`` that of the
right action of B, the checks are ``hx = [L | R]`` and ``hz = [R^T | L^T]``.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import gf2
from .errors import ConsistencyError, ValidationError
from .generators import GeneratorSpec
from .gf2 import BitMatrix
from .sl2 import GroupElement, GroupIndex, enumerate_group
from .tanner import degree_profile, girth


def _biadjacency(index: GroupIndex, gens: Sequence[GroupElement], left: bool) -> BitMatrix:
    if len(set(gens)) != len(gens):
        raise ValidationError("duplicate generators would create multi-edges")
    for s in gens:
        if s.p != index.p:
            raise ValidationError(f"generator {s} is not an element of SL(2, {index.p})")
    size = len(index)
    dense = np.zeros((size, size), dtype=np.uint8)
    rows = np.arange(size)
    for s in gens:
        perm = index.left_action(s) if left else index.right_action(s)
        dense[rows, perm] = 1
    return BitMatrix.from_dense(dense)


def build_left_biadjacency(index: GroupIndex, gens: Sequence[GroupElement]) -> BitMatrix:
    """``M[g, h] = 1`` iff ``h = a g`` for some ``a`` in ``gens``."""
    return _biadjacency(index, gens, left=True)


def build_right_biadjacency(index: GroupIndex, gens: Sequence[GroupElement]) -> BitMatrix:
    """``M[g, h] = 1`` iff ``h = g b`` for some ``b`` in ``gens``."""
    return _biadjacency(index, gens, left=False)


def css_check(hx, hz) -> bool:
    """True iff ``hx @ hz.T == 0`` over GF(2)."""
    hx, hz = gf2._coerce(hx), gf2._coerce(hz)
    if hx.ncols != hz.ncols:
        raise ValidationError(f"column counts differ: {hx.ncols} != {hz.ncols}")
    out = gf2._matmul_packed(hx.words, hz.words)
    return not out.any()


@dataclass(frozen=True)
class CssCode:
    hx: BitMatrix
    hz: BitMatrix
    k: int
    rank_x: int
    rank_z: int
    girth_x: float = math.inf
    girth_z: float = math.inf
    spec: GeneratorSpec | None = None
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def n(self) -> int:
        return self.hx.ncols

    @property
    def redundancy_x(self) -> int:
        """Number of redundant X checks."""
        return self.hx.nrows - self.rank_x

    @property
    def redundancy_z(self) -> int:
        return self.hz.nrows - self.rank_z

    @property
    def girth(self) -> float:
        return min(self.girth_x, self.girth_z)

    def degree_profile(self) -> dict:
        """Check degrees and qubit degrees (the same for hx and hz by construction)."""
        rows_x, cols_x = degree_profile(self.hx)
        return {"d_v": sorted(cols_x), "d_c": sorted(rows_x)}

    def digest(self) -> str:
        return hashlib.sha256((self.hx.digest() + self.hz.digest()).encode()).hexdigest()

    @property
    def label(self) -> str:
        if self.spec is None:
            return f"css-n{self.n}"
        prof = self.degree_profile()
        g = self.girth
        gl = "inf" if math.isinf(g) else str(int(g))
        return f"P{self.spec.p}G{gl}D{max(prof['d_c'])}"


def compute_dimension(code_or_hx, hz=None) -> int:
    """``k = n - rank(hx) - rank(hz)``."""
    if hz is None:
        hx, hz = code_or_hx.hx, code_or_hx.hz
    else:
        hx = code_or_hx
    hx, hz = gf2._coerce(hx), gf2._coerce(hz)
    k = hx.ncols - gf2.rank(hx) - gf2.rank(hz)
    if k < 0:
        raise ConsistencyError("negative dimension: the matrices are not CSS-orthogonal")
    return k


def from_matrices(hx, hz, spec: GeneratorSpec | None = None, with_girth: bool = True) -> CssCode:
    hx, hz = gf2._coerce(hx), gf2._coerce(hz)
    if not css_check(hx, hz):
        raise ConsistencyError("hx @ hz.T != 0")
    rx, rz = gf2.rank(hx), gf2.rank(hz)
    gx = girth(hx) if with_girth else math.inf
    gz = girth(hz) if with_girth else math.inf
    return CssCode(
        hx=hx, hz=hz, k=hx.ncols - rx - rz, rank_x=rx, rank_z=rz,
        girth_x=gx, girth_z=gz, spec=spec, meta={"girth_computed": with_girth},
    )


def check_matrices(index: GroupIndex, spec: GeneratorSpec) -> tuple[BitMatrix, BitMatrix]:
    left = build_left_biadjacency(index, spec.set_a)
    right = build_right_biadjacency(index, spec.set_b)
    L, R = left.to_dense(), right.to_dense()
    hx = BitMatrix.from_dense(np.hstack([L, R]))
    hz = BitMatrix.from_dense(np.hstack([R.T, L.T]))
    return hx, hz


def assemble_code(
    index: GroupIndex | None, spec: GeneratorSpec, with_girth: bool = True
) -> CssCode:
    """Assemble ``(hx, hz)`` for a generator spec and compute its parameters."""
    if index is None:
        index = enumerate_group(spec.p)
    elif index.p != spec.p:
        raise ValidationError(f"group index is for p={index.p}, spec for p={spec.p}")
    hx, hz = check_matrices(index, spec)
    if not css_check(hx, hz):
        raise ConsistencyError("assembled code violates hx @ hz.T = 0")
    sa, sb = len(spec.set_a), len(spec.set_b)
    size = len(index)
    for name, h, w0, w1 in (("hx", hx, sa, sb), ("hz", hz, sb, sa)):
        cols = h.col_weights()
        if (
            not np.all(h.row_weights() == sa + sb)
            or not np.all(cols[:size] == w0)
            or not np.all(cols[size:] == w1)
        ):
            raise ConsistencyError(f"{name} has an unexpected degree profile")
    return from_matrices(hx, hz, spec=spec, with_girth=with_girth)

"""BP-OSD syndrome decoding for CSS codes.

Belief propagation runs in the log-likelihood-ratio domain (positive means
"probably no flip").  When BP does not reproduce the syndrome, ordered
statistics decoding re-solves the syndrome equation on the columns BP
considers most likely flipped and searches exhaustively over the ``order``
most suspicious remaining columns.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass

import numpy as np
from numba import njit

from .errors import ConsistencyError, DecodeFailure, ValidationError
from .gf2 import BitMatrix, RowSpace, _rref_inplace, as_bitvector

LLR_CLAMP = 30.0
MAX_OSD_ORDER = 20

BP_VARIANTS = ("sum-product", "min-sum")
SCHEDULES = ("flooding", "serial")
OSD_WEIGHTINGS = ("soft", "hamming")


@dataclass(frozen=True)
class DecoderConfig:
    """Decoder parameters; ``max_iterations=None`` means "use the blocklength"."""

    max_iterations: int | None = None
    bp_variant: str = "sum-product"
    ms_scaling: float = 0.75
    schedule: str = "flooding"
    osd_order: int = 10
    osd_weighting: str = "soft"

    def __post_init__(self) -> None:
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValidationError("max_iterations must be at least 1")
        if not 0 <= self.osd_order <= MAX_OSD_ORDER:
            raise ValidationError(f"osd_order must lie in [0, {MAX_OSD_ORDER}]")
        if self.bp_variant not in BP_VARIANTS:
            raise ValidationError(f"unknown BP variant {self.bp_variant!r}")
        if self.schedule not in SCHEDULES:
            raise ValidationError(f"unknown schedule {self.schedule!r}")
        if self.osd_weighting not in OSD_WEIGHTINGS:
            raise ValidationError(f"unknown OSD weighting {self.osd_weighting!r}")
        if not 0.0 < self.ms_scaling <= 1.0:
            raise ValidationError("ms_scaling must lie in (0, 1]")

    def iterations_for(self, n: int) -> int:
        return n if self.max_iterations is None else self.max_iterations

    def to_json(self, n: int | None = None) -> dict:
        doc = asdict(self)
        if n is not None:
            doc["max_iterations"] = self.iterations_for(n)
        return doc

    def digest(self, n: int | None = None) -> str:
        blob = json.dumps(self.to_json(n), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class DecodeOutcome:
    estimate: np.ndarray
    bp_converged: bool
    iterations_used: int
    soft: np.ndarray
    osd_invoked: bool = False


# --------------------------------------------------------------------------
# kernels


@njit(cache=True, nogil=True)
def _syndrome_ok(hard, syndrome, chk_ptr, chk_var):
    for c in range(syndrome.shape[0]):
        acc = 0
        for e in range(chk_ptr[c], chk_ptr[c + 1]):
            acc ^= hard[chk_var[e]]
        if acc != syndrome[c]:
            return False
    return True


@njit(cache=True, nogil=True)
def _check_update(c, syndrome, chk_ptr, v2c, c2v, min_sum, alpha, clamp):
    start, stop = chk_ptr[c], chk_ptr[c + 1]
    sign0 = -1.0 if syndrome[c] else 1.0
    if min_sum:
        sgn = sign0
        m1 = np.inf
        m2 = np.inf
        arg = -1
        for e in range(start, stop):
            x = v2c[e]
            if x < 0.0:
                sgn = -sgn
            a = abs(x)
            if a < m1:
                m2 = m1
                m1 = a
                arg = e
            elif a < m2:
                m2 = a
        for e in range(start, stop):
            mag = m2 if e == arg else m1
            s = sgn
            if v2c[e] < 0.0:
                s = -s
            c2v[e] = s * alpha * min(mag, clamp)
    else:
        # leave-one-out products of tanh(x / 2) by prefix and suffix sweeps
        prod = 1.0
        for e in range(start, stop):
            c2v[e] = prod
            prod *= math.tanh(0.5 * v2c[e])
        prod = 1.0
        for e in range(stop - 1, start - 1, -1):
            t = c2v[e] * prod * sign0
            prod *= math.tanh(0.5 * v2c[e])
            if t >= 1.0:
                c2v[e] = clamp
            elif t <= -1.0:
                c2v[e] = -clamp
            else:
                val = 2.0 * math.atanh(t)
                c2v[e] = min(max(val, -clamp), clamp)


@njit(cache=True, nogil=True)
def _bp_kernel(syndrome, prior_llr, chk_ptr, chk_var, var_ptr, var_edge,
               max_iter, min_sum, alpha, serial, clamp, posterior, hard):
    """Run BP; fills ``posterior``/``hard`` and returns ``(converged, iterations)``."""
    n = posterior.shape[0]
    m = syndrome.shape[0]
    n_edges = chk_var.shape[0]
    v2c = np.empty(n_edges)
    c2v = np.zeros(n_edges)
    for v in range(n):
        posterior[v] = prior_llr
        hard[v] = 1 if prior_llr < 0.0 else 0
    if _syndrome_ok(hard, syndrome, chk_ptr, chk_var):
        return True, 0
    for e in range(n_edges):
        v2c[e] = prior_llr
    for it in range(1, max_iter + 1):
        if serial:
            for c in range(m):
                start, stop = chk_ptr[c], chk_ptr[c + 1]
                for e in range(start, stop):
                    v2c[e] = posterior[chk_var[e]] - c2v[e]
                _check_update(c, syndrome, chk_ptr, v2c, c2v, min_sum, alpha, clamp)
                for e in range(start, stop):
                    x = v2c[e] + c2v[e]
                    posterior[chk_var[e]] = min(max(x, -clamp), clamp)
        else:
            for c in range(m):
                _check_update(c, syndrome, chk_ptr, v2c, c2v, min_sum, alpha, clamp)
            for v in range(n):
                total = prior_llr
                for k in range(var_ptr[v], var_ptr[v + 1]):
                    total += c2v[var_edge[k]]
                posterior[v] = total
                for k in range(var_ptr[v], var_ptr[v + 1]):
                    e = var_edge[k]
                    x = total - c2v[e]
                    v2c[e] = min(max(x, -clamp), clamp)
        for v in range(n):
            hard[v] = 1 if posterior[v] < 0.0 else 0
        if _syndrome_ok(hard, syndrome, chk_ptr, chk_var):
            return True, it
    return False, max_iter


@njit(cache=True, nogil=True)
def _osd_kernel(dense, syndrome, order, cost, osd_order):
    """OSD with exhaustive search; returns ``(estimate, feasible)``.

    ``order`` lists columns from most to least likely flipped and ``cost``
    gives the per-column penalty of setting a bit.
    """
    m, n = dense.shape
    w = (n + 1 + 63) // 64
    rows = np.zeros((m, w), dtype=np.uint64)
    one = np.uint64(1)
    for i in range(m):
        for jj in range(n):
            if dense[i, order[jj]]:
                rows[i, jj >> 6] |= one << np.uint64(jj & 63)
        if syndrome[i]:
            rows[i, n >> 6] |= one << np.uint64(n & 63)
    pivots = _rref_inplace(rows, n)
    r = pivots.shape[0]
    sw, sb = n >> 6, np.uint64(n & 63)
    out = np.zeros(n, dtype=np.uint8)
    for i in range(r, m):
        if (rows[i, sw] >> sb) & one:
            return out, False

    is_pivot = np.zeros(n, dtype=np.bool_)
    for i in range(r):
        is_pivot[pivots[i]] = True
    t = 0
    search = np.empty(min(osd_order, n), dtype=np.int64)
    for jj in range(n):
        if t == search.shape[0]:
            break
        if not is_pivot[jj]:
            search[t] = jj
            t += 1

    rhs = np.empty(r, dtype=np.uint8)
    for i in range(r):
        rhs[i] = (rows[i, sw] >> sb) & one
    # column of R for each searched position, restricted to the pivot rows
    cols = np.empty((t, r), dtype=np.uint8)
    for a in range(t):
        jj = search[a]
        wi, bi = jj >> 6, np.uint64(jj & 63)
        for i in range(r):
            cols[a, i] = (rows[i, wi] >> bi) & one

    piv_cost = np.empty(r)
    for i in range(r):
        piv_cost[i] = cost[order[pivots[i]]]
    search_cost = np.empty(t)
    for a in range(t):
        search_cost[a] = cost[order[search[a]]]

    best = np.inf
    best_mask = 0
    vals = np.empty(r, dtype=np.uint8)
    for mask in range(1 << t):
        total = 0.0
        for i in range(r):
            vals[i] = rhs[i]
        for a in range(t):
            if (mask >> a) & 1:
                total += search_cost[a]
                for i in range(r):
                    vals[i] ^= cols[a, i]
        for i in range(r):
            if vals[i]:
                total += piv_cost[i]
        if total < best:
            best = total
            best_mask = mask

    for i in range(r):
        vals[i] = rhs[i]
    for a in range(t):
        if (best_mask >> a) & 1:
            out[order[search[a]]] = 1
            for i in range(r):
                vals[i] ^= cols[a, i]
    for i in range(r):
        if vals[i]:
            out[order[pivots[i]]] = 1
    return out, True


# --------------------------------------------------------------------------


def _validate_prior(prior: float) -> None:
    if not 0.0 < prior < 0.5:
        raise ValidationError(f"prior flip probability {prior} must lie in (0, 0.5)")


class BpOsdDecoder:
    """Decoder bound to one parity-check matrix.

    Holds the Tanner graph layout; each :meth:`decode` call allocates its own
    message buffers, so one instance may serve several threads.
    """

    def __init__(self, H, cfg: DecoderConfig | None = None):
        H = H if isinstance(H, BitMatrix) else BitMatrix.from_dense(H)
        self.H = H
        self.cfg = cfg or DecoderConfig()
        dense = H.to_dense()
        self._dense = np.ascontiguousarray(dense)
        rows, cols = np.nonzero(dense)  # row-major, so edges are grouped by check
        self._chk_var = cols.astype(np.int64)
        self._chk_ptr = np.zeros(H.nrows + 1, dtype=np.int64)
        np.add.at(self._chk_ptr, rows + 1, 1)
        self._chk_ptr = np.cumsum(self._chk_ptr)
        by_var = np.argsort(cols, kind="stable")
        self._var_edge = by_var.astype(np.int64)
        self._var_ptr = np.zeros(H.ncols + 1, dtype=np.int64)
        np.add.at(self._var_ptr, cols + 1, 1)
        self._var_ptr = np.cumsum(self._var_ptr)

    @property
    def max_iterations(self) -> int:
        return self.cfg.iterations_for(self.H.ncols)

    def bp(self, syndrome, prior: float) -> DecodeOutcome:
        _validate_prior(prior)
        syndrome = as_bitvector(syndrome, self.H.nrows)
        n = self.H.ncols
        posterior = np.empty(n)
        hard = np.empty(n, dtype=np.uint8)
        prior_llr = math.log((1.0 - prior) / prior)
        converged, iters = _bp_kernel(
            syndrome, prior_llr, self._chk_ptr, self._chk_var, self._var_ptr,
            self._var_edge, self.max_iterations, self.cfg.bp_variant == "min-sum",
            self.cfg.ms_scaling, self.cfg.schedule == "serial", LLR_CLAMP,
            posterior, hard,
        )
        return DecodeOutcome(hard, bool(converged), int(iters), posterior)

    def osd(self, syndrome, soft, order: int | None = None,
            weighting: str | None = None) -> np.ndarray:
        syndrome = as_bitvector(syndrome, self.H.nrows)
        soft = np.asarray(soft, dtype=np.float64)
        if soft.shape != (self.H.ncols,):
            raise ValidationError("soft vector length must equal the number of columns")
        order = self.cfg.osd_order if order is None else order
        if not 0 <= order <= MAX_OSD_ORDER:
            raise ValidationError(f"osd order must lie in [0, {MAX_OSD_ORDER}]")
        weighting = weighting or self.cfg.osd_weighting
        if weighting not in OSD_WEIGHTINGS:
            raise ValidationError(f"unknown OSD weighting {weighting!r}")
        # most likely flipped first; stable so ties keep column order
        col_order = np.argsort(soft, kind="stable").astype(np.int64)
        cost = soft if weighting == "soft" else np.ones_like(soft)
        est, ok = _osd_kernel(self._dense, syndrome, col_order, cost, order)
        if not ok:
            raise DecodeFailure("syndrome is not in the column space of H")
        return est

    def decode(self, syndrome, prior: float) -> DecodeOutcome:
        out = self.bp(syndrome, prior)
        if not out.bp_converged:
            out.estimate = self.osd(syndrome, out.soft)
            out.osd_invoked = True
        return out


def bp_decode(H, syndrome, prior: float, cfg: DecoderConfig | None = None) -> DecodeOutcome:
    return BpOsdDecoder(H, cfg).bp(syndrome, prior)


def osd_postprocess(H, syndrome, soft, order: int = 10, weighting: str = "soft") -> np.ndarray:
    return BpOsdDecoder(H).osd(syndrome, soft, order, weighting)


@dataclass
class CssDecodeResult:
    est_ez: np.ndarray
    est_ex: np.ndarray
    outcome_x: DecodeOutcome
    outcome_z: DecodeOutcome

    @property
    def iterations(self) -> int:
        return self.outcome_x.iterations_used + self.outcome_z.iterations_used

    @property
    def bp_converged(self) -> bool:
        return self.outcome_x.bp_converged and self.outcome_z.bp_converged


class CssDecoder:
    """Independent BP-OSD decoding of the two CSS components of a code.

    ``hx`` checks see Z-type errors and ``hz`` checks see X-type errors.
    """

    def __init__(self, code, cfg: DecoderConfig | None = None):
        self.code = code
        self.cfg = cfg or DecoderConfig()
        self.dec_x = BpOsdDecoder(code.hx, self.cfg)
        self.dec_z = BpOsdDecoder(code.hz, self.cfg)
        self._stab_z = RowSpace(code.hz)
        self._stab_x = RowSpace(code.hx)

    def decode(self, syndrome_x, syndrome_z, p_phys: float) -> CssDecodeResult:
        # p_phys = 0 only ever produces zero syndromes; keep the prior valid
        prior = max(2.0 * p_phys / 3.0, 1e-12)
        out_x = self.dec_x.decode(syndrome_x, prior)
        out_z = self.dec_z.decode(syndrome_z, prior)
        return CssDecodeResult(out_x.estimate, out_z.estimate, out_x, out_z)

    def is_logical_failure(self, residual_ex, residual_ez) -> bool:
        """Residuals that commute with every check but are not stabilizers."""
        residual_ex = as_bitvector(residual_ex, self.code.n)
        residual_ez = as_bitvector(residual_ez, self.code.n)
        if (self.dec_x.H @ residual_ez).any() or (self.dec_z.H @ residual_ex).any():
            raise ConsistencyError("residual error has a nonzero syndrome")
        return residual_ez not in self._stab_z or residual_ex not in self._stab_x

    def component_failures(self, residual_ex, residual_ez) -> tuple[bool, bool]:
        """``(x_failed, z_failed)`` for residuals already known to be syndrome-free."""
        return residual_ex not in self._stab_x, residual_ez not in self._stab_z


def decode_css(code, syndrome_x, syndrome_z, p_phys: float,
               cfg: DecoderConfig | None = None) -> CssDecodeResult:
    return CssDecoder(code, cfg).decode(syndrome_x, syndrome_z, p_phys)


def is_logical_failure(code, residual_ex, residual_ez) -> bool:
    return CssDecoder(code).is_logical_failure(residual_ex, residual_ez)

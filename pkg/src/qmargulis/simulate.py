"""Monte Carlo estimation of the logical error rate."""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from statistics import NormalDist
from typing import Sequence

import numpy as np

from . import __version__
from .channel import RNG_ALGORITHM, RngStream, sample
from .decoder import CssDecoder, DecoderConfig
from .errors import ValidationError
from .gf2 import mat_vec

CSV_HEADER = (
    "code_id,p_phys,trials,failures,ler,ci_low,ci_high,"
    "bp_only_failures,mean_iterations,seed,config_digest"
)


@dataclass(frozen=True)
class TrialPolicy:
    min_trials: int = 10_000
    target_failures: int = 100
    max_trials: int = 1_000_000
    batch_size: int = 1_000

    def __post_init__(self) -> None:
        if self.min_trials < 1 or self.target_failures < 1 or self.batch_size < 1:
            raise ValidationError("trial counts must be positive")
        if self.max_trials < self.min_trials:
            raise ValidationError("max_trials must be at least min_trials")


def wilson_interval(failures: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        return 0.0, 1.0
    z = NormalDist().inv_cdf(0.5 + confidence / 2.0)
    phat = failures / trials
    denom = 1.0 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    # clamp so rounding can never push phat outside its own interval
    return max(0.0, min(phat, centre - half)), min(1.0, max(phat, centre + half))


@dataclass
class Tally:
    trials: int = 0
    failures: int = 0
    bp_only_failures: int = 0
    iterations: int = 0
    x_failures: int = 0
    z_failures: int = 0
    syndrome_mismatches: int = 0

    def __iadd__(self, other: Tally) -> Tally:
        for name in self.__dataclass_fields__:
            setattr(self, name, getattr(self, name) + getattr(other, name))
        return self


@dataclass
class SimRecord:
    code_id: str
    p_phys: float
    trials: int
    failures: int
    ler: float
    ci_low: float
    ci_high: float
    bp_only_failures: int
    mean_iterations: float
    seed: int
    config_digest: str
    truncated: bool = False
    x_failures: int = 0
    z_failures: int = 0
    extra: dict = field(default_factory=dict, repr=False)

    def csv_row(self) -> str:
        return ",".join([
            self.code_id,
            f"{self.p_phys:.6g}",
            str(self.trials),
            str(self.failures),
            f"{self.ler:.6e}",
            f"{self.ci_low:.6e}",
            f"{self.ci_high:.6e}",
            str(self.bp_only_failures),
            f"{self.mean_iterations:.4f}",
            str(self.seed),
            self.config_digest,
        ])


def run_trials(decoder: CssDecoder, p_phys: float, seed: int, start: int, stop: int) -> Tally:
    """Simulate trials ``start..stop-1``; trial ``t`` draws from stream ``t``."""
    code = decoder.code
    tally = Tally()
    for t in range(start, stop):
        err = sample(code.n, p_phys, RngStream(seed, t))
        sx = mat_vec(code.hx, err.ez)
        sz = mat_vec(code.hz, err.ex)
        res = decoder.decode(sx, sz, p_phys)
        rex = res.est_ex ^ err.ex
        rez = res.est_ez ^ err.ez
        if (mat_vec(code.hx, rez).any()) or (mat_vec(code.hz, rex).any()):
            tally.syndrome_mismatches += 1
        x_fail, z_fail = decoder.component_failures(rex, rez)
        failed = x_fail or z_fail
        tally.trials += 1
        tally.failures += failed
        tally.x_failures += x_fail
        tally.z_failures += z_fail
        tally.bp_only_failures += failed or not res.bp_converged
        tally.iterations += res.iterations
    return tally


def _run_range(decoder, p_phys, seed, start, stop, workers) -> Tally:
    if workers <= 1 or stop - start < 2:
        return run_trials(decoder, p_phys, seed, start, stop)
    bounds = np.linspace(start, stop, workers + 1).astype(int)
    total = Tally()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(run_trials, decoder, p_phys, seed, int(a), int(b))
            for a, b in zip(bounds[:-1], bounds[1:])
            if b > a
        ]
        for fut in futures:
            total += fut.result()
    return total


def run_point(
    code,
    p_phys: float,
    policy: TrialPolicy | None = None,
    cfg: DecoderConfig | None = None,
    seed: int = 0,
    workers: int = 1,
    code_id: str | None = None,
    decoder: CssDecoder | None = None,
) -> SimRecord:
    """Estimate the logical error rate at one physical error rate.

    Runs ``min_trials`` trials, then continues in batches until
    ``target_failures`` failures are seen or ``max_trials`` is reached.
    """
    policy = policy or TrialPolicy()
    cfg = cfg or DecoderConfig()
    if not 0.0 <= p_phys <= 1.0:
        raise ValidationError(f"p_phys={p_phys} is outside [0, 1]")
    decoder = decoder or CssDecoder(code, cfg)
    tally = _run_range(decoder, p_phys, seed, 0, policy.min_trials, workers)
    # p_phys = 0 can never fail, so there is nothing to continue for
    while p_phys > 0 and tally.failures < policy.target_failures and tally.trials < policy.max_trials:
        step = min(policy.batch_size, policy.max_trials - tally.trials)
        tally += _run_range(decoder, p_phys, seed, tally.trials, tally.trials + step, workers)
    lo, hi = wilson_interval(tally.failures, tally.trials)
    return SimRecord(
        code_id=code_id or getattr(code, "label", "code"),
        p_phys=p_phys,
        trials=tally.trials,
        failures=tally.failures,
        ler=tally.failures / tally.trials,
        ci_low=lo,
        ci_high=hi,
        bp_only_failures=tally.bp_only_failures,
        mean_iterations=tally.iterations / tally.trials,
        seed=seed,
        config_digest=cfg.digest(code.n),
        truncated=p_phys > 0 and tally.failures < policy.target_failures,
        x_failures=tally.x_failures,
        z_failures=tally.z_failures,
        extra={"syndrome_mismatches": tally.syndrome_mismatches},
    )


def csv_preamble(code, policy: TrialPolicy, cfg: DecoderConfig, seed: int) -> list[str]:
    digest = code.digest() if hasattr(code, "digest") else "unknown"
    return [
        f"# qmargulis {__version__}",
        f"# rng: {RNG_ALGORITHM}",
        f"# seed: {seed}",
        f"# decoder: {json.dumps(cfg.to_json(code.n), sort_keys=True)}",
        f"# policy: {json.dumps(policy.__dict__, sort_keys=True)}",
        f"# code_digest: {digest}",
    ]


def run_sweep(
    code,
    p_list: Sequence[float],
    policy: TrialPolicy | None = None,
    cfg: DecoderConfig | None = None,
    seed: int = 0,
    workers: int = 1,
    out: str | os.PathLike | None = None,
    code_id: str | None = None,
) -> list[SimRecord]:
    """Run :func:`run_point` for each error rate, appending CSV rows as they finish."""
    p_list = [float(x) for x in p_list]
    if not p_list:
        raise ValidationError("the error-rate list is empty")
    if any(b < a for a, b in zip(p_list, p_list[1:])):
        raise ValidationError("error rates must be in ascending order")
    policy = policy or TrialPolicy()
    cfg = cfg or DecoderConfig()
    decoder = CssDecoder(code, cfg)
    fh = None
    if out is not None:
        fh = Path(out).open("w", encoding="utf-8", newline="\n")
        fh.write("\n".join(csv_preamble(code, policy, cfg, seed)) + "\n")
        fh.write(CSV_HEADER + "\n")
        fh.flush()
    records = []
    try:
        for p_phys in p_list:
            rec = run_point(code, p_phys, policy, cfg, seed, workers, code_id, decoder)
            records.append(rec)
            if fh is not None:
                fh.write(rec.csv_row() + "\n")
                fh.flush()
    finally:
        if fh is not None:
            fh.close()
    return records


def read_csv_body(path) -> list[str]:
    """Non-comment lines of a results file, header included."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [ln for ln in lines if not ln.startswith("#")]

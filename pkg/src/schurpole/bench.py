"""Randomized benchmark sweeps over descriptor-system dimensions.

One configuration fixes (n, rank(E), m); the sweep walks every admissible
finite-pole count r and, per r, draws ``trials`` random instances whose
target spectrum is itself the spectrum of a random pencil (so arbitrary
finite pole configurations occur, complex pairs included).  Per-instance
seeding is fully deterministic in (seed, n, rank(E), m, r, trial,
attempt), so any row of a sweep can be regenerated in isolation.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .assign import run_pipeline
from .errors import DegenerateStepError, SingularPencilError
from .linalg import numerical_rank, qr_decompose
from .metrics import generalized_eig_oracle, verify_solution
from .poles import PolePair, expand_to_values
from .problem import Problem, validate_problem

__all__ = [
    "BenchConfig",
    "TrialResult",
    "generate_random_instance",
    "run_trial",
    "run_sweep",
    "write_csv",
    "CSV_COLUMNS",
]

#: attempts per (r, trial) slot before giving up on a non-degenerate draw
_MAX_ATTEMPTS = 10

CSV_COLUMNS = (
    "n",
    "rankE",
    "m",
    "r",
    "trials",
    "mean_precs",
    "mean_deltaF2",
    "mean_normF",
    "mean_normG",
    "mean_kappaXGF",
    "mean_kappaX",
    "failures",
)


@dataclass(frozen=True)
class BenchConfig:
    """Dimensions and controls of one benchmark sweep."""

    n: int
    rank_e: int
    m: int
    trials: int = 50
    seed: int = 0
    order: str = "inf-first"

    def __post_init__(self):
        if not 1 <= self.rank_e < self.n:
            raise ValueError(f"need 1 <= rank(E) < n, got rank(E)={self.rank_e}, n={self.n}")
        if not 1 <= self.m <= self.n:
            raise ValueError(f"need 1 <= m <= n, got m={self.m}, n={self.n}")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if self.order not in ("inf-first", "fin-first"):
            raise ValueError(f"unknown order {self.order!r}")

    @property
    def q(self) -> int:
        """Generic rank of [E B] for these dimensions."""
        return min(self.n, self.rank_e + self.m)

    @property
    def r_values(self) -> tuple[int, ...]:
        """Admissible finite-pole counts, smallest first."""
        return tuple(range(max(self.q - self.m, 0), self.q + 1))


@dataclass(eq=False)
class TrialResult:
    r: int
    trial: int
    ok: bool
    precs: float = math.nan
    delta_f2: float = math.nan
    norm_f: float = math.nan
    norm_g: float = math.nan
    kappa_x_gf: float = math.nan
    kappa_eigvec: float | None = None
    error: str | None = None


def _rng(cfg: BenchConfig, r: int, trial: int, attempt: int) -> np.random.Generator:
    ss = np.random.SeedSequence([cfg.seed, cfg.n, cfg.rank_e, cfg.m, r, trial, attempt])
    return np.random.Generator(np.random.PCG64(ss))


def generate_random_instance(cfg: BenchConfig, r: int, trial: int) -> Problem:
    """Draw one well-posed random instance for pole count ``r``.

    E is built with exact rank deficiency by zeroing the leading principal
    block of an orthogonal-similarity QR factor; the requested finite
    poles are the spectrum of an independent random r x r pencil.  Draws
    failing the rank or spectrum-count requirements are retried with a
    fresh attempt-indexed stream.
    """
    n, m = cfg.n, cfg.m
    admissible = tuple(cfg.r_values)
    if r not in admissible:
        raise ValueError(
            f"finite pole count r={r} outside the admissible range "
            f"[{admissible[0]}, {admissible[-1]}] for this configuration"
        )
    for attempt in range(_MAX_ATTEMPTS):
        rng = _rng(cfg, r, trial, attempt)
        a = rng.standard_normal((n, n))
        e0 = rng.standard_normal((n, n))
        b = rng.standard_normal((n, m))
        w = rng.standard_normal((r, r))
        y = rng.standard_normal((r, r))
        qe, re_ = qr_decompose(e0)
        k = n - cfg.rank_e
        re_[:k, :k] = 0.0
        e = qe @ re_ @ qe.T
        if numerical_rank(e).rank != cfg.rank_e:
            continue
        if numerical_rank(b).rank != m:
            continue
        if numerical_rank(np.hstack([e, b])).rank != cfg.q:
            continue
        if r > 0:
            try:
                target = generalized_eig_oracle(w, y)
            except SingularPencilError:
                continue
            finite = tuple(p for p in target if not p.is_infinite)
            if len(expand_to_values(finite)) != r:
                continue
        else:
            finite = ()
        poles = (PolePair.infinite(),) * (n - r) + finite
        try:
            return Problem(E=e, A=a, B=b, poles=poles, r=r)
        except ValueError:
            continue
    raise DegenerateStepError(
        f"no non-degenerate draw in {_MAX_ATTEMPTS} attempts for "
        f"(n={n}, rankE={cfg.rank_e}, m={m}, r={r}, trial={trial})"
    )


def run_trial(cfg: BenchConfig, r: int, trial: int, tol: float = 1e-8) -> TrialResult:
    """Generate, validate, assign and verify one instance."""
    try:
        problem = generate_random_instance(cfg, r, trial)
    except DegenerateStepError as exc:
        return TrialResult(r, trial, ok=False, error=str(exc))
    val = validate_problem(problem)
    if not val.passed:
        return TrialResult(
            r,
            trial,
            ok=False,
            error="; ".join(f"{c.name}: {c.detail}" for c in val.failures()),
        )
    try:
        sol = run_pipeline(problem, order=cfg.order)
    except DegenerateStepError as exc:
        return TrialResult(r, trial, ok=False, error=str(exc))
    rep = verify_solution(problem, sol, tol=tol)
    return TrialResult(
        r,
        trial,
        ok=rep.passed,
        precs=rep.precs,
        delta_f2=rep.delta_f2,
        norm_f=rep.norm_f,
        norm_g=rep.norm_g,
        kappa_x_gf=rep.kappa_x_gf,
        kappa_eigvec=rep.kappa_eigvec,
        error=None if rep.passed else "verification failed",
    )


def _mean(values) -> float:
    vals = [v for v in values if v is not None and math.isfinite(v)]
    return float(np.mean(vals)) if vals else math.nan


def run_sweep(cfg: BenchConfig, tol: float = 1e-8, progress=None) -> list[dict]:
    """All (r, trial) cells of the sweep, averaged per r over passing trials."""
    rows = []
    for r in cfg.r_values:
        results = []
        for trial in range(cfg.trials):
            res = run_trial(cfg, r, trial, tol=tol)
            results.append(res)
            if progress is not None:
                progress(res)
        good = [t for t in results if t.ok]
        rows.append(
            {
                "n": cfg.n,
                "rankE": cfg.rank_e,
                "m": cfg.m,
                "r": r,
                "trials": cfg.trials,
                "mean_precs": _mean(t.precs for t in good),
                "mean_deltaF2": _mean(t.delta_f2 for t in good),
                "mean_normF": _mean(t.norm_f for t in good),
                "mean_normG": _mean(t.norm_g for t in good),
                "mean_kappaXGF": _mean(t.kappa_x_gf for t in good),
                "mean_kappaX": _mean(t.kappa_eigvec for t in good),
                "failures": cfg.trials - len(good),
            }
        )
    return rows


def _fmt_cell(value) -> str:
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def write_csv(rows: list[dict], path) -> None:
    """Write sweep rows with a fixed column set and full float precision."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([_fmt_cell(row[c]) for c in CSV_COLUMNS])

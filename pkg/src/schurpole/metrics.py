"""Verification metrics for closed-loop matrix pencils.

Everything here judges a candidate feedback pair only through the
closed-loop matrices, independently of how the feedback was constructed:

* an eigenvalue oracle that recovers the pencil's finite spectrum from its
  characteristic polynomial (determinant sampling at Chebyshev points,
  degree detection by coefficient decay, companion roots, Newton polish)
  and counts infinite poles as the degree deficiency;
* a regularity / nilpotency-index check;
* the matched relative pole error on a log10 scale;
* the departure of a quasi-triangular pair from its block-diagonal target;
* Frobenius condition numbers and feedback norms.

The oracle deliberately avoids the QZ route so it can serve as an
independent cross-check of any Schur-based construction.  Its accuracy is
limited by the conditioning of the characteristic polynomial: root
clusters of high multiplicity and spectra spanning many orders of
magnitude lose digits, which is the standard trade-off for
polynomial-based methods.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as _cheb
from scipy.optimize import linear_sum_assignment

from .assign import BlockDescriptor, BlockKind, d_delta_block
from .errors import SingularPencilError
from .linalg import numerical_rank, orthonormal_null_basis
from .poles import PolePair, count_infinite, expand_to_values

__all__ = [
    "generalized_eig_oracle",
    "IndexReport",
    "index_and_regularity_check",
    "precs_metric",
    "departure_measure",
    "assemble_prescribed_blocks",
    "extract_poles_from_schur",
    "frobenius_condition",
    "eigenvector_condition",
    "Report",
    "verify_solution",
    "verify_feedback",
]

#: relative imaginary-part threshold below which a polished root is real
_REAL_CUT = 1e-10

#: log10 error floor (machine precision exhausted)
_PRECS_FLOOR = -17.0


def _charpoly_samples(a_c, e_c, rho: float):
    """Values of det(A_c - x*E_c) at n+1 Chebyshev points of [-rho, rho],
    rescaled by the geometric mean of the nonzero magnitudes.
    """
    n = a_c.shape[0]
    ts = _cheb.chebpts1(n + 1)
    signs = np.empty(n + 1)
    logs = np.empty(n + 1)
    for i, t in enumerate(ts):
        sign, logabs = np.linalg.slogdet(a_c - (rho * t) * e_c)
        signs[i] = sign
        logs[i] = logabs
    if not np.any(signs != 0.0):
        raise SingularPencilError(
            "determinant vanishes at every sample point; the pencil is singular "
            "(or indistinguishable from singular at working precision)"
        )
    shift = float(np.mean(logs[signs != 0.0]))
    vals = signs * np.exp(logs - shift)
    return ts, vals


def _coefficient_degree(a_c, e_c, tol: float) -> int:
    """Degree estimate from Chebyshev coefficient decay on [-1, 1]
    (fallback only; unreliable when the spectrum is far from the interval).
    """
    n = a_c.shape[0]
    ts, vals = _charpoly_samples(a_c, e_c, 1.0)
    coeffs = _cheb.chebfit(ts, vals, n)
    amax = float(np.max(np.abs(coeffs)))
    deg = n
    while deg > 0 and abs(coeffs[deg]) <= tol * amax:
        deg -= 1
    return deg


def _growth_degree(logabs_fn, dmax: int, r0: float) -> int | None:
    """Degree of a polynomial from the growth exponent of log|p| at large x.

    For a degree-d polynomial, log|p| gains exactly d*log(2) per doubling
    of x once x dwarfs every root; two consecutive doublings must agree on
    the slope or the base point is enlarged.  Returns None when no stable
    reading is found.
    """
    r = r0
    for _ in range(4):
        l1, l2, l4 = logabs_fn(r), logabs_fn(2.0 * r), logabs_fn(4.0 * r)
        if all(map(math.isfinite, (l1, l2, l4))):
            d12 = (l2 - l1) / math.log(2.0)
            d24 = (l4 - l2) / math.log(2.0)
            if abs(d12 - d24) < 0.1 and abs(d24 - round(d24)) < 0.4:
                d = int(round(d24))
                if 0 <= d <= dmax:
                    return d
        r *= 100.0
        if not math.isfinite(r):
            break
    return None


def _asymptotic_degree(a_c, e_c, r0: float) -> int | None:
    """Degree of det(A_c - x*E_c) read off its growth at large x
    (None when no stable reading is found; caller falls back to
    coefficient decay).
    """

    def logdet(x: float) -> float:
        sign, logabs = np.linalg.slogdet(a_c - x * e_c)
        return logabs if sign != 0 else -math.inf

    return _growth_degree(logdet, a_c.shape[0], r0)


def _charpoly_roots(a_c, e_c, rho: float, deg: int) -> np.ndarray:
    """Roots of the characteristic polynomial of known degree ``deg``,
    interpolated on [-rho, rho] and mapped back to the original variable.
    """
    ts, vals = _charpoly_samples(a_c, e_c, rho)
    coeffs = _cheb.chebfit(ts, vals, a_c.shape[0])
    roots = _cheb.chebroots(coeffs[: deg + 1]) * rho
    return np.asarray(roots, dtype=complex)


def _reversal_roots(a_c, e_c, rho: float, deg: int, deg_rev: int) -> np.ndarray:
    """Roots of the reversal p*(mu) = mu^deg * p(1/mu) of the degree-``deg``
    characteristic polynomial, interpolated on [-rho, rho].

    The reversal's roots are exactly the reciprocals of the nonzero finite
    poles -- infinite poles contribute nothing, unlike the swapped pencil
    det(E_c - mu*A_c) whose structural mu = 0 cluster of multiplicity
    n - deg smears into a noise ring wide enough to defeat any radius
    filter.  p* is sampled in log space: log|p*| = log|det(mu*A_c - E_c)|
    + (deg - n) log|mu| (the sample grid has an even point count so that
    mu = 0 is never hit).  ``deg_rev`` = deg minus the multiplicity of the
    zero pole is the reversal's own degree.
    """
    n = a_c.shape[0]
    power = deg - n
    npts = n + 1 + ((n + 1) % 2)
    ts = _cheb.chebpts1(npts)
    signs = np.empty(npts)
    logs = np.empty(npts)
    for i, t in enumerate(ts):
        mu = rho * t
        sign, logabs = np.linalg.slogdet(mu * a_c - e_c)
        if sign != 0:
            logabs += power * math.log(abs(mu))
            if power % 2 == 1 and mu < 0:
                sign = -sign
        signs[i] = sign
        logs[i] = logabs
    if not np.any(signs != 0.0):
        raise SingularPencilError(
            "determinant vanishes at every sample point; the pencil is singular "
            "(or indistinguishable from singular at working precision)"
        )
    shift = float(np.mean(logs[signs != 0.0]))
    vals = signs * np.exp(logs - shift)
    coeffs = _cheb.chebfit(ts, vals, deg)
    roots = _cheb.chebroots(coeffs[: deg_rev + 1]) * rho
    return np.asarray(roots, dtype=complex)


def _tightened_roots(roots_fn) -> np.ndarray:
    """Roots interpolated on an interval shrunk onto the sub-unit part of
    the root set.

    The sampling interval must never extend far beyond the small roots:
    enclosing a wide root set blows up the sampled dynamic range and
    buries the structure of the interior roots, while an interval at the
    cloud's scale resolves them and still locates moderately exterior
    roots by extrapolation.  Roots beyond the unit circle are somebody
    else's job (the reversal polynomial).
    """
    rho = 1.0
    roots = roots_fn(rho)
    for _ in range(3):
        if roots.size == 0:
            break
        mags = np.abs(roots)
        inside = mags[mags <= 1.01 * rho]
        if inside.size == 0:
            break
        top = float(np.max(inside))
        if top >= 0.5 * rho or top <= 1e-12:
            break
        rho = max(1.1 * top, 1e-12)
        roots = roots_fn(rho)
    return roots


def _ehrlich_aberth(a_c, e_c, starts: np.ndarray, iters: int = 100) -> np.ndarray:
    """Simultaneous refinement of all finite roots of det(A_c - z*E_c).

    Ehrlich-Aberth iteration: each point takes a Newton step corrected by
    repulsion from the other points, which resolves clusters and prevents
    two starting points from converging onto the same simple root.  The
    Newton ratio p'(z)/p(z) = tr((A_c - z*E_c)^{-1} E_c) comes from a
    linear solve, so no polynomial coefficients are needed -- this is what
    makes the refinement immune to the conditioning of the interpolation
    that produced the starting points.
    """
    z = np.asarray(starts, dtype=complex).copy()
    k = z.size
    if k == 0:
        return z
    e_cc = e_c.astype(complex)
    # exact duplicates would make the repulsion term blow up
    for i in range(k):
        for j in range(i):
            if abs(z[i] - z[j]) <= 1e-12 * (1.0 + abs(z[j])):
                z[i] = z[j] + 1e-8 * (1.0 + abs(z[j])) * np.exp(2j * np.pi * i / k)
    done = np.zeros(k, dtype=bool)
    for _ in range(iters):
        moved = False
        for i in range(k):
            if done[i]:
                continue
            try:
                sol = np.linalg.solve(a_c - z[i] * e_cc, e_cc)
            except np.linalg.LinAlgError:
                done[i] = True  # sitting exactly on a root
                continue
            # p'(z)/p(z) = -tr((A_c - z*E_c)^{-1} E_c)
            t = -np.trace(sol)
            if not np.isfinite(t):
                done[i] = True
                continue
            rep = 0.0
            for j in range(k):
                if j != i:
                    dz = z[i] - z[j]
                    if dz != 0:
                        rep += 1.0 / dz
            denom = t - rep
            if denom == 0 or not np.isfinite(denom):
                continue
            step = 1.0 / denom
            if not np.isfinite(step):
                continue
            z[i] = z[i] - step
            if abs(step) <= 1e-15 * (1.0 + abs(z[i])):
                done[i] = True
            else:
                moved = True
        if not moved:
            break
    return z


def _newton_polish(a_c, e_c, z0: complex, iters: int = 6) -> complex:
    """Refine one root of det(A_c - z*E_c) by Newton steps on the
    logarithmic derivative, keeping only steps that shrink |det|.
    """
    e_c = e_c.astype(complex)

    def logabs(z):
        _, la = np.linalg.slogdet(a_c - z * e_c)
        return la

    z = complex(z0)
    best_z, best_la = z, logabs(z)
    for _ in range(iters):
        try:
            sol = np.linalg.solve(a_c - z * e_c, e_c)
        except np.linalg.LinAlgError:
            break
        tr = np.trace(sol)
        if tr == 0 or not np.isfinite(tr):
            break
        step = 1.0 / tr
        z_new = z + step
        if not np.isfinite(z_new):
            break
        la_new = logabs(z_new)
        if la_new < best_la:
            best_z, best_la = z_new, la_new
        z = z_new
        if abs(step) <= 1e-16 * (1.0 + abs(z)):
            break
    return best_z


def generalized_eig_oracle(a_c, e_c, tol: float = 1e-8) -> list[PolePair]:
    """Full spectrum of the pencil (A_c, E_c) as canonical pole pairs.

    The characteristic polynomial is interpolated from determinant
    samples; its numerical degree d gives n - d infinite poles, its roots
    the finite ones.  Roots inside the unit circle come from the direct
    pencil, roots outside from the reciprocal pencil (E_c, A_c) whose
    spectrum is inverted, so neither interpolation ever has to span the
    full spectral range; every root is polished by Newton's method on
    log|det|.  Complex roots are returned once per conjugate pair
    (positive imaginary part).

    Raises SingularPencilError when det(A_c - x*E_c) is identically zero
    at working precision.
    """
    a_c = np.asarray(a_c, dtype=np.float64)
    e_c = np.asarray(e_c, dtype=np.float64)
    if a_c.ndim != 2 or a_c.shape[0] != a_c.shape[1] or a_c.shape != e_c.shape:
        raise ValueError("oracle needs two square matrices of equal shape")
    n = a_c.shape[0]
    if n == 0:
        return []

    norm_e = float(np.linalg.norm(e_c))
    norm_a = float(np.linalg.norm(a_c))
    hint = max(1.0, norm_a / norm_e) if norm_e > 0 else 1.0
    deg = _asymptotic_degree(a_c, e_c, 1e7 * hint)
    if deg is None:
        deg = _coefficient_degree(a_c, e_c, tol)
    # the determinant's degree never exceeds rank(E_c)
    deg = min(deg, numerical_rank(e_c).rank)
    if deg == 0:
        # still raise for an identically vanishing determinant
        _charpoly_samples(a_c, e_c, 1.0)
        return [PolePair.infinite()] * n

    # Interpolated roots are reliable near or inside the sampled interval,
    # and an interval enclosing a wide spectrum is useless: the sampled
    # dynamic range buries the interior structure.  So the plane is split
    # at the unit circle.  The direct pencil, sampled on an interval shrunk
    # onto its sub-unit roots, is trusted for |z| <= 1; the reversal
    # polynomial, whose roots are mu = 1/z, covers |z| > 1 by the
    # identical construction.  The merge is count-guarded against double
    # or missed coverage of the circle itself.
    roots_dir = _tightened_roots(lambda rho: _charpoly_roots(a_c, e_c, rho, deg))
    cands: list[tuple[complex, bool]] = [
        (complex(z), False) for z in roots_dir if abs(z) <= 1.0
    ]
    if len(cands) < deg:
        power = deg - n

        def rev_logabs(x: float) -> float:
            sign, logabs = np.linalg.slogdet(x * a_c - e_c)
            return logabs + power * math.log(abs(x)) if sign != 0 else -math.inf

        hint_q = max(1.0, norm_e / norm_a) if norm_a > 0 else 1.0
        deg_rev = _growth_degree(rev_logabs, deg, 1e7 * hint_q)
        if deg_rev is None:
            # a zero pole of high multiplicity spoilt the slope reading;
            # assume no zero poles and let the count guard clean up
            deg_rev = deg
        if deg_rev > 0:
            roots_mu = _tightened_roots(
                lambda rho: _reversal_roots(a_c, e_c, rho, deg, deg_rev)
            )
            cands.extend(
                (1.0 / complex(mu), True)
                for mu in roots_mu
                if 0.0 < abs(mu) < 1.0
            )
    if len(cands) > deg:
        # a root hugging the circle may be claimed by both sides: drop the
        # reciprocal member of the closest cross-side pairs
        pairs = sorted(
            (abs(zd - zr) / (1.0 + abs(zd)), i, j)
            for i, (zd, rd) in enumerate(cands)
            if not rd
            for j, (zr, rr) in enumerate(cands)
            if rr
        )
        used: set[int] = set()
        drop: set[int] = set()
        for rel, i, j in pairs:
            if len(cands) - len(drop) <= deg or rel > 1e-6:
                break
            if i in used or j in drop:
                continue
            used.add(i)
            drop.add(j)
        cands = [c for k, c in enumerate(cands) if k not in drop]
    if len(cands) < deg:
        # circle straddlers missed by both sides: extrapolated direct roots
        # just outside the trust zone are the best remaining guesses
        spare = sorted(
            (complex(z) for z in roots_dir if abs(z) > 1.0),
            key=lambda z: (abs(z), z.real, z.imag),
        )
        cands.extend((z, False) for z in spare[: deg - len(cands)])
    starts = np.array([z for z, _ in cands], dtype=complex)
    if starts.size < deg:
        # desperate fallback: seed the remainder on a circle
        radius = 2.0 * max(1.0, float(np.max(np.abs(starts))) if starts.size else 1.0)
        missing = deg - starts.size
        extra = radius * np.exp(2j * np.pi * (np.arange(missing) + 0.25) / max(missing, 1))
        starts = np.concatenate([starts, extra])

    # the interpolation only has to deliver the right count and the right
    # neighbourhoods; the simultaneous iteration supplies the precision
    roots = _ehrlich_aberth(a_c, e_c, starts)

    # refined roots are only approximately conjugate-symmetric: pair them
    # greedily and keep positive-imaginary representatives
    reals: list[float] = []
    pos: list[complex] = []
    neg: list[complex] = []
    for z in roots:
        z = complex(z)
        if abs(z.imag) <= _REAL_CUT * (1.0 + abs(z)):
            reals.append(float(z.real))
        elif z.imag > 0:
            pos.append(z)
        else:
            neg.append(z.conjugate())
    pos.sort(key=lambda c: (c.real, c.imag))
    neg.sort(key=lambda c: (c.real, c.imag))
    reps: list[complex] = []
    for z in pos:
        hit = next(
            (k for k, w in enumerate(neg) if abs(z - w) <= 1e-6 * (1.0 + abs(z))),
            None,
        )
        if hit is None:
            # partner missing: count the root alone, as real
            reals.append(z.real)
        else:
            neg.pop(hit)
            reps.append(z)
    reals.extend(w.real for w in neg)

    poles: list[PolePair] = [PolePair.infinite()] * (n - deg)
    finite: list[PolePair] = []
    for x in sorted(reals):
        x_pol = _newton_polish(a_c, e_c, x)
        # real starting points stay real (the trace step is real), but be safe
        finite.append(PolePair.from_value(complex(x_pol).real))
    for z in sorted(reps, key=lambda c: (c.real, c.imag)):
        z_pol = _newton_polish(a_c, e_c, z)
        if abs(z_pol.imag) <= _REAL_CUT * (1.0 + abs(z_pol)):
            # the pair collapsed onto the real axis: it was 2 roots
            finite.append(PolePair.from_value(z_pol.real))
            finite.append(PolePair.from_value(z_pol.real))
        else:
            if z_pol.imag < 0:
                z_pol = z_pol.conjugate()
            finite.append(PolePair.make(z_pol, 1.0))
    finite.sort(key=lambda p: (p.value.real, p.value.imag))
    return poles + finite


@dataclass(frozen=True)
class IndexReport:
    """Outcome of the regularity / index test on a closed-loop pencil."""

    regular: bool
    index_le_1: bool
    finite_count: int | None
    rank_e: int
    matches_expected: bool


def _loose_rank_tol(mat: np.ndarray, rank_rtol: float) -> float | None:
    """Absolute rank cutoff ``rank_rtol * sigma_max`` (None for a zero matrix)."""
    if mat.size == 0:
        return None
    top = float(np.linalg.norm(mat, 2))
    return rank_rtol * top if top > 0 else None


def index_and_regularity_check(
    a_c, e_c, expected_finite: int | None = None, rank_rtol: float = 1e-11
) -> IndexReport:
    """Check that (A_c, E_c) is regular with nilpotency index at most one.

    Index <= 1 holds exactly when the number of finite poles equals
    rank(E_c) and [E_c, A_c * N] has full rank for N a basis of the null
    space of E_c (no generalized eigenvector chains at infinity).  Ranks
    are taken at the relative cutoff ``rank_rtol``, which must separate
    construction roundoff (E_c produced by a feedback computation carries
    noise-level singular values near 1e-14 of its norm) from genuinely
    small directions of an ill-conditioned but invertible leading part
    (observed down to a few 1e-9 on hard full-rank assignments).
    """
    a_c = np.asarray(a_c, dtype=np.float64)
    e_c = np.asarray(e_c, dtype=np.float64)
    n = a_c.shape[0]
    tol_e = _loose_rank_tol(e_c, rank_rtol)
    rank_e = numerical_rank(e_c, tol_e).rank
    try:
        poles = generalized_eig_oracle(a_c, e_c)
    except SingularPencilError:
        return IndexReport(False, False, None, rank_e, False)
    finite_count = len(expand_to_values(poles))
    nullb = orthonormal_null_basis(e_c, tol_e)
    if nullb.shape[1]:
        stacked = np.hstack([e_c, a_c @ nullb])
        tol_s = _loose_rank_tol(stacked, rank_rtol)
        no_chains = numerical_rank(stacked, tol_s).rank == n
    else:
        no_chains = True
    index_ok = (finite_count == rank_e) and no_chains
    matches = True if expected_finite is None else finite_count == expected_finite
    return IndexReport(True, index_ok, finite_count, rank_e, matches)


def precs_metric(requested, computed) -> float:
    """Worst matched relative pole error on a log10 scale.

    Finite pole values are matched one-to-one (Hungarian assignment on
    relative errors; absolute error for requested poles at zero).  Returns
    +inf when the counts differ, and is floored at -17 (machine-precision
    agreement, including the empty case).
    """
    req = [complex(v) for v in requested]
    comp = [complex(v) for v in computed]
    if len(req) != len(comp):
        return math.inf
    if not req:
        return _PRECS_FLOOR
    cost = np.empty((len(req), len(comp)))
    for i, rv in enumerate(req):
        den = abs(rv)
        for k, cv in enumerate(comp):
            err = abs(rv - cv)
            cost[i, k] = err / den if den > 0 else err
    cost = np.nan_to_num(cost, nan=np.inf, posinf=np.inf)
    rows, cols = linear_sum_assignment(cost)
    worst = float(cost[rows, cols].max())
    if worst <= 10.0**_PRECS_FLOOR:
        return _PRECS_FLOOR
    if math.isinf(worst):
        return math.inf
    return max(math.log10(worst), _PRECS_FLOOR)


def assemble_prescribed_blocks(blocks: tuple[BlockDescriptor, ...], size: int):
    """Block-diagonal target pair (Phi, Psi) encoded by the descriptors."""
    phi = np.zeros((size, size))
    psi = np.zeros((size, size))
    cursor = 0
    for blk in sorted(blocks, key=lambda b: b.start):
        if blk.start != cursor:
            raise ValueError(f"blocks do not tile contiguously at index {cursor}")
        k = blk.start
        if blk.size == 1:
            phi[k, k] = blk.eps1
            psi[k, k] = blk.eps2
        elif blk.size == 2:
            dd = d_delta_block(blk.sigma, blk.tau, blk.delta)
            if blk.kind is BlockKind.COMPLEX_ALPHA:
                phi[k : k + 2, k : k + 2] = np.eye(2)
                psi[k : k + 2, k : k + 2] = dd
            else:
                phi[k : k + 2, k : k + 2] = dd
                psi[k : k + 2, k : k + 2] = np.eye(2)
        else:
            raise ValueError(f"unsupported block size {blk.size}")
        cursor += blk.size
    if cursor != size:
        raise ValueError(f"blocks tile {cursor} rows, factors have {size}")
    return phi, psi


def departure_measure(s, t, blocks: tuple[BlockDescriptor, ...]) -> float:
    """Squared departure of (S, T) from a perfectly normal block pair.

    Sums the squared Frobenius mass outside the prescribed diagonal blocks
    and, for every 2x2 block, the non-normality penalty
    tau^2 * (delta - 1/delta)^2 of its scaled rotation.
    """
    s = np.asarray(s, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    phi, psi = assemble_prescribed_blocks(blocks, s.shape[0])
    total = float(np.linalg.norm(s - phi) ** 2 + np.linalg.norm(t - psi) ** 2)
    for blk in blocks:
        if blk.size == 2:
            total += blk.tau**2 * (blk.delta - 1.0 / blk.delta) ** 2
    return total


def extract_poles_from_schur(s, t, blocks: tuple[BlockDescriptor, ...]) -> list[PolePair]:
    """Pole pairs encoded on the diagonal of a quasi-triangular pair."""
    s = np.asarray(s, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    out: list[PolePair] = []
    for blk in sorted(blocks, key=lambda b: b.start):
        k = blk.start
        if blk.size == 1:
            out.append(PolePair.make(s[k, k], t[k, k]))
        else:
            gam = complex(blk.sigma, blk.tau)
            lam = 1.0 / gam if blk.kind is BlockKind.COMPLEX_ALPHA else gam
            out.append(PolePair.make(lam, 1.0))
    return out


def frobenius_condition(x) -> float:
    """kappa_F(X) = ||X||_F * ||X^{-1}||_F (inf when singular)."""
    x = np.asarray(x, dtype=np.float64)
    svals = np.linalg.svd(x, compute_uv=False)
    if svals.size == 0 or svals[-1] <= 0.0:
        return math.inf
    return float(np.sqrt(np.sum(svals**2)) * np.sqrt(np.sum(svals**-2.0)))


def eigenvector_condition(a_c, e_c, poles, rank_rtol: float = 1e-8) -> float | None:
    """kappa_F of an eigenvector matrix of the pencil, or None.

    Available only for simple spectra: pairwise distinct finite poles, one
    eigenvector each (from the null space of A_c - lambda*E_c), and a full
    set of infinite eigenvectors from the null space of E_c.  Conjugate
    partners contribute their conjugated eigenvectors.  Null spaces are
    taken at the relative cutoff ``rank_rtol`` because the pole estimates
    carry oracle error, so the shifted pencils are only near-singular.
    """
    a_c = np.asarray(a_c, dtype=np.float64)
    e_c = np.asarray(e_c, dtype=np.float64)
    n = a_c.shape[0]
    vals = expand_to_values(poles)
    n_inf = count_infinite(poles)
    if len(vals) + n_inf != n:
        return None
    for i in range(len(vals)):
        for k in range(i + 1, len(vals)):
            if abs(vals[i] - vals[k]) <= 1e-8 * max(1.0, abs(vals[i]), abs(vals[k])):
                return None
    cols = []
    for pole in poles:
        if pole.is_infinite:
            continue
        lam = pole.value
        shifted = a_c - lam * e_c.astype(complex)
        nb = orthonormal_null_basis(shifted, _loose_rank_tol(shifted, rank_rtol))
        if nb.shape[1] != 1:
            return None
        cols.append(nb[:, 0])
        if abs(lam.imag) > 0:
            cols.append(nb[:, 0].conj())
    inf_basis = orthonormal_null_basis(e_c, _loose_rank_tol(e_c, rank_rtol))
    if inf_basis.shape[1] != n_inf:
        return None
    for k in range(n_inf):
        cols.append(inf_basis[:, k].astype(complex))
    xmat = np.column_stack(cols) if cols else np.zeros((n, 0), dtype=complex)
    if xmat.shape != (n, n):
        return None
    svals = np.linalg.svd(xmat, compute_uv=False)
    if svals[-1] <= 1e-14 * svals[0]:
        return None
    return float(np.sqrt(np.sum(svals**2)) * np.sqrt(np.sum(svals**-2.0)))


@dataclass(eq=False)
class Report:
    """Verification summary for one candidate feedback pair."""

    precs: float
    delta_f2: float | None
    norm_f: float
    norm_g: float
    kappa_x_gf: float | None
    kappa_eigvec: float | None
    residual_a: float | None
    residual_e: float | None
    orth_p: float | None
    infinite_count: int | None
    index_ok: bool
    regular: bool
    pole_mismatch: bool
    passed: bool

    def to_mapping(self) -> dict:
        """External key names used by the text and JSON reports."""
        return {
            "precs": self.precs,
            "deltaF2": self.delta_f2,
            "normF": self.norm_f,
            "normG": self.norm_g,
            "kappaXGF": self.kappa_x_gf,
            "kappaX": self.kappa_eigvec,
            "residualA": self.residual_a,
            "residualE": self.residual_e,
            "infinite_count": self.infinite_count,
            "index_ok": self.index_ok,
        }


def _closed_loop_report(
    problem,
    a_c,
    e_c,
    f,
    g,
    tol: float,
    *,
    kappa_x_gf: float | None,
    delta_f2: float | None,
    residual_a: float | None,
    residual_e: float | None,
    orth_p: float | None,
) -> Report:
    n, r = problem.n, problem.r
    requested = expand_to_values(problem.poles)
    try:
        comp_poles = generalized_eig_oracle(a_c, e_c)
        regular = True
    except SingularPencilError:
        comp_poles = []
        regular = False
    if regular:
        computed = expand_to_values(comp_poles)
        inf_count = count_infinite(comp_poles)
        precs = precs_metric(requested, computed)
        mismatch = math.isinf(precs) or inf_count != (n - r)
        kappa_eig = eigenvector_condition(a_c, e_c, comp_poles)
        idx = index_and_regularity_check(a_c, e_c, expected_finite=r)
        index_ok = idx.index_le_1
    else:
        precs = math.inf
        inf_count = None
        mismatch = True
        kappa_eig = None
        index_ok = False
    precs_ok = (precs <= -6.0) or (r == 0 and not mismatch)
    residual_ok = True
    for res in (residual_a, residual_e):
        if res is not None and not res <= tol:
            residual_ok = False
    if orth_p is not None and not orth_p <= tol:
        residual_ok = False
    passed = bool(regular and index_ok and not mismatch and precs_ok and residual_ok)
    return Report(
        precs=precs,
        delta_f2=delta_f2,
        norm_f=float(np.linalg.norm(f)),
        norm_g=float(np.linalg.norm(g)),
        kappa_x_gf=kappa_x_gf,
        kappa_eigvec=kappa_eig,
        residual_a=residual_a,
        residual_e=residual_e,
        orth_p=orth_p,
        infinite_count=inf_count,
        index_ok=index_ok,
        regular=regular,
        pole_mismatch=mismatch,
        passed=passed,
    )


def verify_solution(problem, sol, tol: float = 1e-8) -> Report:
    """Verify a full pipeline solution, factor residuals included."""
    a_c = problem.A + problem.B @ sol.F
    e_c = problem.E + problem.B @ sol.G
    scale = float(
        np.linalg.norm(problem.A) + np.linalg.norm(problem.E) + np.linalg.norm(sol.X)
    )
    scale = max(scale, 1.0)
    residual_a = float(np.linalg.norm(a_c @ sol.P - sol.X @ sol.S)) / scale
    residual_e = float(np.linalg.norm(e_c @ sol.P - sol.X @ sol.T)) / scale
    orth_p = float(np.linalg.norm(sol.P.T @ sol.P - np.eye(problem.n)))
    return _closed_loop_report(
        problem,
        a_c,
        e_c,
        sol.F,
        sol.G,
        tol,
        kappa_x_gf=frobenius_condition(sol.X),
        delta_f2=departure_measure(sol.S, sol.T, sol.blocks),
        residual_a=residual_a,
        residual_e=residual_e,
        orth_p=orth_p,
    )


def verify_feedback(problem, f, g, tol: float = 1e-8) -> Report:
    """Verify bare feedback matrices (no factors available)."""
    f = np.asarray(f, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    if f.shape != (problem.m, problem.n) or g.shape != (problem.m, problem.n):
        raise ValueError(
            f"feedback must be m x n = {(problem.m, problem.n)}, "
            f"got F {f.shape} and G {g.shape}"
        )
    a_c = problem.A + problem.B @ f
    e_c = problem.E + problem.B @ g
    return _closed_loop_report(
        problem,
        a_c,
        e_c,
        f,
        g,
        tol,
        kappa_x_gf=None,
        delta_f2=None,
        residual_a=None,
        residual_e=None,
        orth_p=None,
    )

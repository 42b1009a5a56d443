"""Construction of proportional-plus-derivative feedback via Schur pairs.

With B = Q [R; 0] (Q = [Q1 Q2] orthogonal, R invertible), any closed-loop
pair (A + B*F, E + B*G) that is jointly triangularized as

    (A + B*F) P = X S,      (E + B*G) P = X T

by an orthonormal P, invertible X and quasi-triangular (S, T) is reachable
exactly when  Q2^T (A P - X S) = 0  and  Q2^T (E P - X T) = 0, in which case

    F = R^{-1} Q1^T (X S P^T - A),    G = R^{-1} Q1^T (X T P^T - E).

Columns of P and of Xi = Q2^T X are grown one pole (or one conjugate pair)
at a time.  Each step solves a structured null-space problem; the free
coefficients are chosen to keep the off-diagonal mass of (S, T) small, so
the closed-loop pencil stays close to a normal pair and the assigned
spectrum is insensitive to perturbations.  Once all n columns exist, X is
completed from Xi by an orthogonal complement and (F, G) are read off.

Diagonal blocks of (S, T) encode the poles:

* infinite pole:            1x1 pair (1, 0);
* real pair (a, b):         1x1 pair (a, b)/sqrt(a^2 + b^2);
* complex conjugate pair:   2x2 pair (I2, D) or (D, I2) with
  D = [[sigma, delta*tau], [-tau/delta, sigma]], depending on which of
  alpha, beta dominates.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DegenerateStepError
from .linalg import (
    jacobi_orthogonalize,
    numerical_rank,
    orthonormal_null_basis,
    qr_decompose,
    sym_eig,
)
from .poles import (
    NormalizedPole,
    PoleCase,
    PoleKind,
    PolePair,
    normalize_pole,
)

__all__ = [
    "Parametrization",
    "BlockKind",
    "BlockDescriptor",
    "StepRecord",
    "AssignState",
    "Solution",
    "compute_parametrization",
    "assign_infinite_block",
    "assign_real_pole",
    "assign_complex_pair",
    "complete_X",
    "extract_feedback",
    "run_pipeline",
    "d_delta_block",
]


class BlockKind(enum.Enum):
    INFINITE = "infinite"
    REAL = "real"
    COMPLEX_ALPHA = "complex-alpha"
    COMPLEX_BETA = "complex-beta"


@dataclass(frozen=True)
class BlockDescriptor:
    """One diagonal block of the quasi-triangular pair (S, T)."""

    start: int
    size: int
    kind: BlockKind
    eps1: float | None = None
    eps2: float | None = None
    delta: float | None = None
    sigma: float | None = None
    tau: float | None = None


@dataclass(eq=False)
class StepRecord:
    """Diagnostics captured by one assignment step (used by tests)."""

    kind: str
    j_before: int
    null_dim: int
    data: dict


@dataclass(eq=False)
class Parametrization:
    """QR data of the input matrix: B = Q [R; 0], Q = [Q1 Q2]."""

    q1: np.ndarray
    q2: np.ndarray
    r: np.ndarray

    @property
    def n(self) -> int:
        return self.q1.shape[0]

    @property
    def m(self) -> int:
        return self.q1.shape[1]


@dataclass(eq=False)
class AssignState:
    """Partially grown factors after j assigned columns."""

    n: int
    m: int
    P: np.ndarray
    Xi: np.ndarray
    S: np.ndarray
    T: np.ndarray
    blocks: tuple[BlockDescriptor, ...]
    steps: tuple[StepRecord, ...]

    @property
    def j(self) -> int:
        return self.P.shape[1]

    def relation_residuals(self, a, e, par: Parametrization) -> dict:
        """Frobenius residuals of the growth invariants (for testing)."""
        q2t = par.q2.T
        return {
            "resA": float(np.linalg.norm(q2t @ (a @ self.P) - self.Xi @ self.S)),
            "resE": float(np.linalg.norm(q2t @ (e @ self.P) - self.Xi @ self.T)),
            "orth": float(np.linalg.norm(self.P.T @ self.P - np.eye(self.j))),
        }


@dataclass(eq=False)
class Solution:
    """Feedback matrices together with the factors that produced them."""

    F: np.ndarray
    G: np.ndarray
    P: np.ndarray
    S: np.ndarray
    T: np.ndarray
    X: np.ndarray
    blocks: tuple[BlockDescriptor, ...]
    steps: tuple[StepRecord, ...]


def d_delta_block(sigma: float, tau: float, delta: float) -> np.ndarray:
    """2x2 block [[sigma, delta*tau], [-tau/delta, sigma]]."""
    return np.array([[sigma, delta * tau], [-tau / delta, sigma]])


def compute_parametrization(b) -> Parametrization:
    b = np.asarray(b, dtype=np.float64)
    if b.ndim != 2 or b.shape[1] < 1 or b.shape[0] < b.shape[1]:
        raise ValueError(f"B must be n x m with 1 <= m <= n, got {b.shape}")
    if numerical_rank(b).rank != b.shape[1]:
        raise ValueError("B must have full column rank")
    q, r = qr_decompose(b)
    m = b.shape[1]
    return Parametrization(q1=q[:, :m], q2=q[:, m:], r=r)


def _empty_state(n: int, m: int) -> AssignState:
    return AssignState(
        n,
        m,
        np.zeros((n, 0)),
        np.zeros((n - m, 0)),
        np.zeros((0, 0)),
        np.zeros((0, 0)),
        (),
        (),
    )


def _grown(mat: np.ndarray, vcols: np.ndarray, block: np.ndarray) -> np.ndarray:
    j = mat.shape[0]
    k = block.shape[0]
    top = np.hstack([mat, vcols.reshape(j, k)])
    bot = np.hstack([np.zeros((k, j)), block])
    return np.vstack([top, bot])


def _orthonormal_against(p_prev: np.ndarray, vec: np.ndarray) -> np.ndarray:
    """Clean residual non-orthogonality of a new (near-orthonormal) column.

    Null vectors enforce orthogonality to the accepted columns only up to
    the step's conditioning, and the leftover contaminates the feedback
    extraction in proportion to the coupling norms; two Gram-Schmidt
    passes push it down to rounding level.
    """
    v = vec
    for _ in range(2):
        if p_prev.shape[1]:
            v = v - p_prev @ (p_prev.T @ v)
    nrm = float(np.linalg.norm(v))
    if nrm <= 1e-6:
        raise DegenerateStepError("new column collapsed onto the existing ones")
    return v / nrm


def assign_infinite_block(a, e, par: Parametrization, count: int, tol: float | None = None) -> AssignState:
    """Open the factors with ``count`` infinite poles.

    P's first columns come from the null space of Q2^T E, giving the exact
    leading structure S = I, T = 0 with no off-diagonal contribution at
    all, which is the optimum for these steps.
    """
    n, m = par.n, par.m
    if not 0 <= count <= n:
        raise ValueError(f"infinite pole count {count} outside [0, {n}]")
    a = np.asarray(a, dtype=np.float64)
    e = np.asarray(e, dtype=np.float64)
    z = orthonormal_null_basis(par.q2.T @ e, tol)
    if z.shape[1] < count:
        raise DegenerateStepError(
            f"null space of Q2^T E has dimension {z.shape[1]} < {count}; "
            "too many infinite poles requested for this system"
        )
    p = z[:, :count].copy()
    xi = par.q2.T @ (a @ p)
    blocks = tuple(
        BlockDescriptor(start=k, size=1, kind=BlockKind.INFINITE, eps1=1.0, eps2=0.0)
        for k in range(count)
    )
    steps = (StepRecord("infinite-block", 0, z.shape[1], {"z": z, "count": count}),)
    return AssignState(n, m, p, xi, np.eye(count), np.zeros((count, count)), blocks, steps)


def _step_null_basis(row_top, p_mat, n, m, j, tol, what):
    # The null space has dimension m + j generically; it is larger when the
    # top block is rank deficient (e.g. deferred infinite poles), which only
    # adds freedom.  A smaller dimension means the instance violates the
    # full-row-rank condition required for assignment.
    mt = np.vstack([row_top, np.hstack([p_mat.T, np.zeros((j, 2 * j))])])
    z = orthonormal_null_basis(mt, tol)
    if z.shape[1] < m + j:
        raise DegenerateStepError(
            f"{what}: constraint matrix null space has dimension "
            f"{z.shape[1]} < {m + j}; the instance is not assignable here"
        )
    return z[:n], z[n : n + j], z[n + j :]


def assign_real_pole(state: AssignState, pole: PolePair, a, e, par: Parametrization, tol: float | None = None) -> AssignState:
    """Append one column carrying a real pole (or an infinite one given as
    the limiting pair (1, 0), used by the finite-poles-first ordering).

    Among all unit feasible directions, the new column maximizes the share
    of the null vector living in the P-component, which minimizes the norm
    of the off-diagonal entries added to S and T.
    """
    npole = normalize_pole(pole)
    if npole.case is not PoleCase.REAL:
        raise ValueError("assign_real_pole needs a real or infinite pole")
    eps1 = float(npole.eps1.real)
    eps2 = float(npole.eps2.real)
    n, m, j = state.n, state.m, state.j
    a = np.asarray(a, dtype=np.float64)
    e = np.asarray(e, dtype=np.float64)
    q2t = par.q2.T
    xi = state.Xi
    if abs(eps1) >= abs(eps2):
        ratio = eps2 / eps1
        row_top = np.hstack([q2t @ (e - ratio * a), ratio * xi, -xi])
    else:
        ratio = eps1 / eps2
        row_top = np.hstack([q2t @ (a - ratio * e), -xi, ratio * xi])
    z1, z3, z4 = _step_null_basis(row_top, state.P, n, m, j, tol, "real-pole step")

    w_eig, v_eig = sym_eig(z1.T @ z1)
    lam = float(w_eig[0])
    if lam <= 1e-12:
        raise DegenerateStepError("real-pole step: no feasible direction reaches P (Z1 degenerate)")
    uvec = v_eig[:, 0]
    pt = z1 @ uvec
    scale = float(np.linalg.norm(pt))
    p_new = _orthonormal_against(state.P, pt / scale)
    v_s = (z3 @ uvec) / scale
    v_t = (z4 @ uvec) / scale
    if abs(eps1) >= abs(eps2):
        xi_new = (q2t @ (a @ p_new) - xi @ v_s) / eps1
    else:
        xi_new = (q2t @ (e @ p_new) - xi @ v_t) / eps2

    if pole.is_infinite:
        # A deferred infinite pole may not couple through T to an earlier
        # infinite column: such an entry makes the trailing T block
        # nilpotent of index 2, so the closed-loop index exceeds one.  The
        # coupling vanishes automatically when at most one input is
        # available, but is generically nonzero for m >= 2 with two or
        # more deferred infinite poles; it is an infeasibility of this
        # processing order, not of the instance.
        chain = [abs(v_t[blk.start]) for blk in state.blocks if blk.kind is BlockKind.INFINITE]
        if chain and max(chain) > 1e-8 * max(1.0, float(np.linalg.norm(v_t))):
            raise DegenerateStepError(
                "deferred infinite pole couples to an earlier infinite column "
                f"(|T| entry {max(chain):.3g}), which would raise the closed-loop "
                "index above one; re-run with the infinite-poles-first order"
            )

    kind = BlockKind.INFINITE if pole.is_infinite else BlockKind.REAL
    block = BlockDescriptor(start=j, size=1, kind=kind, eps1=eps1, eps2=eps2)
    rec = StepRecord(
        "real",
        j,
        m + j,
        {
            "z1": z1,
            "z3": z3,
            "z4": z4,
            "u": uvec,
            "top_eigenvalue": lam,
            "eps1": eps1,
            "eps2": eps2,
        },
    )
    return AssignState(
        n,
        m,
        np.hstack([state.P, p_new[:, None]]),
        np.hstack([xi, xi_new[:, None]]),
        _grown(state.S, v_s[:, None], np.array([[eps1]])),
        _grown(state.T, v_t[:, None], np.array([[eps2]])),
        state.blocks + (block,),
        state.steps + (rec,),
    )


def _equalizing_coefficients(hm: np.ndarray, c1: float, c2: float) -> np.ndarray:
    """Unit coefficient vector (gamma1, gamma2, zeta1, zeta2) with both
    structural quadratic forms zero, minimizing 2*sum_l c_l*(gamma_l^2+zeta_l^2).

    ``hm``'s quadratic form is the norm imbalance of the two produced real
    columns and the form of J*hm their inner product (J the symplectic
    unit).  J maps each +phi eigenvector of ``hm`` to a -phi one, so with
    eigenpairs (phi1, v1), (phi2, v2) every feasible point lies on one of
    the two circles spanned by the orthonormal pairs
    {R1 v1 +/- R2 Jv2, R1 Jv1 -/+ R2 v2}, R1^2 = phi2/(phi1+phi2),
    R2^2 = phi1/(phi1+phi2).  The objective restricted to a circle is a
    2x2 quadratic form, minimized exactly by its bottom eigenvector.
    """
    obj = np.diag([2.0 * c1, 2.0 * c2, 2.0 * c1, 2.0 * c2])
    w, vecs = np.linalg.eigh(0.5 * (hm + hm.T))
    phi1 = max(float(w[3]), 0.0)
    phi2 = max(float(w[2]), 0.0)
    if phi1 <= 1e-12 * max(1.0, float(np.linalg.norm(hm))):
        # both forms vanish identically: any unit vector is feasible
        u = np.zeros(4)
        u[0 if c1 <= c2 else 1] = 1.0
        return u
    jmat = np.block(
        [[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]]
    )
    if phi2 <= 1e-12 * phi1:
        # a paired zero eigenvalue: its eigenspace is entirely feasible
        basis = vecs[:, 1:3]
        g = basis.T @ obj @ basis
        _, gv = np.linalg.eigh(0.5 * (g + g.T))
        u = basis @ gv[:, 0]
        return u / np.linalg.norm(u)
    v1 = vecs[:, 3]
    v2 = vecs[:, 2]
    jv1 = jmat @ v1
    jv2 = jmat @ v2
    r1 = np.sqrt(phi2 / (phi1 + phi2))
    r2 = np.sqrt(phi1 / (phi1 + phi2))
    best_val = None
    best_u = None
    for sgn in (1.0, -1.0):
        wa = r1 * v1 + sgn * r2 * jv2
        wb = r1 * jv1 - sgn * r2 * v2
        g11 = float(wa @ obj @ wa)
        g12 = float(wa @ obj @ wb)
        g22 = float(wb @ obj @ wb)
        gw, gv = np.linalg.eigh(np.array([[g11, g12], [g12, g22]]))
        if best_val is None or float(gw[0]) < best_val:
            best_val = float(gw[0])
            best_u = gv[0, 0] * wa + gv[1, 0] * wb
    return best_u / np.linalg.norm(best_u)


def _complex_pair_core(z1, z3, z4, tau_pen, rank1_rtol=1e-8):
    """Pick the complex combination of null-basis columns for one pair.

    Returns the unnormalized complex column p (real and imaginary parts
    become the two new P columns), the matching stacked v-column, and a
    diagnostics dict.
    """
    u, nus, vh = np.linalg.svd(z1, full_matrices=True)
    v = vh.conj().T
    if nus.size == 0 or nus[0] <= 1e-13:
        raise DegenerateStepError("complex step: direction matrix Z1 vanishes")
    nu1 = float(nus[0])
    nu2 = float(nus[1]) if nus.size > 1 else 0.0
    zv = np.vstack([z3, z4]) @ v
    diag: dict = {"nu": nus.copy()}

    if nu2 <= rank1_rtol * nu1:
        # single usable direction: orthogonalize its real/imaginary parts
        # by a plane rotation, then choose the residual coefficients from
        # an unconstrained convex quadratic.
        psi1 = u[:, 0]
        try:
            c, s = jacobi_orthogonalize(psi1.real, psi1.imag)
        except ValueError as exc:
            raise DegenerateStepError(f"complex step: {exc}") from None
        p1 = c * psi1.real - s * psi1.imag
        p2 = s * psi1.real + c * psi1.imag
        vs1 = float(np.linalg.norm(p1))
        vs2 = float(np.linalg.norm(p2))
        if min(vs1, vs2) <= 1e-13:
            raise DegenerateStepError("complex step: degenerate rotated direction")
        w = zv[:, 0]
        big_w = zv[:, 1:]
        k = z1.shape[1] - 1
        if k > 0:
            if z3.shape[0] == 0:
                raise DegenerateStepError(
                    "complex step: rank-1 direction with free coefficients "
                    "but no prior columns to absorb them"
                )
            k1 = np.hstack([big_w.real, -big_w.imag])
            k2 = np.hstack([big_w.imag, big_w.real])
            a1 = c * k1 - s * k2
            a2 = s * k1 + c * k2
            hmat = a1.T @ a1 / vs1**2 + a2.T @ a2 / vs2**2
            rw, iw = w.real, w.imag
            hvec = (2.0 / nu1) * (
                (c * c / vs1**2 + s * s / vs2**2) * (k1.T @ rw)
                + (s * s / vs1**2 + c * c / vs2**2) * (k2.T @ iw)
                + (c * s) * (1.0 / vs2**2 - 1.0 / vs1**2) * (k2.T @ rw + k1.T @ iw)
            )
            hw = np.linalg.eigvalsh(0.5 * (hmat + hmat.T))
            if hw[0] <= 0 or hw[-1] / hw[0] > 1e14:
                raise DegenerateStepError("complex step: coefficient system is numerically singular")
            y = -0.5 * np.linalg.solve(hmat, hvec)
            g = y[:k] + 1j * y[k:]
            diag.update({"H": hmat, "h": hvec, "y": y, "w": w, "W": big_w})
        else:
            g = np.zeros(0, dtype=complex)
            diag.update({"H": None, "h": None, "y": np.zeros(0), "w": w, "W": big_w})
        bvec = (c + 1j * s) * (v @ np.concatenate([[1.0 / nu1], g]))
        diag.update({"branch": "rank1", "c": c, "s": s, "V": v, "vs": (vs1, vs2)})
    else:
        psi1 = u[:, 0]
        psi2 = u[:, 1]
        w1 = zv[:, 0] / nu1
        w2 = zv[:, 1] / nu2
        c1 = (1.0 - nu1**2) / nu1**2
        c2 = (1.0 - nu2**2) / nu2**2
        rho1 = np.inf
        s1 = None
        try:
            c, s = jacobi_orthogonalize(psi1.real, psi1.imag)
        except ValueError:
            pass
        else:
            p1 = c * psi1.real - s * psi1.imag
            p2 = s * psi1.real + c * psi1.imag
            vs1 = float(np.linalg.norm(p1))
            vs2 = float(np.linalg.norm(p2))
            if min(vs1, vs2) > 1e-13:
                delta = vs1 / vs2
                rho1 = (
                    np.linalg.norm(c * w1.real - s * w1.imag) ** 2 / vs1**2
                    + np.linalg.norm(s * w1.real + c * w1.imag) ** 2 / vs2**2
                    + tau_pen**2 * (delta - 1.0 / delta) ** 2
                )
                s1 = (c, s)
        kr = np.column_stack([psi1.real, psi2.real])
        ki = np.column_stack([psi1.imag, psi2.imag])
        cmat = kr.T @ kr - ki.T @ ki
        dmat = kr.T @ ki + ki.T @ kr
        hm = np.block([[cmat, -dmat], [-dmat, -cmat]])
        coeff = _equalizing_coefficients(hm, c1, c2)
        rho2 = 2.0 * (
            c1 * (coeff[0] ** 2 + coeff[2] ** 2) + c2 * (coeff[1] ** 2 + coeff[3] ** 2)
        )
        diag.update(
            {
                "nu1": nu1,
                "nu2": nu2,
                "rho1": float(rho1),
                "rho2": float(rho2),
                "coeff": coeff,
                "hamiltonian": hm,
            }
        )
        if rho2 <= rho1:
            gz = coeff[:2] + 1j * coeff[2:]
            bvec = v[:, :2] @ (gz / nus[:2])
            diag["branch"] = "hamiltonian"
        else:
            c, s = s1
            bvec = (c + 1j * s) * v[:, 0] / nu1
            diag["branch"] = "jacobi"

    pc = z1 @ bvec
    vc = np.vstack([z3, z4]) @ bvec
    diag["b"] = bvec
    return pc, vc, diag


def assign_complex_pair(
    state: AssignState,
    pole: PolePair,
    a,
    e,
    par: Parametrization,
    tol: float | None = None,
    rank1_rtol: float = 1e-8,
) -> AssignState:
    """Append the two columns carrying a complex conjugate pole pair."""
    if pole.kind is not PoleKind.FINITE_COMPLEX:
        raise ValueError("assign_complex_pair needs a complex pole pair")
    npole = normalize_pole(pole)
    alpha_dom = npole.case is PoleCase.COMPLEX_ALPHA_DOMINANT
    sigma, tau = npole.sigma, npole.tau
    gamma = complex(sigma, tau)
    n, m, j = state.n, state.m, state.j
    a = np.asarray(a, dtype=np.float64)
    e = np.asarray(e, dtype=np.float64)
    q2t = par.q2.T
    xi = state.Xi
    if alpha_dom:
        row_top = np.hstack([q2t @ (e - gamma * a), gamma * xi, -xi.astype(complex)])
    else:
        row_top = np.hstack([q2t @ (a - gamma * e), -xi.astype(complex), gamma * xi])
    z1, z3, z4 = _step_null_basis(row_top, state.P.astype(complex), n, m, j, tol, "complex-pair step")

    pc, vc, diag = _complex_pair_core(z1, z3, z4, tau, rank1_rtol)
    pt1, pt2 = pc.real.copy(), pc.imag.copy()
    vs1 = float(np.linalg.norm(pt1))
    vs2 = float(np.linalg.norm(pt2))
    if min(vs1, vs2) <= 1e-13:
        raise DegenerateStepError("complex step: produced dependent column pair")
    delta = vs1 / vs2
    p1 = _orthonormal_against(state.P, pt1 / vs1)
    p2 = _orthonormal_against(np.hstack([state.P, p1[:, None]]), pt2 / vs2)
    v_s = np.column_stack([vc.real[:j] / vs1, vc.imag[:j] / vs2])
    v_t = np.column_stack([vc.real[j:] / vs1, vc.imag[j:] / vs2])
    if alpha_dom:
        xi1 = q2t @ (a @ p1) - xi @ v_s[:, 0]
        xi2 = q2t @ (a @ p2) - xi @ v_s[:, 1]
        block_s = np.eye(2)
        block_t = d_delta_block(sigma, tau, delta)
        kind = BlockKind.COMPLEX_ALPHA
    else:
        xi1 = q2t @ (e @ p1) - xi @ v_t[:, 0]
        xi2 = q2t @ (e @ p2) - xi @ v_t[:, 1]
        block_s = d_delta_block(sigma, tau, delta)
        block_t = np.eye(2)
        kind = BlockKind.COMPLEX_BETA

    block = BlockDescriptor(start=j, size=2, kind=kind, delta=delta, sigma=sigma, tau=tau)
    diag.update({"z1": z1, "z3": z3, "z4": z4, "delta": delta, "tau_penalty": tau})
    rec = StepRecord("complex", j, m + j, diag)
    return AssignState(
        n,
        m,
        np.hstack([state.P, p1[:, None], p2[:, None]]),
        np.hstack([xi, xi1[:, None], xi2[:, None]]),
        _grown(state.S, v_s, block_s),
        _grown(state.T, v_t, block_t),
        state.blocks + (block,),
        state.steps + (rec,),
    )


def complete_X(par: Parametrization, xi, tol: float | None = None) -> np.ndarray:
    """Extend Xi = Q2^T X to the full invertible factor X.

    The Q1-component is the orthogonal complement of range(Xi^T), which
    keeps X as well conditioned as the data permits.
    """
    xi = np.asarray(xi, dtype=np.float64)
    n, m = par.n, par.m
    if xi.shape != (n - m, n):
        raise ValueError(f"Xi must be (n-m) x n = {(n - m, n)}, got {xi.shape}")
    if n > m:
        if numerical_rank(xi, tol).rank != n - m:
            raise DegenerateStepError("Xi lost full row rank; assignment state inconsistent")
        qx, _ = qr_decompose(xi.T)
        y = qx[:, n - m :].T
    else:
        y = np.eye(n)
    return par.q1 @ y + par.q2 @ xi


def extract_feedback(a, e, par: Parametrization, x, s, t, p) -> tuple[np.ndarray, np.ndarray]:
    """Solve the triangular systems for F and G."""
    a = np.asarray(a, dtype=np.float64)
    e = np.asarray(e, dtype=np.float64)
    f = solve_triangular(par.r, par.q1.T @ (x @ s @ p.T - a))
    g = solve_triangular(par.r, par.q1.T @ (x @ t @ p.T - e))
    return f, g


def run_pipeline(problem, order: str = "inf-first", tol: float | None = None) -> Solution:
    """Assign the requested spectrum of ``problem`` and return (F, G) with
    all factors.

    ``order`` picks the processing sequence: ``inf-first`` (default) opens
    with the infinite block, then finite real poles in ascending order,
    then complex pairs in input order; ``fin-first`` defers the infinite
    poles to the end, where they run through the real-pole step as the
    limiting pair (1, 0).  The latter is best effort: its feasibility is
    checked live and a DegenerateStepError is raised on violation.
    """
    if order not in ("inf-first", "fin-first"):
        raise ValueError(f"unknown order {order!r}")
    par = compute_parametrization(problem.B)
    a, e = problem.A, problem.E
    n, r = problem.n, problem.r
    inf_count = n - r
    reals = sorted(
        (p for p in problem.finite_poles if p.kind is PoleKind.FINITE_REAL),
        key=lambda p: p.value.real,
    )
    cplx = [p for p in problem.finite_poles if p.kind is PoleKind.FINITE_COMPLEX]
    if order == "inf-first":
        state = assign_infinite_block(a, e, par, inf_count, tol)
        queue = reals + cplx
    else:
        state = _empty_state(n, par.m)
        queue = reals + cplx + [PolePair.infinite()] * inf_count
    for idx, pole in enumerate(queue):
        try:
            if pole.kind is PoleKind.FINITE_COMPLEX:
                state = assign_complex_pair(state, pole, a, e, par, tol)
            else:
                state = assign_real_pole(state, pole, a, e, par, tol)
        except DegenerateStepError as exc:
            raise DegenerateStepError(f"{exc} (while assigning pole {idx + 1} of {len(queue)})") from None
    if state.j != n:
        raise DegenerateStepError(f"assignment finished with {state.j} columns, expected {n}")
    x = complete_X(par, state.Xi, tol)
    f, g = extract_feedback(a, e, par, x, state.S, state.T, state.P)
    return Solution(
        F=f,
        G=g,
        P=state.P,
        S=state.S,
        T=state.T,
        X=x,
        blocks=state.blocks,
        steps=state.steps,
    )

"""Factor-growing assignment steps and the full feedback pipeline."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schurpole import DegenerateStepError, PolePair, Problem, run_pipeline
from schurpole.assign import (
    _complex_pair_core,
    assign_infinite_block,
    compute_parametrization,
    d_delta_block,
)

from conftest import make_instance, rng_matrix

seeds = st.integers(min_value=0, max_value=2**32 - 1)


# ---------------------------------------------------------------------------
# building blocks


def test_d_delta_block_values():
    blk = d_delta_block(0.5, -0.25, 2.0)
    assert np.allclose(blk, [[0.5, -0.5], [0.125, 0.5]])
    # delta = 1 gives the plain rotation-like block.
    assert np.allclose(d_delta_block(0.1, 0.2, 1.0), [[0.1, 0.2], [-0.2, 0.1]])


@given(seeds, st.integers(min_value=1, max_value=5), st.integers(min_value=1, max_value=4))
def test_parametrization_splits_input_range(seed, n_extra, m):
    n = m + n_extra
    b = rng_matrix(seed, n, m)
    par = compute_parametrization(b)
    assert par.q1.shape == (n, m)
    assert par.q2.shape == (n, n - m)
    q = np.hstack([par.q1, par.q2])
    assert np.allclose(q.T @ q, np.eye(n), atol=1e-12)
    assert np.allclose(par.q1 @ par.r, b, atol=1e-12 * max(1.0, np.linalg.norm(b)))
    assert np.linalg.norm(par.q2.T @ b) <= 1e-12 * max(1.0, np.linalg.norm(b))
    assert np.allclose(par.r, np.triu(par.r))


def test_infinite_block_is_exact_identity_zero():
    prob = make_instance(6, 2, 2, 2, trial=0)
    par = compute_parametrization(prob.B)
    k = prob.n - prob.r
    state = assign_infinite_block(prob.A, prob.E, par, k)
    assert state.j == k
    # The prescribed blocks are written exactly, not up to rounding:
    # S gets the identity and T the zero matrix.
    assert np.array_equal(state.S, np.eye(k))
    assert np.array_equal(state.T, np.zeros((k, k)))
    res = state.relation_residuals(prob.A, prob.E, par)
    assert res["resA"] <= 1e-12 * max(1.0, np.linalg.norm(prob.A))
    assert res["resE"] <= 1e-12 * max(1.0, np.linalg.norm(prob.E))
    assert res["orth"] <= 1e-13
    # Columns of P span directions that E + BG will annihilate: E P lies in
    # the range of B.
    assert np.linalg.norm(par.q2.T @ prob.E @ state.P) <= 1e-12


def test_infinite_block_zero_count_is_empty():
    prob = make_instance(4, 2, 2, 4, trial=0)
    par = compute_parametrization(prob.B)
    state = assign_infinite_block(prob.A, prob.E, par, 0)
    assert state.j == 0
    assert state.S.shape == (0, 0)


# ---------------------------------------------------------------------------
# full pipeline on a standard state-space system


def test_state_space_assignment_matches_inverse_reduction():
    rng = np.random.default_rng(7)
    a = rng.standard_normal((4, 4))
    b = rng.standard_normal((4, 2))
    targets = (
        PolePair.from_value(-1.0),
        PolePair.from_value(-2.0),
        PolePair.from_value(-3.0 + 1.0j),
    )
    prob = Problem(E=np.eye(4), A=a, B=b, poles=targets, r=4)
    sol = run_pipeline(prob)
    a_c = a + b @ sol.F
    e_c = np.eye(4) + b @ sol.G
    got = np.sort_complex(np.linalg.eigvals(np.linalg.solve(e_c, a_c)))
    want = np.sort_complex(np.array([-1.0, -2.0, -3.0 + 1.0j, -3.0 - 1.0j]))
    assert np.allclose(got, want, atol=1e-8)


def test_pipeline_residual_identities():
    prob = make_instance(6, 3, 3, 5, trial=2)
    sol = run_pipeline(prob)
    a_c = prob.A + prob.B @ sol.F
    e_c = prob.E + prob.B @ sol.G
    scale = np.linalg.norm(prob.A) + np.linalg.norm(prob.E) + np.linalg.norm(sol.X)
    assert np.linalg.norm(a_c @ sol.P - sol.X @ sol.S) <= 1e-10 * scale
    assert np.linalg.norm(e_c @ sol.P - sol.X @ sol.T) <= 1e-10 * scale
    assert np.linalg.norm(sol.P.T @ sol.P - np.eye(prob.n)) <= 1e-12 * prob.n
    # S, T are upper (quasi-)triangular by construction.
    assert np.allclose(sol.S, np.triu(sol.S, -1))
    assert np.allclose(sol.T, np.triu(sol.T, -1))


@settings(max_examples=25)
@given(
    st.integers(min_value=0, max_value=10**6),
    st.sampled_from([(4, 2, 2), (5, 3, 2), (6, 2, 3), (6, 5, 4)]),
)
def test_pipeline_invariants_random(seed, shape):
    n, rank_e, m = shape
    q = min(n, rank_e + m)
    r = q - (seed % (m + 1))
    prob = make_instance(n, rank_e, m, r, trial=seed % 11, seed=seed)
    sol = run_pipeline(prob)
    a_c = prob.A + prob.B @ sol.F
    e_c = prob.E + prob.B @ sol.G
    scale = np.linalg.norm(prob.A) + np.linalg.norm(prob.E) + np.linalg.norm(sol.X)
    assert np.linalg.norm(a_c @ sol.P - sol.X @ sol.S) <= 1e-10 * scale
    assert np.linalg.norm(e_c @ sol.P - sol.X @ sol.T) <= 1e-10 * scale
    assert np.linalg.norm(sol.P.T @ sol.P - np.eye(n)) <= 1e-12 * n
    assert sol.F.shape == (m, n) and sol.G.shape == (m, n)
    assert np.all(np.isfinite(sol.F)) and np.all(np.isfinite(sol.G))


def test_pipeline_is_deterministic():
    prob = make_instance(6, 3, 2, 4, trial=5)
    s1 = run_pipeline(prob)
    s2 = run_pipeline(prob)
    assert np.array_equal(s1.F, s2.F)
    assert np.array_equal(s1.G, s2.G)
    assert np.array_equal(s1.P, s2.P)
    assert np.array_equal(s1.X, s2.X)


def test_pipeline_rejects_unknown_order():
    prob = make_instance(4, 2, 2, 3, trial=0)
    with pytest.raises(ValueError, match="unknown order"):
        run_pipeline(prob, order="sideways")


# ---------------------------------------------------------------------------
# processing orders


def test_fin_first_matches_inf_first_spectrum_m1():
    # With a single input the deferred infinite poles decouple exactly, so
    # the finite-poles-first order must succeed and hit the same spectrum.
    prob = make_instance(6, 3, 1, 3, trial=1)
    sol_a = run_pipeline(prob, order="inf-first")
    sol_b = run_pipeline(prob, order="fin-first")
    for sol in (sol_a, sol_b):
        a_c = prob.A + prob.B @ sol.F
        e_c = prob.E + prob.B @ sol.G
        scale = np.linalg.norm(prob.A) + np.linalg.norm(prob.E) + np.linalg.norm(sol.X)
        assert np.linalg.norm(a_c @ sol.P - sol.X @ sol.S) <= 1e-10 * scale
        assert np.linalg.norm(e_c @ sol.P - sol.X @ sol.T) <= 1e-10 * scale


def test_fin_first_deferred_coupling_is_refused():
    # Two deferred infinite poles with m = 2 genuinely couple through T,
    # which would push the closed-loop index above one; the step must
    # refuse with a pointer to the safe order instead of emitting garbage.
    prob = make_instance(6, 2, 2, 2, trial=0)
    run_pipeline(prob, order="inf-first")  # the safe order succeeds
    with pytest.raises(DegenerateStepError, match="infinite-poles-first"):
        run_pipeline(prob, order="fin-first")


# ---------------------------------------------------------------------------
# complex-pair core: branch selection and optimality data


def _synthetic_stacked_basis(nu1, nu2, phase=0.0):
    """Orthonormal stacked columns whose z1 part has singular values nu1, nu2
    and whose top left singular vector has orthogonal real/imag parts of
    norm 1/sqrt(2) each."""
    rot = np.exp(1j * phase)
    psi1 = rot * np.array([1.0, 1.0j, 0.0, 0.0]) / np.sqrt(2.0)
    psi2 = rot * np.array([0.0, 0.0, 1.0, 1.0j]) / np.sqrt(2.0)
    z1 = np.column_stack([nu1 * psi1, nu2 * psi2])
    rest1 = np.zeros(4, dtype=complex)
    rest2 = np.zeros(4, dtype=complex)
    rest1[0] = np.sqrt(1.0 - nu1**2)
    rest2[1] = np.sqrt(1.0 - nu2**2)
    rest = np.column_stack([rest1, rest2])
    z3, z4 = rest[:2], rest[2:]
    return z1, z3, z4


def test_complex_core_special_geometry_objective():
    # Top direction with orthogonal half-norm real/imag parts: the
    # single-direction objective collapses to 2*(1 - nu1^2)/nu1^2 exactly.
    nu1, nu2 = 0.8, 0.5
    z1, z3, z4 = _synthetic_stacked_basis(nu1, nu2)
    _, _, diag = _complex_pair_core(z1, z3, z4, tau_pen=0.3)
    expected = 2.0 * (1.0 - nu1**2) / nu1**2  # = 1.125 for nu1 = 0.8
    assert abs(diag["rho1"] - expected) <= 1e-12 * expected
    chosen = diag["rho2"] if diag["branch"] == "hamiltonian" else diag["rho1"]
    assert chosen == min(diag["rho1"], diag["rho2"])
    assert abs(chosen - expected) <= 1e-12 * expected


def test_complex_core_objective_is_phase_invariant():
    base = None
    for phase in (0.0, 0.3, 1.2):
        z1, z3, z4 = _synthetic_stacked_basis(0.8, 0.5, phase=phase)
        _, _, diag = _complex_pair_core(z1, z3, z4, tau_pen=0.3)
        val = min(diag["rho1"], diag["rho2"])
        if base is None:
            base = val
        assert abs(val - base) <= 1e-10 * base


def test_complex_core_two_direction_bound():
    rng = np.random.default_rng(11)
    exercised = 0
    for _ in range(20):
        raw = rng.standard_normal((9, 2)) + 1j * rng.standard_normal((9, 2))
        q, _ = np.linalg.qr(raw)  # orthonormal stacked columns
        scale = np.diag([0.9, 0.6])
        cols = q @ scale  # singular values 0.9 and 0.6 overall
        z1, z3, z4 = cols[:5], cols[5:7], cols[7:]
        nus = np.linalg.svd(z1, compute_uv=False)
        if nus.size < 2 or nus[1] <= 1e-8 * nus[0] or nus[0] >= 1.0 - 1e-9:
            continue
        _, _, diag = _complex_pair_core(z1, z3, z4, tau_pen=0.5)
        if diag["branch"] not in ("hamiltonian", "jacobi"):
            continue
        exercised += 1
        c2 = (1.0 - diag["nu2"] ** 2) / diag["nu2"] ** 2
        assert diag["rho2"] <= 2.0 * c2 * (1.0 + 1e-12)
        chosen = diag["rho2"] if diag["branch"] == "hamiltonian" else diag["rho1"]
        assert chosen == min(diag["rho1"], diag["rho2"])
        coeff = diag["coeff"]
        assert np.isclose(np.linalg.norm(coeff), 1.0, atol=1e-12)
    assert exercised >= 10


def test_complex_core_rank1_requires_prior_columns():
    # One usable direction and free coefficients but nothing to absorb them
    # into: must refuse rather than fabricate a column.
    psi1 = np.array([1.0, 1.0j, 0.5]) / np.linalg.norm([1.0, 1.0j, 0.5])
    z1 = np.column_stack([0.9 * psi1, 0.9 * psi1 * (1.0 + 1e-12)])
    z3 = np.zeros((0, 2), dtype=complex)
    z4 = np.zeros((0, 2), dtype=complex)
    with pytest.raises(DegenerateStepError):
        _complex_pair_core(z1, z3, z4, tau_pen=0.3)


def test_complex_core_zero_z1_is_degenerate():
    z1 = np.zeros((4, 2), dtype=complex)
    z3 = np.zeros((1, 2), dtype=complex)
    z4 = np.zeros((3, 2), dtype=complex)
    with pytest.raises(DegenerateStepError, match="Z1 vanishes"):
        _complex_pair_core(z1, z3, z4, tau_pen=0.0)


def test_rank1_coefficients_solve_the_quadratic():
    # On a single-input instance the complex step has one usable direction;
    # the recorded quadratic data must satisfy the stationarity equation
    # 2 H y + h = 0 at the recorded coefficients.
    prob = make_instance(6, 3, 1, 4, trial=0)
    sol = run_pipeline(prob)
    rank1 = [
        s for s in sol.steps if s.kind == "complex" and s.data.get("branch") == "rank1"
    ]
    assert rank1, "expected at least one rank-1 complex step"
    for step in rank1:
        hmat, hvec, y = step.data["H"], step.data["h"], step.data["y"]
        if hmat is None:
            continue
        grad = 2.0 * hmat @ y + hvec
        assert np.linalg.norm(grad) <= 1e-10 * max(1.0, np.linalg.norm(hvec))


# ---------------------------------------------------------------------------
# step records


def test_step_records_cover_all_columns():
    prob = make_instance(6, 3, 2, 4, trial=3)
    sol = run_pipeline(prob)
    sizes = []
    for step in sol.steps:
        if step.kind == "infinite-block":
            sizes.append(step.data["count"])
        elif step.kind == "real":
            sizes.append(1)
        else:
            sizes.append(2)
    assert sum(sizes) == prob.n
    # Null-space dimensions follow the growth law m + j for every step
    # after the infinite block.
    for step in sol.steps:
        if step.kind in ("real", "complex"):
            assert step.null_dim == prob.m + step.j_before

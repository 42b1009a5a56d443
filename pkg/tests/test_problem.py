"""Problem/solution file formats and feasibility validation."""

from __future__ import annotations

from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from schurpole import (
    ParseError,
    PolePair,
    Problem,
    parse_problem,
    parse_solution,
    serialize_problem,
    serialize_solution,
    validate_problem,
)

from conftest import make_instance


def small_problem():
    return Problem(
        E=np.array([[1.0, 0.0], [0.0, 0.0]]),
        A=np.array([[0.5, 1.0], [0.0, 1.0]]),
        B=np.array([[1.0], [1.0]]),
        poles=(PolePair.from_value(-1.0), PolePair.infinite()),
        r=1,
    )


# ---------------------------------------------------------------------------
# problem constructor validation


def test_problem_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        Problem(
            E=np.eye(2),
            A=np.eye(3),
            B=np.ones((2, 1)),
            poles=(PolePair.from_value(1.0), PolePair.infinite()),
            r=1,
        )


def test_problem_pole_count_must_match_n():
    with pytest.raises(ValueError):
        Problem(
            E=np.eye(2),
            A=np.eye(2),
            B=np.ones((2, 1)),
            poles=(PolePair.from_value(1.0),),
            r=1,
        )


def test_problem_infinite_count_must_match_r():
    with pytest.raises(ValueError):
        Problem(
            E=np.eye(2),
            A=np.eye(2),
            B=np.ones((2, 1)),
            poles=(PolePair.from_value(1.0), PolePair.from_value(2.0)),
            r=1,  # claims one infinite pole, none supplied
        )


def test_problem_complex_pair_counts_two():
    prob = Problem(
        E=np.eye(2),
        A=np.eye(2),
        B=np.ones((2, 1)),
        poles=(PolePair.from_value(1.0 + 1.0j),),
        r=2,
    )
    assert prob.n == 2 and prob.m == 1
    assert len(prob.finite_poles) == 1


def test_problem_rejects_non_finite_matrix():
    e = np.eye(2)
    e[0, 0] = np.nan
    with pytest.raises(ValueError):
        Problem(
            E=e,
            A=np.eye(2),
            B=np.ones((2, 1)),
            poles=(PolePair.from_value(1.0), PolePair.infinite()),
            r=1,
        )


# ---------------------------------------------------------------------------
# parse / serialize round trips


def test_problem_round_trip_is_exact():
    prob = small_problem()
    text = serialize_problem(prob)
    back = parse_problem(text)
    assert np.array_equal(back.E, prob.E)
    assert np.array_equal(back.A, prob.A)
    assert np.array_equal(back.B, prob.B)
    # Infinite poles are implicit in the file; the parser lists them first.
    assert Counter(back.poles) == Counter(prob.poles)
    assert all(p.is_infinite for p in back.poles[: back.n - back.r])
    assert back.r == prob.r


@given(st.integers(min_value=0, max_value=2**31 - 1))
def test_random_problem_round_trip_bit_exact(seed):
    prob = make_instance(4, 2, 2, 3, trial=seed % 7, seed=seed)
    back = parse_problem(serialize_problem(prob))
    assert np.array_equal(back.E, prob.E)
    assert np.array_equal(back.A, prob.A)
    assert np.array_equal(back.B, prob.B)
    assert Counter(back.poles) == Counter(prob.poles)


def test_serialize_uses_full_precision():
    prob = Problem(
        E=np.eye(1) * (1.0 / 3.0),
        A=np.eye(1),
        B=np.ones((1, 1)),
        poles=(PolePair.from_value(np.pi),),
        r=1,
    )
    back = parse_problem(serialize_problem(prob))
    assert back.E[0, 0] == prob.E[0, 0]
    assert back.poles[0].value == np.pi


def test_solution_round_trip():
    f = np.array([[1.0 / 3.0, -2.0], [0.0, 1e-17]])
    g = np.array([[5.0, 6.0], [7.0, np.pi]])
    f2, g2 = parse_solution(serialize_solution(f, g))
    assert np.array_equal(f, f2)
    assert np.array_equal(g, g2)


# ---------------------------------------------------------------------------
# parse errors


def test_parse_empty_file():
    with pytest.raises(ParseError, match="empty problem file"):
        parse_problem("")


def test_parse_bad_header():
    with pytest.raises(ParseError, match="header must be 'n m r'") as ei:
        parse_problem("1 2\n")
    assert ei.value.line == 1


def test_parse_truncated_matrix_reports_line():
    text = "2 1 1\n1 0\n"
    with pytest.raises(ParseError, match="unexpected end of file"):
        parse_problem(text)


def test_parse_bad_number():
    text = "1 1 1\nx\n1\n1\n1 0 1 0\n"
    with pytest.raises(ParseError, match="invalid number"):
        parse_problem(text)


def test_parse_beta_zero_pole_line():
    text = "1 1 1\n1\n1\n1\n1 0 0 0\n"
    with pytest.raises(ParseError, match="beta = 0"):
        parse_problem(text)


def test_parse_unpaired_complex_pole():
    # Complex pole in the final slot leaves no room for its conjugate.
    text = "2 1 2\n1 0\n0 1\n1 0\n0 1\n1\n1\n-1 0 1 0\n1 1 1 0\n"
    with pytest.raises(ParseError, match="unpaired complex pole"):
        parse_problem(text)


def test_parse_wrong_conjugate():
    text = "2 1 2\n1 0\n0 1\n1 0\n0 1\n1\n1\n1 1 1 0\n1 -2 1 0\n"
    with pytest.raises(ParseError, match="not followed by its conjugate"):
        parse_problem(text)


def test_parse_trailing_data():
    prob = small_problem()
    text = serialize_problem(prob) + "0 0 1 0\n"
    with pytest.raises(ParseError, match="trailing data"):
        parse_problem(text)


def test_parse_solution_errors():
    with pytest.raises(ParseError, match="empty solution file"):
        parse_solution("")
    with pytest.raises(ParseError, match="header must be 'n m'"):
        parse_solution("2\n")
    with pytest.raises(ParseError, match="non-finite"):
        parse_solution("1 1\nnan\n0\n")
    with pytest.raises(ParseError, match="trailing data"):
        parse_solution("1 1\n1\n2\n3\n")


def test_parse_problem_comments_blank_lines():
    # Blank lines are insignificant; content is whitespace separated.
    prob = small_problem()
    text = serialize_problem(prob).replace("\n", "\n\n")
    back = parse_problem(text)
    assert np.array_equal(back.E, prob.E)


# ---------------------------------------------------------------------------
# validation checks


def test_validate_good_instance_passes():
    prob = make_instance(5, 3, 2, 4, trial=1)
    rep = validate_problem(prob)
    assert rep.passed
    assert rep.q == min(5, 3 + 2)
    assert not rep.failures()


def test_validate_rank_deficient_b():
    prob = Problem(
        E=np.eye(2),
        A=np.diag([1.0, 2.0]),
        B=np.array([[1.0, 2.0], [2.0, 4.0]]),
        poles=(PolePair.from_value(-1.0), PolePair.from_value(-2.0)),
        r=2,
    )
    rep = validate_problem(prob)
    names = [c.name for c in rep.failures()]
    assert "b-full-column-rank" in names


def test_validate_finite_pole_count_bound():
    # rank[E B] = 2 with m = 1 forces r in [1, 2]; r = 0 is infeasible.
    prob = Problem(
        E=np.eye(2),
        A=np.diag([1.0, 2.0]),
        B=np.array([[1.0], [0.0]]),
        poles=(PolePair.infinite(), PolePair.infinite()),
        r=0,
    )
    rep = validate_problem(prob)
    names = [c.name for c in rep.failures()]
    assert "finite-pole-count-bound" in names


def test_validate_uncontrollable_finite_mode():
    # Mode at lambda = 2 is untouched by B = e1.
    prob = Problem(
        E=np.eye(2),
        A=np.diag([1.0, 2.0]),
        B=np.array([[1.0], [0.0]]),
        poles=(PolePair.from_value(-1.0), PolePair.from_value(-2.0)),
        r=2,
    )
    rep = validate_problem(prob)
    names = [c.name for c in rep.failures()]
    assert "finite-pole-controllability" in names


def test_validate_uncontrollable_at_infinity():
    # E singular with A*null(E) and B unable to complete the range.
    prob = Problem(
        E=np.array([[1.0, 0.0], [0.0, 0.0]]),
        A=np.array([[1.0, 0.0], [0.0, 1.0]]),
        B=np.array([[1.0], [0.0]]),
        poles=(PolePair.from_value(-1.0), PolePair.infinite()),
        r=1,
    )
    # A * null(E) = e2 does complete the range here, so craft A to map the
    # null space of E back into range(E) instead.
    prob2 = Problem(
        E=np.array([[1.0, 0.0], [0.0, 0.0]]),
        A=np.array([[0.0, 1.0], [0.0, 0.0]]),
        B=np.array([[1.0], [0.0]]),
        poles=(PolePair.from_value(-1.0), PolePair.infinite()),
        r=1,
    )
    assert validate_problem(prob).passed
    names = [c.name for c in validate_problem(prob2).failures()]
    assert "infinite-pole-controllability" in names


def test_validate_huge_finite_eigenvalue_probe_is_scale_free():
    # Open-loop eigenvalue near 1e17: the naive probe rank([lam*E - A, B])
    # drowns B below the tolerance; the homogeneous probe must pass.
    prob = Problem(
        E=np.diag([1e-17, 1.0]),
        A=np.eye(2),
        B=np.eye(2),
        poles=(PolePair.from_value(-1.0), PolePair.from_value(-2.0)),
        r=2,
    )
    rep = validate_problem(prob)
    assert rep.passed, [f"{c.name}: {c.detail}" for c in rep.failures()]


def test_validate_multiplicity_warning():
    prob = Problem(
        E=np.eye(2),
        A=np.diag([1.0, 2.0]),
        B=np.array([[1.0], [1.0]]),
        poles=(PolePair.from_value(-3.0), PolePair.from_value(-3.0)),
        r=2,
    )
    rep = validate_problem(prob)
    assert any("multiplicity" in w for w in rep.warnings)

"""Problem container, text file format, and feasibility validation.

Problem files are plain text.  ``#`` starts a comment, blank lines are
skipped, and all values are whitespace separated::

    n m r
    n rows of E   (n entries each)
    n rows of A   (n entries each)
    n rows of B   (m entries each)
    r finite pole lines: alpha_re alpha_im beta_re beta_im

The n - r infinite poles are implicit.  Complex poles must appear in
adjacent conjugate lines.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError, SingularPencilError
from .linalg import numerical_rank, orthonormal_null_basis
from .poles import PoleKind, PolePair, count_infinite

__all__ = [
    "Problem",
    "CheckResult",
    "ValidationReport",
    "parse_problem",
    "serialize_problem",
    "parse_solution",
    "serialize_solution",
    "validate_problem",
]

# Fixed stream for the random finite-lambda probes of the controllability
# check; a constant keeps validation reproducible.
_PROBE_SEED = 0x5F0C8E


@dataclass(eq=False)
class Problem:
    """A pole-assignment instance (E, A, B, requested poles, r)."""

    E: np.ndarray
    A: np.ndarray
    B: np.ndarray
    poles: tuple[PolePair, ...]
    r: int

    def __post_init__(self):
        self.E = np.asarray(self.E, dtype=np.float64)
        self.A = np.asarray(self.A, dtype=np.float64)
        self.B = np.asarray(self.B, dtype=np.float64)
        n = self.E.shape[0]
        if self.E.shape != (n, n) or self.A.shape != (n, n):
            raise ValueError("E and A must be square with equal shape")
        if self.B.ndim != 2 or self.B.shape[0] != n or self.B.shape[1] < 1:
            raise ValueError("B must be n x m with m >= 1")
        for name, mat in (("E", self.E), ("A", self.A), ("B", self.B)):
            if not np.all(np.isfinite(mat)):
                raise ValueError(f"{name} contains non-finite entries")
        if not 0 <= self.r <= n:
            raise ValueError(f"r={self.r} outside [0, {n}]")
        self.poles = tuple(self.poles)
        n_inf = count_infinite(self.poles)
        if n_inf != n - self.r:
            raise ValueError(f"expected {n - self.r} infinite poles, got {n_inf}")
        total = n_inf
        for p in self.poles:
            if not p.is_infinite:
                total += 2 if p.kind is PoleKind.FINITE_COMPLEX else 1
        if total != n:
            raise ValueError(f"poles count {total} (with conjugates) != n={n}")

    @property
    def n(self) -> int:
        return self.E.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    @property
    def finite_poles(self) -> tuple[PolePair, ...]:
        return tuple(p for p in self.poles if not p.is_infinite)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass
class ValidationReport:
    q: int
    r: int
    checks: tuple[CheckResult, ...]
    warnings: tuple[str, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]


def _content_lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            out.append((i, body.split()))
    return out


def _floats(tokens: list[str], count: int, lineno: int, what: str) -> list[float]:
    if len(tokens) != count:
        raise ParseError(f"expected {count} values for {what}, got {len(tokens)}", lineno)
    vals = []
    for t in tokens:
        try:
            vals.append(float(t))
        except ValueError:
            raise ParseError(f"invalid number {t!r} in {what}", lineno) from None
    return vals


def parse_problem(text) -> Problem:
    """Parse a problem file; raises ParseError with a line number on failure."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty problem file")
    pos = 0

    def take(what: str) -> tuple[int, list[str]]:
        nonlocal pos
        if pos >= len(lines):
            last = lines[-1][0] if lines else 1
            raise ParseError(f"unexpected end of file, missing {what}", last)
        item = lines[pos]
        pos += 1
        return item

    lineno, toks = take("header 'n m r'")
    if len(toks) != 3:
        raise ParseError("header must be 'n m r'", lineno)
    try:
        n, m, r = (int(t) for t in toks)
    except ValueError:
        raise ParseError("header entries must be integers", lineno) from None
    if n < 1 or m < 1 or not 0 <= r <= n:
        raise ParseError(f"invalid dimensions n={n} m={m} r={r}", lineno)

    def matrix(rows: int, cols: int, what: str) -> np.ndarray:
        data = []
        for k in range(rows):
            ln, toks = take(f"{what} row {k + 1}")
            data.append(_floats(toks, cols, ln, f"{what} row {k + 1}"))
        return np.array(data, dtype=np.float64)

    e = matrix(n, n, "E")
    a = matrix(n, n, "A")
    b = matrix(n, m, "B")

    raw_poles: list[tuple[int, complex, complex]] = []
    for k in range(r):
        ln, toks = take(f"pole line {k + 1}")
        are, aim, bre, bim = _floats(toks, 4, ln, f"pole line {k + 1}")
        raw_poles.append((ln, complex(are, aim), complex(bre, bim)))
    if pos < len(lines):
        raise ParseError("trailing data after last pole line", lines[pos][0])

    reps: list[PolePair] = []
    i = 0
    while i < len(raw_poles):
        ln, alpha, beta = raw_poles[i]
        if beta == 0:
            raise ParseError("finite pole line has beta = 0", ln)
        try:
            pair = PolePair.make(alpha, beta)
        except ValueError as exc:
            raise ParseError(str(exc), ln) from None
        if pair.kind is PoleKind.FINITE_COMPLEX:
            if i + 1 >= len(raw_poles):
                raise ParseError("unpaired complex pole (conjugate line missing)", ln)
            ln2, a2, b2 = raw_poles[i + 1]
            # next line must carry the conjugate pole: conj(a)*b2 == a2*conj(b)
            lhs = alpha.conjugate() * b2
            rhs = a2 * beta.conjugate()
            if abs(lhs - rhs) > 1e-12 * (abs(lhs) + abs(rhs)):
                raise ParseError("complex pole is not followed by its conjugate", ln2)
            i += 2
        else:
            i += 1
        reps.append(pair)

    poles = (PolePair.infinite(),) * (n - r) + tuple(reps)
    try:
        return Problem(e, a, b, poles, r)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _fmt(x: float) -> str:
    return "%.17g" % x


def serialize_problem(p: Problem) -> str:
    """Render a Problem in the text format accepted by parse_problem."""
    out = [f"{p.n} {p.m} {p.r}"]
    for mat in (p.E, p.A, p.B):
        for row in mat:
            out.append(" ".join(_fmt(v) for v in row))
    for pole in p.poles:
        if pole.is_infinite:
            continue
        lam = pole.value
        out.append(f"{_fmt(lam.real)} {_fmt(lam.imag)} 1 0")
        if pole.kind is PoleKind.FINITE_COMPLEX:
            out.append(f"{_fmt(lam.real)} {_fmt(-lam.imag)} 1 0")
    return "\n".join(out) + "\n"


def parse_solution(text) -> tuple[np.ndarray, np.ndarray]:
    """Parse a solution file: header ``n m``, then m rows of F and m rows
    of G with n entries each.  Same comment and whitespace rules as
    problem files.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty solution file")
    lineno, toks = lines[0]
    if len(toks) != 2:
        raise ParseError("solution header must be 'n m'", lineno)
    try:
        n, m = (int(t) for t in toks)
    except ValueError:
        raise ParseError("solution header entries must be integers", lineno) from None
    if n < 1 or m < 1:
        raise ParseError(f"invalid solution dimensions n={n} m={m}", lineno)
    need = 1 + 2 * m
    if len(lines) < need:
        raise ParseError(
            f"solution file has {len(lines) - 1} matrix rows, expected {2 * m}",
            lines[-1][0],
        )
    if len(lines) > need:
        raise ParseError("trailing data after last G row", lines[need][0])
    rows = []
    for k in range(2 * m):
        ln, toks = lines[1 + k]
        name = "F" if k < m else "G"
        rows.append(_floats(toks, n, ln, f"{name} row {k % m + 1}"))
    f = np.array(rows[:m], dtype=np.float64)
    g = np.array(rows[m:], dtype=np.float64)
    for name, mat in (("F", f), ("G", g)):
        if not np.all(np.isfinite(mat)):
            raise ParseError(f"{name} contains non-finite entries")
    return f, g


def serialize_solution(f, g) -> str:
    """Render a feedback pair in the format accepted by parse_solution."""
    f = np.atleast_2d(np.asarray(f, dtype=np.float64))
    g = np.atleast_2d(np.asarray(g, dtype=np.float64))
    if f.shape != g.shape:
        raise ValueError(f"F and G must share a shape, got {f.shape} and {g.shape}")
    m, n = f.shape
    out = [f"{n} {m}"]
    for mat in (f, g):
        for row in mat:
            out.append(" ".join(_fmt(v) for v in row))
    return "\n".join(out) + "\n"


def validate_problem(p: Problem, tol: float | None = None, probes: int = 8) -> ValidationReport:
    """Feasibility checks for an assignment instance.

    Verifies, with numerical ranks at cutoff ``tol`` (None = default
    policy):  (a) B has full column rank; (b/c) the finite pole count r
    lies in [q - m, q] where q = rank([E B]); (d) [E, A*Ninf, B] has full
    row rank for a null basis Ninf of E; (e) [lambda*E - A, B] has full row
    rank at every finite open-loop eigenvalue and at ``probes`` fixed
    pseudo-random complex values.  Requested poles of multiplicity above m
    are recorded as warnings.
    """
    from .metrics import generalized_eig_oracle  # local import avoids a cycle

    n, m, r = p.n, p.m, p.r
    checks: list[CheckResult] = []
    warnings: list[str] = []

    b_rank = numerical_rank(p.B, tol).rank
    checks.append(
        CheckResult("b-full-column-rank", b_rank == m, f"rank(B)={b_rank}, m={m}")
    )

    q = numerical_rank(np.hstack([p.E, p.B]), tol).rank
    checks.append(
        CheckResult(
            "finite-pole-count-bound",
            q - m <= r <= q,
            f"finite pole count r={r} must lie in [{max(q - m, 0)}, {q}] "
            f"for rank([E B])={q}, m={m}",
        )
    )

    n_inf = orthonormal_null_basis(p.E, tol)
    stacked = np.hstack([p.E, p.A @ n_inf, p.B])
    d_rank = numerical_rank(stacked, tol).rank
    checks.append(
        CheckResult(
            "infinite-pole-controllability",
            d_rank == n,
            f"rank([E, A*Ninf, B])={d_rank}, need {n}",
        )
    )

    lams: list[complex] = []
    try:
        for pole in generalized_eig_oracle(p.A, p.E):
            if not pole.is_infinite:
                lams.append(pole.value)
                if pole.kind is PoleKind.FINITE_COMPLEX:
                    lams.append(pole.value.conjugate())
    except SingularPencilError:
        warnings.append("open-loop pencil is singular; eigenvalue probes skipped")
    rng = np.random.default_rng(_PROBE_SEED)
    for _ in range(probes):
        lams.append(complex(rng.standard_normal(), rng.standard_normal()))
    ok = True
    detail = "full row rank at all probes"
    for lam in lams:
        # Homogeneous scaling keeps the probe well conditioned for huge
        # eigenvalues, where lam*E - A would drown B under the tolerance.
        scale = np.sqrt(abs(lam) ** 2 + 1.0)
        mat = np.hstack([(lam / scale) * p.E - (1.0 / scale) * p.A, p.B.astype(complex)])
        rk = numerical_rank(mat, tol).rank
        if rk != n:
            ok = False
            detail = f"rank([lambda*E - A, B])={rk} at lambda={lam:g}"
            break
    checks.append(CheckResult("finite-pole-controllability", ok, detail))

    vals = [p2.value for p2 in p.finite_poles]
    for i, v in enumerate(vals):
        mult = sum(
            1
            for w in vals
            if abs(w - v) <= 1e-10 * max(1.0, abs(v))
        )
        if mult > m:
            warnings.append(
                f"requested pole {v:g} has multiplicity {mult} > m={m}; "
                "assignment accuracy may degrade"
            )
            break

    return ValidationReport(q=q, r=r, checks=tuple(checks), warnings=tuple(warnings))

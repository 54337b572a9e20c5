"""Joint moments of the first-passage time and area via ODE recursion.

For X(t) = x - mu*t + B_t started at x > 0 and killed at its first passage
below zero, write tau for the passage time and A for the swept area.  The
moment V_{m,n}(x) = E[tau^m A^n] solves

    (1/2) V'' - mu V' = -m V_{m-1,n} - n x V_{m,n-1},    V_{m,n}(0) = 0,

and is the unique polynomial solution: degree m + 2n, vanishing constant
term.  The homogeneous part c1 + c2*exp(2*mu*x) is dropped entirely; the
polynomial particular solution is the one that stays bounded as mu grows
and vanishes at zero.

Two independent solvers are provided.  `solve_back_substitution` walks the
coefficient equations top-down.  `solve_explicit_inverse` applies the
closed-form inverse of the upper-bidiagonal coefficient matrix (diagonal
-i*mu, superdiagonal i(i+1)/2) as a triangular map.  They must agree
exactly; tests cross-check them on the whole lattice.

The base entry V_{0,0} = 1 is stored explicitly: the right-hand sides for
(1,0) and (0,1) need it, even though it breaks the vanishing-at-zero shape
every other entry obeys.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .laurent import Laurent, Poly

MomentIndex = tuple[int, int]


class MissingMomentError(KeyError):
    """A recursion dependency is absent from the moment table."""


class MomentTable:
    """Memoized lattice of moment polynomials, closed under dependencies."""

    def __init__(self):
        self.entries: dict[MomentIndex, Poly] = {(0, 0): Poly.constant(1)}

    def __contains__(self, idx: MomentIndex) -> bool:
        return idx in self.entries

    def require(self, idx: MomentIndex) -> Poly:
        try:
            return self.entries[idx]
        except KeyError:
            raise MissingMomentError(idx) from None

    def store(self, idx: MomentIndex, poly: Poly) -> None:
        m, n = idx
        # shape guard: degree m+2n, no constant term
        if poly.degree != m + 2 * n or not poly.coefficient(0).is_zero():
            raise ValueError(f"malformed moment polynomial for {idx}")
        self.entries[idx] = poly


def _validate_index(idx: MomentIndex) -> MomentIndex:
    m, n = idx
    if m < 0 or n < 0:
        raise ValueError(f"moment index must be nonnegative, got {idx}")
    return (int(m), int(n))


def assemble_rhs(idx: MomentIndex, table: MomentTable) -> Poly:
    """Right-hand side -m V_{m-1,n} - n x V_{m,n-1}, degree m+2n-1.

    Terms whose index would go negative contribute nothing.  The only
    nonzero constant term arises for idx = (1,0), where the dependency is
    V_{0,0} = 1.
    """
    m, n = _validate_index(idx)
    if (m, n) == (0, 0):
        raise ValueError("(0, 0) is the recursion base, it has no right-hand side")
    rhs = Poly.zero()
    if m >= 1:
        rhs = rhs + table.require((m - 1, n)).scale(-m)
    if n >= 1:
        rhs = rhs + table.require((m, n - 1)).mul_by_x().scale(-n)
    return rhs


def solve_back_substitution(rhs: Poly, idx: MomentIndex) -> Poly:
    """Solve (1/2) V'' - mu V' = rhs for the degree m+2n polynomial V, V(0)=0.

    Matching the coefficient of x^d on both sides gives

        (d+1) * ((d+2)/2 * a_{d+2} - mu * a_{d+1}) = r_d ,

    with a_{D+1} = 0 at the top degree D = m+2n.  The top equation fixes
    a_D = -r_{D-1}/(mu D); each lower equation then yields a_{d+1} from
    a_{d+2} by one exact division by mu.
    """
    m, n = _validate_index(idx)
    D = m + 2 * n
    if D == 0:
        raise ValueError("no polynomial shape to solve for at index (0, 0)")
    inv_mu = Laurent.of(1, -1)
    a: list[Laurent] = [Laurent.zero()] * (D + 1)
    a[D] = rhs.coefficient(D - 1) * Laurent.of(Fraction(-1, D), -1)
    for d in range(D - 2, -1, -1):
        half_step = a[d + 2] * Fraction(d + 2, 2)
        a[d + 1] = (half_step - rhs.coefficient(d) * Fraction(1, d + 1)) * inv_mu
    return Poly(a)


def solve_explicit_inverse(idx: MomentIndex, table: MomentTable) -> Poly:
    """Independent solver via the closed-form inverse of the system matrix.

    The coefficient equations read M a = r with M upper bidiagonal
    (M_ii = -i*mu, M_{i,i+1} = i(i+1)/2).  Row i of r collects the x^{i-1}
    coefficient of the right-hand side: the dependency columns are padded
    down by one (tau route, scaled by -m) and by two (area route, scaled
    by -n), constants included, which is where the base entry V_{0,0} = 1
    enters for the edge rows of the lattice.

    The inverse is upper triangular with C_{i,i} = -1/(i*mu) and the
    uniform ratio C_{i,j+1} = C_{i,j} * j/(2*mu); it is applied as a
    triangular map, never materialized.
    """
    m, n = _validate_index(idx)
    if (m, n) == (0, 0):
        raise ValueError("(0, 0) is the recursion base, nothing to solve")
    N = m + 2 * n
    r: list[Laurent] = [Laurent.zero()] * (N + 1)
    if m >= 1:
        dep = table.require((m - 1, n))
        for i in range(1, N + 1):
            r[i] = r[i] + dep.coefficient(i - 1) * (-m)
    if n >= 1:
        dep = table.require((m, n - 1))
        for i in range(1, N + 1):
            r[i] = r[i] + dep.coefficient(i - 2) * (-n)
    half_inv_mu = Laurent.of(Fraction(1, 2), -1)
    a: list[Laurent] = [Laurent.zero()] * (N + 1)
    for i in range(1, N + 1):
        c = Laurent.of(Fraction(-1, i), -1)
        acc = c * r[i]
        for j in range(i + 1, N + 1):
            c = c * half_inv_mu * (j - 1)
            acc = acc + c * r[j]
        a[i] = acc
    a[0] = Laurent.zero()
    return Poly(a)


_SOLVERS = ("back_substitution", "explicit_inverse")
_tables: dict[str, MomentTable] = {}


def joint_moment(m: int, n: int, solver: str = "back_substitution") -> Poly:
    """E[tau^m A^n] as an exact polynomial in x with Laurent-in-mu coefficients.

    Memoizing driver: fills the shared table along the dependency lattice,
    so repeated calls are cheap and idempotent.  `solver` selects the
    implementation; both give structurally identical results.
    """
    idx = _validate_index((m, n))
    if solver not in _SOLVERS:
        raise ValueError(f"unknown solver {solver!r}, expected one of {_SOLVERS}")
    table = _tables.setdefault(solver, MomentTable())
    return _fill(idx, table, solver)


def _fill(idx: MomentIndex, table: MomentTable, solver: str) -> Poly:
    m, n = idx
    for i in range(m + 1):
        for j in range(n + 1):
            if (i, j) in table:
                continue
            if solver == "back_substitution":
                poly = solve_back_substitution(assemble_rhs((i, j), table), (i, j))
            else:
                poly = solve_explicit_inverse((i, j), table)
            table.store((i, j), poly)
    return table.require(idx)


def verify_ode_residual(idx: MomentIndex, table: MomentTable) -> bool:
    """True iff (1/2) V'' - mu V' - rhs is identically zero, exactly."""
    v = table.require(_validate_index(idx))
    dv = v.differentiate()
    residual = (
        dv.differentiate().scale(Fraction(1, 2))
        - dv.scale(Laurent.of(1, 1))
        - assemble_rhs(idx, table)
    )
    return residual.is_zero()


def correlation_from_moments(x: float, mu: float) -> float:
    """Correlation of (tau, A) computed from the moment table.

    Covariance and the two variances are formed symbolically (exact
    polynomial products), evaluated at exact binary rationals of the
    inputs, and combined with a single square root at the end.  Matches
    the gamma = mu*x closed form to near machine precision.
    """
    if x <= 0 or mu <= 0:
        raise ValueError(f"x and mu must be positive, got x={x}, mu={mu}")
    v10 = joint_moment(1, 0)
    v01 = joint_moment(0, 1)
    cov = joint_moment(1, 1) - v10 * v01
    var_tau = joint_moment(2, 0) - v10 * v10
    var_area = joint_moment(0, 2) - v01 * v01
    xq = Fraction(x)
    muq = Fraction(mu)
    c = cov.evaluate(xq, muq)
    vv = var_tau.evaluate(xq, muq) * var_area.evaluate(xq, muq)
    return math.sqrt(float(c * c / vv))

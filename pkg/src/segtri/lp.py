"""Exact two-phase simplex over the rationals.

Small dense tableau solver used by the market decompositions. Every entry is a
``fractions.Fraction`` so results are exact; pivoting follows Bland's rule,
which both prevents cycling and makes the returned vertex deterministic.

All variables are nonnegative. Problems are given in the form::

    minimize (or maximize)  c . x
    subject to              A_eq x == b_eq
                            A_ub x <= b_ub
                            x >= 0
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple[Fraction, ...] | None = None
    objective: Fraction | None = None
    # Farkas vector over (eq rows, ub rows): y.A <= 0 columnwise, y_ub <= 0, y.b > 0.
    farkas: tuple[Fraction, ...] | None = None

    @property
    def success(self) -> bool:
        return self.status == OPTIMAL


def _frac_matrix(rows, ncols, name):
    out = []
    for r in rows:
        r = [Fraction(v) for v in r]
        if len(r) != ncols:
            raise ValueError(f"{name} row has {len(r)} entries, expected {ncols}")
        out.append(r)
    return out


def _pivot(T, d, basis, r, col):
    piv = T[r][col]
    row = [v / piv for v in T[r]]
    T[r] = row
    for i, other in enumerate(T):
        if i != r and other[col] != 0:
            f = other[col]
            T[i] = [a - f * b for a, b in zip(other, row)]
    if d[col] != 0:
        f = d[col]
        d[:] = [a - f * b for a, b in zip(d, row)]
    basis[r] = col


def _run(T, d, basis, allowed):
    """Bland-rule simplex on a canonical tableau. Returns False if unbounded.

    ``d`` holds reduced costs followed by minus the current objective value.
    """
    while True:
        col = next((j for j in allowed if d[j] < 0), None)
        if col is None:
            return True
        best = None
        for i, row in enumerate(T):
            if row[col] > 0:
                ratio = row[-1] / row[col]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return False
        _pivot(T, d, basis, best[1], col)


def _reduced_costs(T, basis, cost):
    d = list(cost) + [Fraction(0)]
    for i, b in enumerate(basis):
        cb = cost[b]
        if cb:
            d = [a - cb * t for a, t in zip(d, T[i])]
    return d


def solve_exact_lp(
    c: Sequence,
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    maximize: bool = False,
) -> LPResult:
    """Solve a small LP exactly.

    Returns an :class:`LPResult` with status ``"optimal"`` (exact vertex and
    objective), ``"infeasible"`` (with a Farkas certificate) or
    ``"unbounded"``. Raises ``ValueError`` on dimension mismatch.
    """
    c = [Fraction(v) for v in c]
    n = len(c)
    A_eq = _frac_matrix(A_eq, n, "A_eq")
    A_ub = _frac_matrix(A_ub, n, "A_ub")
    b_eq = [Fraction(v) for v in b_eq]
    b_ub = [Fraction(v) for v in b_ub]
    if len(b_eq) != len(A_eq) or len(b_ub) != len(A_ub):
        raise ValueError("constraint matrix and right-hand side lengths differ")

    m_eq, m_ub = len(A_eq), len(A_ub)
    m = m_eq + m_ub
    N = n + m_ub  # structural + slack columns
    ncols = N + m  # + one artificial per row

    T, signs = [], []
    for i in range(m):
        if i < m_eq:
            coeffs, rhs = A_eq[i] + [Fraction(0)] * m_ub, b_eq[i]
        else:
            coeffs = A_ub[i - m_eq] + [Fraction(int(j == i - m_eq)) for j in range(m_ub)]
            rhs = b_ub[i - m_eq]
        s = -1 if rhs < 0 else 1
        signs.append(s)
        art = [Fraction(int(j == i)) for j in range(m)]
        T.append([s * v for v in coeffs] + art + [s * rhs])
    basis = list(range(N, ncols))

    # phase 1: minimize the sum of artificials
    cost1 = [Fraction(0)] * N + [Fraction(1)] * m
    d = _reduced_costs(T, basis, cost1)
    _run(T, d, basis, range(ncols))
    if -d[-1] > 0:
        y = [(1 - d[N + i]) * signs[i] for i in range(m)]
        return LPResult(INFEASIBLE, farkas=tuple(y))

    # drive zero-level artificials out of the basis; drop redundant rows
    i = 0
    while i < len(T):
        if basis[i] >= N:
            col = next((j for j in range(N) if T[i][j] != 0), None)
            if col is None:
                del T[i], basis[i]
                continue
            _pivot(T, d, basis, i, col)
        i += 1

    sense = -1 if maximize else 1
    cost2 = [sense * v for v in c] + [Fraction(0)] * (ncols - n)
    d = _reduced_costs(T, basis, cost2)
    if not _run(T, d, basis, range(N)):
        return LPResult(UNBOUNDED)

    x = [Fraction(0)] * ncols
    for i, b in enumerate(basis):
        x[b] = T[i][-1]
    xs = tuple(x[:n])
    return LPResult(OPTIMAL, x=xs, objective=sum((ci * xi for ci, xi in zip(c, xs)), Fraction(0)))

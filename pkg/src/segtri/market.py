"""Valuations, markets, revenue, extremal markets and exact decompositions.

Indices are 0-based throughout: price index ``k`` means posting ``grid[k]``.
A subset of valuations is a sorted tuple of indices.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .errors import DecompositionError, ValidationError
from .lp import solve_exact_lp

DEFAULT_MAX_K = 12


def rational(value) -> Fraction:
    """Coerce ``value`` to an exact Fraction; floats are refused."""
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"exact rational expected, got {value!r}")
    if isinstance(value, str):
        try:
            q = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"malformed rational {value!r}") from exc
        return q
    return Fraction(value)


def max_k() -> int:
    """Subset-enumeration cap, overridable through ``SEGTRI_MAX_K``."""
    raw = os.environ.get("SEGTRI_MAX_K")
    return int(raw) if raw else DEFAULT_MAX_K


@dataclass(frozen=True)
class ValuationGrid:
    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(rational(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) < 2:
            raise ValidationError("need at least two valuations")
        if vals[0] <= 0:
            raise ValidationError("valuations must be strictly positive")
        if any(a >= b for a, b in zip(vals, vals[1:])):
            raise ValidationError("valuations must be strictly increasing")

    @property
    def K(self) -> int:
        return len(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, k):
        return self.values[k]

    def __iter__(self):
        return iter(self.values)


@dataclass(frozen=True, order=True)
class Market:
    """A probability vector over the valuation grid."""

    masses: tuple[Fraction, ...]

    def __post_init__(self):
        ms = tuple(rational(m) for m in self.masses)
        object.__setattr__(self, "masses", ms)
        if any(m < 0 for m in ms):
            raise ValidationError(f"negative mass in market {fmt(ms)}")
        if sum(ms) != 1:
            raise ValidationError(f"market masses sum to {sum(ms)}, not 1: {fmt(ms)}")

    def __len__(self):
        return len(self.masses)

    def __getitem__(self, j):
        return self.masses[j]

    def __iter__(self):
        return iter(self.masses)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(j for j, m in enumerate(self.masses) if m > 0)

    def __str__(self):
        return fmt(self.masses)


def fmt(masses: Iterable) -> str:
    return "(" + ", ".join(str(Fraction(m)) for m in masses) + ")"


def mix(terms: Iterable[tuple[Fraction, Sequence]]) -> tuple[Fraction, ...]:
    """Weighted sum of vectors, as a raw tuple (not normalized)."""
    acc = None
    for w, vec in terms:
        if acc is None:
            acc = [Fraction(0)] * len(vec)
        for j, v in enumerate(vec):
            acc[j] += w * v
    if acc is None:
        raise ValueError("empty mixture")
    return tuple(acc)


@dataclass(frozen=True)
class Instance:
    """Valuation grid plus an aggregate market with full support."""

    grid: ValuationGrid
    aggregate: Market

    def __post_init__(self):
        if len(self.aggregate) != self.grid.K:
            raise ValidationError("aggregate market length does not match the grid")
        if any(m <= 0 for m in self.aggregate):
            raise ValidationError("every aggregate mass must be strictly positive")

    @classmethod
    def from_values(cls, values, aggregate) -> "Instance":
        return cls(ValuationGrid(tuple(values)), Market(tuple(aggregate)))

    @property
    def K(self) -> int:
        return self.grid.K


def _check_market(grid: ValuationGrid, x: Market):
    if len(x) != grid.K:
        raise ValidationError(f"market has {len(x)} masses but grid has {grid.K} valuations")


def revenue(grid: ValuationGrid, x: Market, k: int) -> Fraction:
    """Expected revenue of posting ``grid[k]``: the price times the tail mass."""
    _check_market(grid, x)
    if not 0 <= k < grid.K:
        raise IndexError(f"price index {k} out of range for K={grid.K}")
    return grid[k] * sum(x.masses[k:], Fraction(0))


def optimal_price_set(grid: ValuationGrid, x: Market) -> tuple[int, ...]:
    _check_market(grid, x)
    revs = []
    tail = Fraction(0)
    for k in reversed(range(grid.K)):
        tail += x.masses[k]
        revs.append(grid[k] * tail)
    revs.reverse()
    best = max(revs)
    return tuple(k for k, r in enumerate(revs) if r == best)


def is_in_Xk(grid: ValuationGrid, x: Market, k: int) -> bool:
    return k in optimal_price_set(grid, x)


def consumer_surplus(grid: ValuationGrid, x: Market, k: int) -> Fraction:
    """Surplus left to buyers in ``x`` when ``grid[k]`` is posted."""
    return sum(((grid[j] - grid[k]) * x[j] for j in range(k, grid.K)), Fraction(0))


def total_surplus(grid: ValuationGrid, x: Market, k: int) -> Fraction:
    return sum((grid[j] * x[j] for j in range(k, grid.K)), Fraction(0))


def extremal_market(grid: ValuationGrid, S: Iterable[int]) -> Market:
    """Equal-revenue market supported on ``S``.

    Closed form: the tail mass at ``i`` in ``S`` is ``v_min(S) / v_i``.
    """
    S = tuple(sorted(set(S)))
    if not S:
        raise ValidationError("subset must be nonempty")
    if S[0] < 0 or S[-1] >= grid.K:
        raise IndexError(f"subset {S} out of range for K={grid.K}")
    return _extremal(grid, S)


@lru_cache(maxsize=4096)
def _extremal(grid: ValuationGrid, S: tuple[int, ...]) -> Market:
    tails = [grid[S[0]] / grid[i] for i in S] + [Fraction(0)]
    masses = [Fraction(0)] * grid.K
    for pos, i in enumerate(S):
        masses[i] = tails[pos] - tails[pos + 1]
    return Market(tuple(masses))


def subsets_between(K: int, lower: Iterable[int] = (), upper: Iterable[int] | None = None) -> list[tuple[int, ...]]:
    """All nonempty ``S`` with ``lower <= S <= upper``.

    Ordered lexicographically by membership vector (index 0 most significant,
    absent before present), so {0, 2} precedes {0, 1, 2}.
    """
    if K > max_k():
        raise ValidationError(f"K={K} exceeds the subset-enumeration cap {max_k()} (SEGTRI_MAX_K)")
    lower = set(lower)
    upper = set(range(K)) if upper is None else set(upper)
    choices = [((1,) if j in lower else (0, 1)) if j in upper else (0,) for j in range(K)]
    out = []
    for bits in product(*choices):
        S = tuple(j for j, b in enumerate(bits) if b)
        if S:
            out.append(S)
    return out


@dataclass(frozen=True)
class Decomposition:
    """Convex weights over extremal markets ``x^S``."""

    terms: tuple[tuple[tuple[int, ...], Fraction], ...]

    def __post_init__(self):
        if sum(w for _, w in self.terms) != 1:
            raise ValidationError("decomposition weights must sum to 1")

    @property
    def weights(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self.terms)

    def recombine(self, grid: ValuationGrid) -> Market:
        return Market(mix((w, extremal_market(grid, S)) for S, w in self.terms))


@lru_cache(maxsize=1024)
def decompose_in_Xk(grid: ValuationGrid, x: Market, k: int) -> Decomposition:
    """Nonnegative weights over ``{x^S : k in S}`` reproducing ``x``.

    Raises :class:`DecompositionError` when ``grid[k]`` is not optimal for ``x``.
    """
    _check_market(grid, x)
    cols = subsets_between(grid.K, lower=(k,))
    ext = [extremal_market(grid, S) for S in cols]
    A_eq = [[e[j] for e in ext] for j in range(grid.K)] + [[1] * len(cols)]
    b_eq = list(x.masses) + [1]
    res = solve_exact_lp([0] * len(cols), A_eq, b_eq)
    if not res.success:
        raise DecompositionError(f"market {x} is not in X_{k}; no decomposition exists")
    d = Decomposition(tuple((S, w) for S, w in zip(cols, res.x) if w > 0))
    assert d.recombine(grid) == x
    return d


def interior_decompose(grid: ValuationGrid, x: Market, P: Iterable[int]) -> Decomposition:
    """Strictly positive weights over every ``x^S`` with ``P <= S``.

    Maximizes the smallest weight exactly; that optimum is positive whenever
    ``P`` is the optimal price set of ``x``.
    """
    _check_market(grid, x)
    return _interior(grid, x, tuple(sorted(set(P))))


@lru_cache(maxsize=1024)
def _interior(grid, x, P):
    cols = subsets_between(grid.K, lower=P)
    ext = [extremal_market(grid, S) for S in cols]
    m = len(cols)
    # variables: alpha_S (m of them), then t; maximize t subject to t <= alpha_S
    A_eq = [[e[j] for e in ext] + [0] for j in range(grid.K)] + [[1] * m + [0]]
    b_eq = list(x.masses) + [1]
    A_ub = [[-int(i == s) for i in range(m)] + [1] for s in range(m)]
    res = solve_exact_lp([0] * m + [1], A_eq, b_eq, A_ub, [0] * m, maximize=True)
    if not res.success or res.objective <= 0:
        raise DecompositionError(f"market {x} is not in the relative interior for P={P}")
    d = Decomposition(tuple(zip(cols, res.x[:m])))
    assert d.recombine(grid) == x
    return d

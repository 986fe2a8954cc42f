"""Exact level-set analysis for games that are affine in every player's
strategy jointly.

A multilinear payoff map is jointly affine exactly when every pairwise
interaction vanishes: for any two players, any two strategies of each, any
payoff component, and any fixed choice of the remaining players, the cross
second difference of the stored payoffs is zero.  For such games the
payoff map on the reduced chart is matrix * r + offset, and its level sets
are translates of the matrix kernel, with dimension given by rank-nullity.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.optimize import linprog

from .games import GameSpec, _payoff_reduced, is_zero_sum
from .fibers import nullspace, numerical_rank

AFFINITY_TOL = 1e-9
LEVEL_SET_RESIDUAL = 1e-8


def is_jointly_affine(g: GameSpec, tol: float = AFFINITY_TOL) -> bool:
    """True iff no payoff component has any pairwise strategy interaction.

    Complete combinatorial check of every cross second difference over the
    tensor, so at desk scale the answer is a certificate, not a sample.
    """
    payoffs = g.payoffs
    if not np.all(np.isfinite(payoffs)):
        raise ValueError("affinity test needs a complete, finite payoff tensor")
    for p, q in combinations(range(g.n), 2):
        t = np.moveaxis(payoffs, (p, q), (0, 1))
        for a, a2 in combinations(range(g.m[p]), 2):
            for b, b2 in combinations(range(g.m[q]), 2):
                cross = t[a, b] - t[a, b2] - t[a2, b] + t[a2, b2]
                if np.abs(cross).max() > tol:
                    return False
    return True


@dataclass(frozen=True)
class AffineRepresentation:
    """The payoff map of a jointly-affine game as matrix * r + offset on the
    reduced chart.  With the zero-sum reduction the last (dependent) payoff
    component is dropped."""

    matrix: np.ndarray
    offset: np.ndarray
    zero_sum_reduced: bool

    @property
    def rank(self) -> int:
        return numerical_rank(self.matrix)[0]


@dataclass(frozen=True)
class AffineLevelSet:
    """One level set: an affine subset base + span(kernel_basis) of the chart."""

    base_point: np.ndarray
    kernel_basis: np.ndarray         # one orthonormal row per kernel direction
    dimension: int


def extract_affine(g: GameSpec, use_zero_sum_reduction: bool = False,
                   tol: float = AFFINITY_TOL) -> AffineRepresentation:
    """Exact affine representation of a jointly-affine game.

    The offset is the payoff at the chart origin and column j of the matrix
    is the payoff difference along the j-th chart direction; for an affine
    map these finite differences are the exact coefficients.
    """
    if not is_jointly_affine(g, tol):
        raise ValueError("not jointly affine: the payoff map has strategy interactions")
    if use_zero_sum_reduction and not is_zero_sum(g):
        raise ValueError("not zero-sum: cannot apply the zero-sum reduction")
    dim = g.reduced_dim
    origin = np.zeros(dim)
    offset = _payoff_reduced(g, origin)
    cols = []
    for j in range(dim):
        e = np.zeros(dim)
        e[j] = 1.0
        cols.append(_payoff_reduced(g, e) - offset)
    matrix = np.column_stack(cols) if cols else np.zeros((g.n, 0))
    if use_zero_sum_reduction:
        matrix = matrix[:-1]
        offset = offset[:-1]
    return AffineRepresentation(matrix=matrix, offset=offset,
                                zero_sum_reduced=use_zero_sum_reduction)


def _simplex_feasible(g: GameSpec, matrix: np.ndarray, rhs: np.ndarray) -> bool:
    """Whether matrix * r = rhs has a solution with embed(r) inside the
    simplex boxes.  Small LP feasibility problem: chart coordinates in
    [0, 1] and each implied last coordinate in [0, 1]."""
    dim = matrix.shape[1]
    a_ub = []
    b_ub = []
    pos = 0
    for mi in g.m:
        row = np.zeros(dim)
        row[pos:pos + mi - 1] = 1.0
        a_ub.append(row)            # implied last coordinate >= 0
        b_ub.append(1.0)
        pos += mi - 1
    res = linprog(c=np.zeros(dim), A_eq=matrix, b_eq=rhs,
                  A_ub=np.vstack(a_ub), b_ub=np.array(b_ub),
                  bounds=[(0.0, 1.0)] * dim, method="highs")
    return bool(res.success)


def affine_level_set(rep: AffineRepresentation, y,
                     g: GameSpec | None = None,
                     tau: float | None = None,
                     residual_tol: float = LEVEL_SET_RESIDUAL) -> AffineLevelSet | None:
    """The level set of an affine representation at payoff value y, or None
    when the level set is empty.

    The base point is the minimum-norm least-squares solution of
    matrix * r = y - offset; the set is declared empty when the residual
    exceeds ``residual_tol`` (y outside the affine image) or, when the game
    is supplied, when the solution set misses the strategy simplex.
    """
    y = np.atleast_1d(np.asarray(y, dtype=float))
    rows = rep.matrix.shape[0]
    if y.shape != (rows,):
        raise ValueError(f"payoff value has length {y.size}, expected {rows}")
    rhs = y - rep.offset
    base, *_ = np.linalg.lstsq(rep.matrix, rhs, rcond=tau)
    residual = np.abs(rep.matrix @ base - rhs).max() if rows else 0.0
    if residual > residual_tol:
        return None
    if g is not None and not _simplex_feasible(g, rep.matrix, rhs):
        return None
    basis = nullspace(rep.matrix, tau)
    return AffineLevelSet(base_point=base, kernel_basis=basis,
                          dimension=basis.shape[0])


def simplex_interval(g: GameSpec, base, direction,
                     tol: float = 1e-12) -> tuple[float, float] | None:
    """Parameter range t for which base + t * direction embeds into the
    simplex (all coordinates, implied ones included, inside [0, 1]).

    Intended for one-dimensional level sets, where it turns the kernel line
    into the segment actually contained in the strategy space.  Returns
    None when the line misses the simplex.
    """
    base = np.asarray(base, dtype=float)
    direction = np.asarray(direction, dtype=float)
    lo, hi = -np.inf, np.inf
    pos = 0
    constraints = []
    for mi in g.m:
        span = slice(pos, pos + mi - 1)
        for c0, c1 in zip(base[span], direction[span]):
            constraints.append((float(c0), float(c1)))
        constraints.append((1.0 - float(base[span].sum()),
                            -float(direction[span].sum())))
        pos += mi - 1
    for c0, c1 in constraints:
        if abs(c1) < tol:
            if c0 < -tol or c0 > 1.0 + tol:
                return None
            continue
        t0, t1 = (0.0 - c0) / c1, (1.0 - c0) / c1
        lo = max(lo, min(t0, t1))
        hi = min(hi, max(t0, t1))
    if lo > hi:
        return None
    return lo, hi

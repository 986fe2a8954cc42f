"""Independent oracles and corpus builders shared across the test suite.

The oracles here deliberately avoid the library's evaluation paths:
expected payoffs by literal loops over every pure profile, derivatives by
central finite differences through the public embed/evaluate surface,
affinity by explicit cross differences, and projections by grid search.
"""

import itertools

import numpy as np

import gamefibers as gf


def loop_expected_payoff(g, s, player):
    """Literal double loop: sum over every vertex of probability * payoff."""
    total = 0.0
    for idx in itertools.product(*(range(mi) for mi in g.m)):
        prob = 1.0
        for block, j in zip(s.blocks, idx):
            prob *= float(block[j])
        total += prob * float(g.payoffs[idx + (player,)])
    return total


def fd_jacobian(g, s, h=1e-5):
    """Central finite differences of the payoff map through embed_profile."""
    r0 = gf.reduce_profile(s)
    jac = np.zeros((g.n, r0.size))
    for j in range(r0.size):
        up = r0.copy()
        up[j] += h
        down = r0.copy()
        down[j] -= h
        jac[:, j] = (gf.total_payoff(g, gf.embed_profile(g, up))
                     - gf.total_payoff(g, gf.embed_profile(g, down))) / (2.0 * h)
    return jac


def loop_is_jointly_affine(g, tol):
    """Explicit cross-second-difference scan, written independently."""
    m = g.m
    for p in range(g.n):
        for q in range(p + 1, g.n):
            others = [axis for axis in range(g.n) if axis not in (p, q)]
            for rest in itertools.product(*(range(m[axis]) for axis in others)):
                def payoff_at(jp, jq, _rest=rest, _others=others, _p=p, _q=q):
                    idx = [0] * g.n
                    idx[_p] = jp
                    idx[_q] = jq
                    for axis, val in zip(_others, _rest):
                        idx[axis] = val
                    return g.payoffs[tuple(idx)]
                for a in range(m[p]):
                    for a2 in range(a + 1, m[p]):
                        for b in range(m[q]):
                            for b2 in range(b + 1, m[q]):
                                cross = (payoff_at(a, b) - payoff_at(a, b2)
                                         - payoff_at(a2, b) + payoff_at(a2, b2))
                                if np.abs(cross).max() > tol:
                                    return False
    return True


def grid_simplex_points(dim, steps):
    """All lattice points with coordinates i/steps summing to 1."""
    for cut in itertools.combinations(range(steps + dim - 1), dim - 1):
        counts = []
        prev = -1
        for c in cut:
            counts.append(c - prev - 1)
            prev = c
        counts.append(steps + dim - 2 - prev)
        yield np.array(counts, dtype=float) / steps


def grid_project(v, steps=120):
    """Brute-force nearest simplex lattice point to v."""
    v = np.asarray(v, dtype=float)
    best = None
    best_d = np.inf
    for point in grid_simplex_points(v.size, steps):
        d = np.sum((v - point) ** 2)
        if d < best_d:
            best, best_d = point, d
    return best


def interior_profile(g, rng, min_coord=1e-3):
    """Rejection-sampled comfortably-interior profile."""
    while True:
        s = gf.random_interior_profile(g, rng)
        if min(float(b.min()) for b in s.blocks) >= min_coord:
            return s


def corpus_shapes(count, seed, n_choices=(2, 3), m_choices=(2, 3, 4)):
    """Deterministic list of (n, m) shapes for seeded corpora."""
    rng = np.random.default_rng(seed)
    shapes = []
    for _ in range(count):
        n = int(rng.choice(n_choices))
        m = [int(rng.choice(m_choices)) for _ in range(n)]
        shapes.append((n, m))
    return shapes

"""Seeded generators of exact random instances for the property suites.

Everything returns Fractions built from small integers so the downstream
assertions stay exact and fast; generation is deterministic given the
`random.Random` instance passed in.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import ContractViolation
from .exactla import Matrix, Subspace
from .polycore import CoefficientMap, VForm


def rand_fraction(rng: random.Random, span: int = 3) -> Fraction:
    den = rng.choice((1, 1, 1, 2, 3))
    return Fraction(rng.randint(-span, span), den)


def rand_matrix(rng: random.Random, rows: int, cols: int, span: int = 3) -> Matrix:
    return Matrix([[rand_fraction(rng, span) for _ in range(cols)] for _ in range(rows)])


def rand_vector(rng: random.Random, n: int, span: int = 3) -> tuple:
    return tuple(rand_fraction(rng, span) for _ in range(n))


def rand_subspace(rng: random.Random, n: int, max_dim: int = None) -> Subspace:
    d = rng.randint(0, n if max_dim is None else min(n, max_dim))
    return Subspace.from_vectors(n, [rand_vector(rng, n) for _ in range(d)])


def rand_skew(rng: random.Random, n: int, span: int = 3) -> Matrix:
    m = rand_matrix(rng, n, n, span)
    return m - m.transpose()


def rand_vform(rng: random.Random, n: int, k: int, attempts: int = 200) -> VForm:
    """A random nondegenerate form; rejection-sampled.

    A single component on an odd-dimensional space is always degenerate, so
    callers should pass even n when k == 1.
    """
    for _ in range(attempts):
        form = VForm(n, tuple(rand_skew(rng, n) for _ in range(k)))
        if form.is_nondegenerate():
            return form
    raise ContractViolation(f"no nondegenerate form found for n={n}, k={k}")


def rand_dims(rng: random.Random, max_n: int = 8, max_k: int = 4) -> tuple:
    """Dimension pair (n, k) compatible with nondegeneracy (even n when k=1)."""
    k = rng.randint(1, max_k)
    if k == 1:
        n = 2 * rng.randint(1, max_n // 2)
    else:
        n = rng.randint(2, max_n)
    return n, k


def rand_surjection(rng: random.Random, rows: int, cols: int, attempts: int = 200) -> CoefficientMap:
    from .exactla import rank

    if rows > cols:
        raise ContractViolation("a surjection needs rows <= cols")
    for _ in range(attempts):
        m = rand_matrix(rng, rows, cols)
        if rank(m) == rows:
            return CoefficientMap(m)
    raise ContractViolation("no surjection found")


def rand_line(rng: random.Random, n: int) -> Subspace:
    while True:
        v = rand_vector(rng, n)
        if any(x != 0 for x in v):
            return Subspace.from_vectors(n, [v])


def rand_plane(rng: random.Random, n: int) -> Subspace:
    while True:
        s = Subspace.from_vectors(n, [rand_vector(rng, n), rand_vector(rng, n)])
        if s.dim == 2:
            return s

"""Lie algebras as coefficient systems, plus the SO(3) group-level machinery.

The exact half works over structure constants: centers, centralizers, the
bracket form (a vector-valued symplectic structure on a centerless algebra),
and reduction by a subspace. The numeric half implements the rotation group
with Rodrigues' formula and carries the two executable counterexamples: a
fixed-point-free loop of structure-preserving maps, and a moment image that
is a sphere rather than a convex set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ContractViolation, ValidationError
from .exactla import Matrix, Subspace, intersect, kernel
from .polycore import LinearReduction, VForm, linear_reduce, orthogonal

GROUP_TOLERANCE = 1e-9
ROTATION_TOLERANCE = 1e-12


class LieAlgebra:
    """A rational Lie algebra given by structure constants.

    components[k][i][j] = c^k_ij with [e_i, e_j] = sum_k c^k_ij e_k.
    Antisymmetry and the Jacobi identity are validated exactly on
    construction.
    """

    def __init__(self, dim: int, components: Sequence[Matrix], name: str = ""):
        comps = tuple(components)
        if len(comps) != dim:
            raise ValidationError("need one component matrix per basis element")
        for m in comps:
            if m.shape != (dim, dim):
                raise ValidationError("component shape must be dim x dim")
            if not m.is_skew():
                raise ValidationError("structure constants must be antisymmetric")
        self.dim = dim
        self.components = comps
        self.name = name
        self._check_jacobi()

    @classmethod
    def from_triples(cls, dim: int, triples: Sequence, name: str = "") -> "LieAlgebra":
        """Build from (i, j, k, c) entries meaning [e_i, e_j] has e_k-coefficient c.

        Indices are 1-based, matching the usual e_1, ..., e_n notation; the
        antisymmetric counterpart of each triple is filled in automatically.
        """
        grids = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        for entry in triples:
            if len(entry) != 4:
                raise ValidationError("structure triples must be (i, j, k, c)")
            i, j, k, c = entry
            if not (1 <= i <= dim and 1 <= j <= dim and 1 <= k <= dim):
                raise ValidationError(f"index out of range in triple {entry!r}")
            c = c if isinstance(c, Fraction) else Fraction(c)
            grids[k - 1][i - 1][j - 1] += c
            grids[k - 1][j - 1][i - 1] -= c
        return cls(dim, [Matrix(g) for g in grids], name=name)

    def _check_jacobi(self):
        n = self.dim
        basis = [tuple(Fraction(1) if t == s else Fraction(0) for t in range(n)) for s in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    acc = [Fraction(0)] * n
                    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                        inner = self.bracket(basis[a], basis[b])
                        outer = self.bracket(inner, basis[c])
                        acc = [x + y for x, y in zip(acc, outer)]
                    if any(x != 0 for x in acc):
                        raise ValidationError(
                            f"Jacobi identity fails on basis triple ({i+1},{j+1},{k+1})"
                        )

    def bracket(self, x: Sequence, y: Sequence) -> tuple:
        out = []
        for m in self.components:
            my = m.apply(y)
            out.append(sum((a * b for a, b in zip(x, my)), Fraction(0)))
        return tuple(out)

    def ad(self, x: Sequence) -> Matrix:
        """Matrix of ad_x: y -> [x, y]."""
        n = self.dim
        cols = []
        for j in range(n):
            e = [Fraction(0)] * n
            e[j] = Fraction(1)
            cols.append(self.bracket(x, e))
        return Matrix(list(zip(*cols)))


def center(g: LieAlgebra) -> Subspace:
    """Elements commuting with the whole algebra; exact."""
    n = g.dim
    stacked = None
    for i in range(n):
        e = [Fraction(0)] * n
        e[i] = Fraction(1)
        block = g.ad(e)
        stacked = block if stacked is None else stacked.vstack(block)
    return kernel(stacked)


def bracket_form(g: LieAlgebra) -> VForm:
    """The bracket as a g-valued symplectic structure (needs trivial center)."""
    if not center(g).is_zero():
        raise ContractViolation("bracket form requires a centerless algebra")
    return VForm(g.dim, g.components)


def centralizer(g: LieAlgebra, a: Subspace) -> Subspace:
    """{x : [a, x] = 0}; computed from ad, so it works with any center."""
    if a.ambient_dim != g.dim:
        raise ValidationError("subspace ambient dimension does not match the algebra")
    if a.dim == 0:
        return Subspace.full(g.dim)
    stacked = None
    for j in range(a.dim):
        block = g.ad(a.basis.col(j))
        stacked = block if stacked is None else stacked.vstack(block)
    return kernel(stacked)


def lie_reduce(g: LieAlgebra, a: Subspace) -> LinearReduction:
    """Reduction of the bracket form by a subspace, cross-checked against
    the directly computed centralizer quotient."""
    form = bracket_form(g)
    red = linear_reduce(form, a)
    cent = centralizer(g, a)
    if red.carrier.dim != cent.dim - intersect(a, cent).dim:
        raise AssertionError("reduction carrier disagrees with the centralizer quotient")
    return red


def orthogonal_is_centralizer(g: LieAlgebra, a: Subspace) -> bool:
    """Check the identity A-orthogonal == centralizer for a centerless algebra."""
    return orthogonal(bracket_form(g), a) == centralizer(g, a)


# Builtin algebras.

def so3() -> LieAlgebra:
    return LieAlgebra.from_triples(
        3, [(1, 2, 3, 1), (2, 3, 1, 1), (3, 1, 2, 1)], name="so3"
    )


def sl2() -> LieAlgebra:
    # basis (h, e, f): [h,e]=2e, [h,f]=-2f, [e,f]=h
    return LieAlgebra.from_triples(
        3, [(1, 2, 2, 2), (1, 3, 3, -2), (2, 3, 1, 1)], name="sl2"
    )


def heisenberg() -> LieAlgebra:
    return LieAlgebra.from_triples(3, [(1, 2, 3, 1)], name="heisenberg")


def abelian(n: int) -> LieAlgebra:
    return LieAlgebra(n, [Matrix.zeros(n, n) for _ in range(n)], name=f"abelian{n}")


def algebra_direct_sum(g: LieAlgebra, h: LieAlgebra) -> LieAlgebra:
    n, m = g.dim, h.dim
    comps = []
    for k in range(n):
        rows = [[Fraction(0)] * (n + m) for _ in range(n + m)]
        for i in range(n):
            for j in range(n):
                rows[i][j] = g.components[k][i, j]
        comps.append(Matrix(rows))
    for k in range(m):
        rows = [[Fraction(0)] * (n + m) for _ in range(n + m)]
        for i in range(m):
            for j in range(m):
                rows[n + i][n + j] = h.components[k][i, j]
        comps.append(Matrix(rows))
    return LieAlgebra(n + m, comps, name=f"{g.name}+{h.name}")


BUILTIN_ALGEBRAS = {
    "so3": so3,
    "sl2": sl2,
    "heisenberg": heisenberg,
}


# Numeric rotation-group machinery.

def hat(v: np.ndarray) -> np.ndarray:
    x, y, z = float(v[0]), float(v[1]), float(v[2])
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def unhat(m: np.ndarray) -> np.ndarray:
    s = 0.5 * (m - m.T)
    return np.array([s[2, 1], s[0, 2], s[1, 0]])


def so3_exp(v: np.ndarray) -> np.ndarray:
    """Rodrigues rotation exp(hat(v)), with a series fallback near zero."""
    v = np.asarray(v, dtype=float)
    theta = float(np.linalg.norm(v))
    k = hat(v)
    if theta < 1e-8:
        return np.eye(3) + k + 0.5 * (k @ k)
    a = math.sin(theta) / theta
    b = (1.0 - math.cos(theta)) / (theta * theta)
    return np.eye(3) + a * k + b * (k @ k)


def so3_log(r: np.ndarray) -> np.ndarray:
    """Inverse of so3_exp for rotations with angle strictly below pi."""
    c = (np.trace(r) - 1.0) / 2.0
    c = min(1.0, max(-1.0, c))
    theta = math.acos(c)
    if theta < 1e-8:
        return unhat(r)
    if theta > math.pi - 1e-6:
        raise ValidationError("logarithm near the cut locus is not supported")
    return theta / (2.0 * math.sin(theta)) * np.array(
        [r[2, 1] - r[1, 2], r[0, 2] - r[2, 0], r[1, 0] - r[0, 1]]
    )


@dataclass(frozen=True)
class MatrixGroupElement:
    """A numeric rotation matrix, validated against the group relations."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", m)
        if m.shape != (3, 3):
            raise ValidationError("group elements are 3x3 matrices")
        if np.linalg.norm(m.T @ m - np.eye(3)) > GROUP_TOLERANCE:
            raise ContractViolation("matrix is not orthogonal within tolerance")
        if abs(np.linalg.det(m) - 1.0) > GROUP_TOLERANCE:
            raise ContractViolation("matrix determinant is not 1 within tolerance")

    def inverse(self) -> "MatrixGroupElement":
        return MatrixGroupElement(self.matrix.T)

    def __mul__(self, other: "MatrixGroupElement") -> "MatrixGroupElement":
        return MatrixGroupElement(self.matrix @ other.matrix)


def adjoint(g_el: MatrixGroupElement, xi: np.ndarray) -> np.ndarray:
    """Ad_g xi, computed as g hat(xi) g^-1 re-coordinatized by unhat."""
    g = g_el.matrix
    return unhat(g @ hat(np.asarray(xi, dtype=float)) @ g.T)


def maurer_cartan_moment(g_el: MatrixGroupElement, xi: np.ndarray) -> np.ndarray:
    """Moment of the left regular action at g: Ad_{g^-1} xi."""
    return adjoint(g_el.inverse(), xi)


def haar_so3(rng: np.random.Generator) -> MatrixGroupElement:
    """Haar-distributed rotation via QR of a Gaussian matrix with sign fixing."""
    a = rng.standard_normal((3, 3))
    q, r = np.linalg.qr(a)
    q = q @ np.diag(np.sign(np.diag(r)))
    if np.linalg.det(q) < 0:
        q[:, 2] = -q[:, 2]
    return MatrixGroupElement(q)


@dataclass(frozen=True)
class ArnoldReport:
    samples: int
    fixed_points_found: int
    translation_distance: float


def arnold_counterexample(
    xi: np.ndarray, t: float, sample_count: int, seed: int = 0, tolerance_scale: float = 1.0
) -> ArnoldReport:
    """Count Haar-sampled fixed points of left translation by exp(t xi).

    The translation must differ from the identity; a fixed-point count of 0
    is the expected outcome for every non-identity translation.
    """
    xi = np.asarray(xi, dtype=float)
    u = so3_exp(t * xi)
    gap = float(np.linalg.norm(u - np.eye(3)))
    if gap <= GROUP_TOLERANCE * tolerance_scale:
        raise ContractViolation(
            "translation time lands on the identity; the check is vacuous"
        )
    rng = np.random.default_rng(seed)
    tol = 1e-9 * tolerance_scale
    found = 0
    for _ in range(sample_count):
        g = haar_so3(rng).matrix
        if np.linalg.norm(u @ g - g) < tol:
            found += 1
    return ArnoldReport(samples=sample_count, fixed_points_found=found, translation_distance=gap)


@dataclass(frozen=True)
class ConvexityReport:
    samples: int
    on_sphere: bool
    sphere_radius: float
    max_radius_error: float
    midpoint_norm: float
    midpoint_gap: float


def convexity_counterexample(
    xi: np.ndarray, samples: int, seed: int = 0, tolerance_scale: float = 1.0
) -> ConvexityReport:
    """Moment image of the left regular action: a sphere, hence not convex.

    Checks that every sampled image point has the norm of xi, then exhibits
    the sampled pair whose midpoint is deepest inside the ball.
    """
    xi = np.asarray(xi, dtype=float)
    radius = float(np.linalg.norm(xi))
    if radius == 0.0:
        raise ContractViolation("the zero direction has a trivial moment image")
    rng = np.random.default_rng(seed)
    images = np.empty((samples, 3))
    for s in range(samples):
        images[s] = maurer_cartan_moment(haar_so3(rng), xi)
    radius_err = float(np.max(np.abs(np.linalg.norm(images, axis=1) - radius)))
    on_sphere = radius_err <= 1e-9 * tolerance_scale
    # The midpoint norm is minimized by the most antipodal sampled pair,
    # i.e. the pair with the smallest inner product.
    grams = images @ images.T
    np.fill_diagonal(grams, np.inf)
    i, j = np.unravel_index(np.argmin(grams), grams.shape)
    midpoint = 0.5 * (images[i] + images[j])
    mid_norm = float(np.linalg.norm(midpoint))
    return ConvexityReport(
        samples=samples,
        on_sphere=on_sphere,
        sphere_radius=radius,
        max_radius_error=radius_err,
        midpoint_norm=mid_norm,
        midpoint_gap=radius - mid_norm,
    )


def equivariance_defect(
    h: MatrixGroupElement, g: MatrixGroupElement, xi: np.ndarray
) -> float:
    """|mu(hg)(xi) - Ad_{g^-1} mu(h)(xi)| for the left regular moment."""
    lhs = maurer_cartan_moment(h * g, xi)
    rhs = adjoint(g.inverse(), maurer_cartan_moment(h, xi))
    return float(np.linalg.norm(lhs - rhs))


def commutes_with_membership(
    g_el: MatrixGroupElement, generators: Sequence[np.ndarray], tol: float = GROUP_TOLERANCE
) -> bool:
    """Sampled membership predicate for the centralizer-type reduced space:
    g is in the level set iff it fixes every generator under Ad."""
    return all(
        float(np.linalg.norm(adjoint(g_el, xi) - np.asarray(xi, dtype=float))) <= tol
        for xi in generators
    )

"""Vector-valued symplectic linear algebra.

A form on Q^n with values in Q^k is stored as k exactly skew n x n component
matrices. The module provides the orthogonal of a subspace, the four-way
subspace classification, reduction to the quotient of the orthogonal, the
canonical model on U + Hom(U, V), the graph embedding into it, and
post-composition with coefficient maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ContractViolation, ValidationError
from .exactla import (
    Matrix,
    QuotientSpace,
    Subspace,
    contains,
    intersect,
    kernel,
    quotient,
    rank,
)


@dataclass(frozen=True)
class VForm:
    """Alternating bilinear form U x U -> V in coordinates.

    components[i] is the matrix of the i-th coordinate of the form, so
    evaluate(u, u')[i] = u^T components[i] u'. Degenerate forms are legal
    values (coefficient reduction produces them); nondegeneracy is a query,
    not an invariant.
    """

    dim_u: int
    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if len(comps) < 1:
            raise ValidationError("a form needs at least one component")
        for m in comps:
            if not isinstance(m, Matrix) or m.shape != (self.dim_u, self.dim_u):
                raise ValidationError("component shape must be dim_u x dim_u")
            if not m.is_skew():
                raise ValidationError("components must be exactly skew-symmetric")
        object.__setattr__(self, "components", comps)

    @property
    def dim_v(self) -> int:
        return len(self.components)

    def evaluate(self, u: Sequence, v: Sequence) -> tuple:
        return tuple(_bilinear(m, u, v) for m in self.components)

    def flat(self, u: Sequence) -> Matrix:
        """The contraction u -> omega(u, .) as a k x n matrix (rows u^T w_i)."""
        if len(u) != self.dim_u:
            raise ValidationError("vector length does not match dim_u")
        return Matrix([m.transpose().apply(u) for m in self.components])

    def degeneracy_kernel(self) -> Subspace:
        """Vectors killed by every component; zero iff the form is polysymplectic."""
        ker = Subspace.full(self.dim_u)
        for m in self.components:
            ker = intersect(ker, kernel(m))
        return ker

    def is_nondegenerate(self) -> bool:
        return self.degeneracy_kernel().is_zero()

    def restrict(self, section: Matrix) -> "VForm":
        """Form induced on the column span of section, in section coordinates."""
        st = section.transpose()
        return VForm(section.cols, tuple(st @ m @ section for m in self.components))


def _bilinear(m: Matrix, u: Sequence, v: Sequence) -> Fraction:
    mv = m.apply(v)
    return sum((a * b for a, b in zip(u, mv)), Fraction(0))


def flat(omega: VForm, u: Sequence) -> Matrix:
    return omega.flat(u)


def is_nondegenerate(omega: VForm) -> bool:
    return omega.is_nondegenerate()


def direct_sum(forms: Sequence[VForm]) -> VForm:
    """Concatenate the component lists of forms on the same underlying space."""
    if not forms:
        raise ValidationError("direct_sum of no forms")
    n = forms[0].dim_u
    comps = []
    for f in forms:
        if f.dim_u != n:
            raise ValidationError("direct_sum requires equal underlying dimensions")
        comps.extend(f.components)
    return VForm(n, tuple(comps))


def orthogonal(omega: VForm, a: Subspace) -> Subspace:
    """{v : omega(a, v) = 0 for all a in A}, canonical."""
    if a.ambient_dim != omega.dim_u:
        raise ValidationError("subspace ambient dimension does not match the form")
    if a.dim == 0:
        return Subspace.full(omega.dim_u)
    stacked = None
    for j in range(a.dim):
        block = omega.flat(a.basis.col(j))
        stacked = block if stacked is None else stacked.vstack(block)
    return kernel(stacked)


@dataclass(frozen=True)
class SubspaceClass:
    isotropic: bool
    coisotropic: bool
    lagrangian: bool
    polysymplectic: bool


def classify(omega: VForm, a: Subspace) -> SubspaceClass:
    """Classification flags from the containment relations between A and A-orthogonal."""
    orth = orthogonal(omega, a)
    iso = contains(orth, a)
    coiso = contains(a, orth)
    poly = intersect(a, orth).is_zero()
    return SubspaceClass(
        isotropic=iso,
        coisotropic=coiso,
        lagrangian=iso and coiso,
        polysymplectic=poly,
    )


@dataclass(frozen=True)
class LinearReduction:
    """Reduction of a form by a subspace A.

    carrier presents A-orthogonal over its intersection with A; reduced_form
    is the induced form on the section; kernel is the degeneracy kernel of the
    reduced form in section coordinates (the quotient image of the double
    orthogonal intersected with the orthogonal).
    """

    carrier: QuotientSpace
    reduced_form: VForm
    kernel: Subspace
    nondegenerate: bool


def linear_reduce(omega: VForm, a: Subspace) -> LinearReduction:
    if a.ambient_dim != omega.dim_u:
        raise ValidationError("subspace ambient dimension does not match the form")
    orth = orthogonal(omega, a)
    core = intersect(a, orth)
    carrier = quotient(orth, core)
    section = carrier.section

    # Well-definedness: the form must not see the quotiented directions.
    for m in omega.components:
        for jb in range(core.dim):
            b = core.basis.col(jb)
            for js in range(section.cols):
                if _bilinear(m, b, section.col(js)) != 0:
                    raise AssertionError("descent to the quotient failed")

    reduced = omega.restrict(section)
    ker = reduced.degeneracy_kernel()
    return LinearReduction(
        carrier=carrier,
        reduced_form=reduced,
        kernel=ker,
        nondegenerate=ker.is_zero(),
    )


def canonical_model(n: int, k: int) -> VForm:
    """The universal form on Q^(n + n*k) with coordinates (u, phi).

    phi_{ij} (the (i, j) entry of phi: U -> V) sits at position
    n + (i-1)*n + (j-1); the form is phi'(u) - phi(u').
    """
    if n < 1 or k < 1:
        raise ValidationError("canonical model needs n >= 1 and k >= 1")
    dim = n + n * k
    comps = []
    for c in range(k):
        rows = [[Fraction(0)] * dim for _ in range(dim)]
        for j in range(n):
            p = n + c * n + j
            rows[j][p] = Fraction(1)
            rows[p][j] = Fraction(-1)
        comps.append(Matrix(rows))
    return VForm(dim, tuple(comps))


def universal_embed(omega: VForm) -> Matrix:
    """Matrix of u -> u - (1/2) iota_u omega into the canonical model.

    Requires a nondegenerate input; the pullback of canonical_model(n, k)
    along the result reproduces omega exactly.
    """
    if not omega.is_nondegenerate():
        raise ContractViolation("universal embedding requires a nondegenerate form")
    n, k = omega.dim_u, omega.dim_v
    half = Fraction(1, 2)
    rows = [[Fraction(1) if m == j else Fraction(0) for m in range(n)] for j in range(n)]
    for c in range(k):
        w = omega.components[c]
        for j in range(n):
            rows.append([-half * w[m, j] for m in range(n)])
    return Matrix(rows)


def pullback(omega: VForm, linear_map: Matrix) -> VForm:
    """Pullback of omega along a linear map given by its matrix."""
    if linear_map.rows != omega.dim_u:
        raise ValidationError("map codomain does not match the form")
    return omega.restrict(linear_map)


@dataclass(frozen=True)
class CoefficientMap:
    """A linear map of coefficient spaces V -> V', stored as a k' x k matrix."""

    matrix: Matrix

    @property
    def source_dim(self) -> int:
        return self.matrix.cols

    @property
    def target_dim(self) -> int:
        return self.matrix.rows

    def is_surjective(self) -> bool:
        return rank(self.matrix) == self.matrix.rows

    def is_injective(self) -> bool:
        return rank(self.matrix) == self.matrix.cols


def apply_coefficient_map(f: CoefficientMap, omega: VForm) -> tuple:
    """Post-compose omega with f. Returns (candidate form, degeneracy kernel)."""
    if f.source_dim != omega.dim_v:
        raise ValidationError("coefficient map source does not match the form")
    if f.target_dim < 1:
        raise ValidationError("coefficient map target must be at least 1-dimensional")
    comps = []
    for i in range(f.target_dim):
        acc = Matrix.zeros(omega.dim_u, omega.dim_u)
        for j in range(omega.dim_v):
            c = f.matrix[i, j]
            if c != 0:
                acc = acc + omega.components[j].scale(c)
        comps.append(acc)
    candidate = VForm(omega.dim_u, tuple(comps))
    return candidate, candidate.degeneracy_kernel()


def check_reduction_candidate(omega: VForm, f: CoefficientMap) -> bool:
    """True iff the surjection f carries omega to a nondegenerate form."""
    if not f.is_surjective():
        raise ContractViolation("reduction candidates must be surjective")
    candidate, ker = apply_coefficient_map(f, omega)
    return ker.is_zero()

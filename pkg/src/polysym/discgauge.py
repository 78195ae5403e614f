"""Cochain calculus on small ordered-simplex complexes and the abelian gauge
reduction it supports: the cup form with values in 2-cochains modulo
coboundaries, the shift action of 0-cochains on 1-cochains, its moment
functional, and reduction to first cohomology with the pairing into second
cohomology.

Everything here is exact rational. Complexes allow identified faces (the
one-vertex torus, the quotient cube), so face maps are stored explicitly as
index tuples and validated against the simplicial identities; building from
plain vertex tuples is supported whenever face lookup is unambiguous.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional

from .errors import ValidationError
from .exactla import Matrix, QuotientSpace, Subspace, contains, intersect, kernel, quotient
from .polycore import VForm

MAX_DIMENSION = 3


class DeltaComplex:
    """An ordered-simplex complex of dimension at most 3.

    simplices[p] lists the p-simplices as vertex tuples (used for display and
    for face resolution when unambiguous); faces[p][s][i] is the index of the
    i-th face (the vertex-i deletion) of simplex s in degree p-1.
    """

    def __init__(
        self,
        simplices: Dict[int, List[tuple]],
        faces: Optional[Dict[int, List[tuple]]] = None,
        name: str = "",
    ):
        degrees = sorted(simplices)
        if degrees != list(range(len(degrees))):
            raise ValidationError("simplex degrees must be contiguous from 0")
        if not degrees:
            raise ValidationError("a complex needs at least degree 0")
        self.simplices = {p: [tuple(s) for s in simplices[p]] for p in degrees}
        for p in degrees:
            for s in self.simplices[p]:
                if len(s) != p + 1:
                    raise ValidationError(f"degree-{p} simplex {s} has wrong arity")
        self.dimension = max(p for p in degrees if self.simplices[p]) if any(
            self.simplices.values()
        ) else 0
        if self.dimension > MAX_DIMENSION:
            raise ValidationError(f"complex dimension exceeds {MAX_DIMENSION}")
        if not self.simplices[0]:
            raise ValidationError("a complex needs at least one vertex")
        self.name = name
        self.faces: Dict[int, List[tuple]] = {}
        given = faces or {}
        for p in degrees:
            if p == 0:
                continue
            if p in given and given[p] is not None:
                self.faces[p] = [tuple(f) for f in given[p]]
                if len(self.faces[p]) != len(self.simplices[p]):
                    raise ValidationError(f"face list length mismatch in degree {p}")
            else:
                self.faces[p] = self._derive_faces(p)
        self.explicit_faces = bool(given)
        self._validate()

    def _derive_faces(self, p: int) -> List[tuple]:
        lookup: Dict[tuple, int] = {}
        duplicated = set()
        for idx, s in enumerate(self.simplices[p - 1]):
            if s in lookup:
                duplicated.add(s)
            lookup[s] = idx
        out = []
        for s in self.simplices[p]:
            row = []
            for i in range(p + 1):
                face = s[:i] + s[i + 1 :]
                if face in duplicated:
                    raise ValidationError(
                        f"face {face} is ambiguous (identified simplices); "
                        "supply explicit face maps"
                    )
                if face not in lookup:
                    raise ValidationError(f"face {face} of {s} is missing from degree {p-1}")
                row.append(lookup[face])
            out.append(tuple(row))
        return out

    def _validate(self):
        for p, rows in self.faces.items():
            count_below = len(self.simplices[p - 1])
            for s, row in enumerate(rows):
                if len(row) != p + 1:
                    raise ValidationError(f"degree-{p} simplex {s} needs {p+1} faces")
                for f in row:
                    if not (0 <= f < count_below):
                        raise ValidationError(f"face index out of range in degree {p}")
        # simplicial identity: deleting vertices commutes in the expected order
        for p in self.faces:
            if p < 2:
                continue
            for s, row in enumerate(self.faces[p]):
                for j in range(p + 1):
                    for i in range(j):
                        left = self.faces[p - 1][row[j]][i]
                        right = self.faces[p - 1][row[i]][j - 1]
                        if left != right:
                            raise ValidationError(
                                f"face maps violate the simplicial identity at degree {p}, "
                                f"simplex {s}, pair ({i},{j})"
                            )

    def count(self, p: int) -> int:
        return len(self.simplices.get(p, []))

    @property
    def counts(self) -> tuple:
        return tuple(self.count(p) for p in range(self.dimension + 1))

    def coboundary_matrix(self, p: int) -> Matrix:
        """Matrix of d: C^p -> C^(p+1); the zero-row matrix above top degree."""
        n_from = self.count(p)
        n_to = self.count(p + 1)
        if n_to == 0:
            return Matrix.zeros(0, n_from)
        rows = [[Fraction(0)] * n_from for _ in range(n_to)]
        for s, frow in enumerate(self.faces[p + 1]):
            for i, f in enumerate(frow):
                rows[s][f] += Fraction(-1) ** i
        return Matrix(rows)

    def front_face(self, degree: int, index: int, p: int) -> int:
        """Index of the front p-face (iterated last-vertex deletion)."""
        cur = index
        for dim in range(degree, p, -1):
            cur = self.faces[dim][cur][dim]
        return cur

    def back_face(self, degree: int, index: int, q: int) -> int:
        """Index of the back q-face (iterated first-vertex deletion)."""
        cur = index
        for dim in range(degree, q, -1):
            cur = self.faces[dim][cur][0]
        return cur


@dataclass(frozen=True)
class Cochain:
    complex: DeltaComplex
    degree: int
    values: tuple

    def __post_init__(self):
        vals = tuple(v if isinstance(v, Fraction) else Fraction(v) for v in self.values)
        if len(vals) != self.complex.count(self.degree):
            raise ValidationError(
                f"degree-{self.degree} cochain needs {self.complex.count(self.degree)} values"
            )
        object.__setattr__(self, "values", vals)

    @staticmethod
    def zero(complex: DeltaComplex, degree: int) -> "Cochain":
        return Cochain(complex, degree, (Fraction(0),) * complex.count(degree))

    @staticmethod
    def basis(complex: DeltaComplex, degree: int, index: int) -> "Cochain":
        vals = [Fraction(0)] * complex.count(degree)
        vals[index] = Fraction(1)
        return Cochain(complex, degree, tuple(vals))

    def __add__(self, other: "Cochain") -> "Cochain":
        if self.complex is not other.complex or self.degree != other.degree:
            raise ValidationError("cochain mismatch in addition")
        return Cochain(self.complex, self.degree, tuple(a + b for a, b in zip(self.values, other.values)))

    def scale(self, c) -> "Cochain":
        c = c if isinstance(c, Fraction) else Fraction(c)
        return Cochain(self.complex, self.degree, tuple(c * v for v in self.values))

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)


def d(c: Cochain) -> Cochain:
    """Coboundary; rejected at top degree (use the gauge operations instead,
    they treat the missing next degree as the zero space)."""
    if c.degree >= c.complex.dimension:
        raise ValidationError("coboundary at top degree")
    return _d_extended(c)


def _d_extended(c: Cochain) -> Cochain:
    mat = c.complex.coboundary_matrix(c.degree)
    return Cochain(c.complex, c.degree + 1, mat.apply(c.values))


def cup(a: Cochain, b: Cochain) -> Cochain:
    """Front-face/back-face product; Leibniz-exact against the coboundary."""
    if a.complex is not b.complex:
        raise ValidationError("cup arguments live on different complexes")
    p, q = a.degree, b.degree
    if p + q > a.complex.dimension:
        raise ValidationError("cup degree exceeds the complex dimension")
    return _cup_extended(a, b)


def _cup_extended(a: Cochain, b: Cochain) -> Cochain:
    cx = a.complex
    p, q = a.degree, b.degree
    deg = p + q
    if cx.count(deg) == 0:
        return Cochain(cx, deg, ())
    vals = []
    for s in range(cx.count(deg)):
        front = cx.front_face(deg, s, p)
        back = cx.back_face(deg, s, q)
        vals.append(a.values[front] * b.values[back])
    return Cochain(cx, deg, tuple(vals))


@dataclass(frozen=True)
class CohomologyPresentation:
    """Cocycles, coboundaries, and a deterministic harmonic section in one degree."""

    degree: int
    cocycles: Subspace
    coboundaries: Subspace
    presentation: QuotientSpace

    @property
    def harmonic_section(self) -> Matrix:
        return self.presentation.section

    @property
    def betti(self) -> int:
        return self.cocycles.dim - self.coboundaries.dim

    def class_coordinates(self, c: Cochain) -> tuple:
        """Coordinates of the class of a cocycle in the harmonic section."""
        return self.presentation.project(c.values)


def cohomology(cx: DeltaComplex, p: int) -> CohomologyPresentation:
    if not (0 <= p <= cx.dimension):
        raise ValidationError("cohomology degree out of range")
    z = kernel(cx.coboundary_matrix(p))
    if p == 0:
        b = Subspace.zero(cx.count(0))
    else:
        b = Subspace.from_matrix_columns(cx.coboundary_matrix(p - 1))
    return CohomologyPresentation(
        degree=p, cocycles=z, coboundaries=b, presentation=quotient(z, b)
    )


class CochainQuotient:
    """C^p modulo coboundaries, with a fixed deterministic complement.

    The canonical representative of a coset is its image under projection
    along the chosen complement of the coboundary space.
    """

    def __init__(self, cx: DeltaComplex, degree: int = 2):
        self.complex = cx
        self.degree = degree
        n = cx.count(degree)
        if degree == 0:
            bound = Subspace.zero(n)
        else:
            bound = Subspace.from_matrix_columns(cx.coboundary_matrix(degree - 1))
        self.coboundaries = bound
        self.presentation = quotient(Subspace.full(n), bound)

    @property
    def dim(self) -> int:
        return self.presentation.dim

    def coords(self, c: Cochain) -> tuple:
        return self.presentation.project(c.values)

    def coset(self, c: Cochain) -> "Coset":
        coords = self.coords(c)
        rep = Cochain(self.complex, self.degree, self.presentation.lift(coords))
        return Coset(quotient_space=self, coords=coords, representative=rep)

    def is_coboundary(self, c: Cochain) -> bool:
        return all(x == 0 for x in self.coords(c))


@dataclass(frozen=True)
class Coset:
    quotient_space: CochainQuotient
    coords: tuple
    representative: Cochain

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coords)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Coset)
            and self.quotient_space is other.quotient_space
            and self.coords == other.coords
        )


def omega_disc(cx: DeltaComplex, alpha: Cochain, beta: Cochain, two_quotient: CochainQuotient = None) -> Coset:
    """Value of the cup form on two 1-cochains: the coset of their product in
    C^2 modulo coboundaries, as its canonical representative."""
    if alpha.degree != 1 or beta.degree != 1:
        raise ValidationError("the cup form takes two 1-cochains")
    q = two_quotient if two_quotient is not None else CochainQuotient(cx, 2)
    return q.coset(_cup_extended(alpha, beta))


def omega_kernel(cx: DeltaComplex) -> Subspace:
    """Degeneracy kernel of the cup form on C^1 (measured, never assumed zero)."""
    n1 = cx.count(1)
    q = CochainQuotient(cx, 2)
    if q.dim == 0 or n1 == 0:
        return Subspace.full(n1)
    cols = []
    for m in range(n1):
        em = Cochain.basis(cx, 1, m)
        col = []
        for b in range(n1):
            eb = Cochain.basis(cx, 1, b)
            col.extend(q.coords(_cup_extended(em, eb)))
        cols.append(col)
    mat = Matrix(list(zip(*cols)))
    return kernel(mat)


@dataclass(frozen=True)
class GaugeMoment:
    """The moment functional of a 1-cochain: 0-cochains to cosets in C^2/B^2.

    matrix columns are the section coordinates of (dA cup f_j) over the basis
    0-cochains f_j.
    """

    complex: DeltaComplex
    connection: Cochain
    quotient_space: CochainQuotient
    matrix: Matrix

    def evaluate(self, f: Cochain) -> Coset:
        if f.degree != 0:
            raise ValidationError("the moment functional takes 0-cochains")
        coords = self.matrix.apply(f.values)
        rep = Cochain(self.complex, 2, self.quotient_space.presentation.lift(coords))
        return Coset(quotient_space=self.quotient_space, coords=tuple(coords), representative=rep)

    def is_zero(self) -> bool:
        return self.matrix.is_zero()


def gauge_moment(cx: DeltaComplex, a: Cochain) -> GaugeMoment:
    if a.degree != 1:
        raise ValidationError("the gauge moment takes a 1-cochain")
    q = CochainQuotient(cx, 2)
    da = _d_extended(a)
    cols = []
    for j in range(cx.count(0)):
        fj = Cochain.basis(cx, 0, j)
        cols.append(list(q.coords(_cup_extended(da, fj))))
    mat = Matrix(list(zip(*cols))) if cols and q.dim else Matrix.zeros(q.dim, cx.count(0))
    return GaugeMoment(complex=cx, connection=a, quotient_space=q, matrix=mat)


def check_gauge_moment_identity(cx: DeltaComplex) -> bool:
    """Exact linear-map equality: alpha -> coset(d alpha cup f) equals
    alpha -> coset(alpha cup d f) for every basis 0-cochain f."""
    q = CochainQuotient(cx, 2)
    n1 = cx.count(1)
    for j in range(cx.count(0)):
        fj = Cochain.basis(cx, 0, j)
        dfj = _d_extended(fj) if cx.dimension >= 1 else None
        for m in range(n1):
            alpha = Cochain.basis(cx, 1, m)
            lhs = q.coords(_cup_extended(_d_extended(alpha), fj))
            rhs = q.coords(_cup_extended(alpha, dfj))
            if lhs != rhs:
                return False
    return True


@dataclass(frozen=True)
class MomentZeroReport:
    zero_set: Subspace
    cocycles: Subspace
    equals_cocycles: bool
    contains_cocycles: bool


def moment_zero_set(cx: DeltaComplex) -> MomentZeroReport:
    """{A : the moment functional of A vanishes}, with its relation to the
    closed 1-cochains reported rather than assumed."""
    n1 = cx.count(1)
    q = CochainQuotient(cx, 2)
    z1 = kernel(cx.coboundary_matrix(1))
    if q.dim == 0 or cx.count(0) == 0 or n1 == 0:
        zero = Subspace.full(n1)
    else:
        cols = []
        for m in range(n1):
            em = Cochain.basis(cx, 1, m)
            dem = _d_extended(em)
            col = []
            for j in range(cx.count(0)):
                fj = Cochain.basis(cx, 0, j)
                col.extend(q.coords(_cup_extended(dem, fj)))
            cols.append(col)
        zero = kernel(Matrix(list(zip(*cols))))
    return MomentZeroReport(
        zero_set=zero,
        cocycles=z1,
        equals_cocycles=zero == z1,
        contains_cocycles=contains(zero, z1),
    )


@dataclass(frozen=True)
class GaugeReduction:
    """First cohomology as the reduced space, with the cup pairing into the
    second-cohomology section."""

    carrier: CohomologyPresentation
    target: CohomologyPresentation
    pairing: tuple  # matrices, one per second-cohomology coordinate

    @property
    def pairing_form(self) -> Optional[VForm]:
        if len(self.pairing) == 0:
            return None
        return VForm(self.carrier.betti, self.pairing)

    def pairing_kernel(self) -> Subspace:
        ker = Subspace.full(self.carrier.betti)
        for m in self.pairing:
            ker = intersect(ker, kernel(m))
        return ker


def reduce_gauge(cx: DeltaComplex) -> GaugeReduction:
    carrier = cohomology(cx, 1)
    if cx.dimension >= 2:
        target = cohomology(cx, 2)
    else:
        target = CohomologyPresentation(
            degree=2,
            cocycles=Subspace.zero(0),
            coboundaries=Subspace.zero(0),
            presentation=quotient(Subspace.zero(0), Subspace.zero(0)),
        )
    b1 = carrier.betti
    b2 = target.betti
    reps = [carrier.harmonic_section.col(j) for j in range(b1)]
    rep_cochains = [Cochain(cx, 1, r) for r in reps]

    # Gauge invariance of the pairing: shifting a representative by a
    # coboundary moves the product by a coboundary only.
    q2 = CochainQuotient(cx, 2)
    for j in range(cx.count(0)):
        dgamma = _d_extended(Cochain.basis(cx, 0, j)) if cx.dimension >= 1 else None
        if dgamma is None:
            continue
        for h in rep_cochains:
            if not q2.is_coboundary(_cup_extended(dgamma, h)):
                raise AssertionError("pairing is not gauge invariant")

    grids = [[[Fraction(0)] * b1 for _ in range(b1)] for _ in range(b2)]
    for ia, ha in enumerate(rep_cochains):
        for ib, hb in enumerate(rep_cochains):
            product = _cup_extended(ha, hb)
            coords = target.class_coordinates(product)
            for c in range(b2):
                grids[c][ia][ib] = coords[c]
    pairing = tuple(Matrix(g) for g in grids)
    return GaugeReduction(carrier=carrier, target=target, pairing=pairing)


@dataclass(frozen=True)
class LagrangianReport:
    h2_trivial: bool
    z1_is_lagrangian: Optional[bool]
    z1_dim: int
    orthogonal_dim: Optional[int]


def lagrangian_check(cx: DeltaComplex) -> LagrangianReport:
    """When second cohomology vanishes, compare the cup-orthogonal of the
    closed 1-cochains with the closed 1-cochains themselves."""
    h2 = cohomology(cx, 2).betti if cx.dimension >= 2 else 0
    z1 = kernel(cx.coboundary_matrix(1))
    if h2 != 0:
        return LagrangianReport(h2_trivial=False, z1_is_lagrangian=None, z1_dim=z1.dim, orthogonal_dim=None)
    n1 = cx.count(1)
    q = CochainQuotient(cx, 2)
    if q.dim == 0 or z1.dim == 0:
        orth = Subspace.full(n1)
    else:
        cols = []
        for m in range(n1):
            beta = Cochain.basis(cx, 1, m)
            col = []
            for a in range(z1.dim):
                za = Cochain(cx, 1, z1.basis.col(a))
                col.extend(q.coords(_cup_extended(za, beta)))
            cols.append(col)
        orth = kernel(Matrix(list(zip(*cols))))
    return LagrangianReport(
        h2_trivial=True,
        z1_is_lagrangian=orth == z1,
        z1_dim=z1.dim,
        orthogonal_dim=orth.dim,
    )


# Builtin complexes.

def interval_complex() -> DeltaComplex:
    return DeltaComplex({0: [(0,), (1,)], 1: [(0, 1)]}, name="interval")


def sphere_complex(dim: int) -> DeltaComplex:
    """Boundary of the (dim+1)-simplex."""
    if dim not in (2, 3):
        raise ValidationError("sphere builtin supports dimensions 2 and 3")
    n = dim + 2  # vertex count
    simplices = {
        p: [tuple(c) for c in itertools.combinations(range(n), p + 1)]
        for p in range(dim + 1)
    }
    return DeltaComplex(simplices, name=f"sphere{dim}")


def torus_complex(dim: int) -> DeltaComplex:
    """One-vertex quotient torus from the standard triangulated cube.

    Cells are chains of 0/1 increment vectors with pairwise disjoint
    supports, translated to the origin; vertex deletion maps to chain
    shortening or merging of adjacent increments.
    """
    if dim not in (2, 3):
        raise ValidationError("torus builtin supports dimensions 2 and 3")
    increments = [
        tuple(bits)
        for bits in itertools.product((0, 1), repeat=dim)
        if any(bits)
    ]

    def disjoint(u, v):
        return all(not (a and b) for a, b in zip(u, v))

    chains: Dict[int, List[tuple]] = {0: [()]}
    for p in range(1, dim + 1):
        out = []
        for prev in chains[p - 1]:
            for u in increments:
                if all(disjoint(u, w) for w in prev):
                    out.append(prev + (u,))
        chains[p] = sorted(out)

    index = {p: {c: i for i, c in enumerate(chains[p])} for p in chains}
    faces: Dict[int, List[tuple]] = {}
    for p in range(1, dim + 1):
        rows = []
        for chain in chains[p]:
            row = []
            for i in range(p + 1):
                if i == 0:
                    face = chain[1:]
                elif i == p:
                    face = chain[:-1]
                else:
                    merged = tuple(a + b for a, b in zip(chain[i - 1], chain[i]))
                    face = chain[: i - 1] + (merged,) + chain[i + 1 :]
                row.append(index[p - 1][face])
            rows.append(tuple(row))
        faces[p] = rows

    simplices = {p: [(0,) * (p + 1) for _ in chains[p]] for p in chains}
    return DeltaComplex(simplices, faces=faces, name=f"torus{dim}")


BUILTIN_COMPLEXES = {
    "interval": interval_complex,
    "sphere2": lambda: sphere_complex(2),
    "sphere3": lambda: sphere_complex(3),
    "torus2": lambda: torus_complex(2),
    "torus3": lambda: torus_complex(3),
}

"""Exact rational linear algebra: matrices, kernels, the subspace lattice,
quotients with deterministic sections, and annihilators.

Scalars are `fractions.Fraction` throughout, so every identity in this module
is an exact set equality; there are no tolerances here. Subspaces are kept in
a canonical form (reduced column echelon, pivots normalized to 1, pivot rows
strictly increasing) so that equality of subspaces is equality of their
stored bases.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import ValidationError

Scalar = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _as_scalar(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise ValidationError(f"not an exact scalar: {x!r}")


class Matrix:
    """Immutable exact matrix with row-major entries.

    Zero-row and zero-column shapes are legal; they show up constantly as
    bases of trivial subspaces.
    """

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, entries: Sequence[Sequence]):
        data = tuple(tuple(_as_scalar(x) for x in row) for row in entries)
        rows = len(data)
        cols = len(data[0]) if rows else 0
        for row in data:
            if len(row) != cols:
                raise ValidationError("ragged matrix literal")
        self.rows = rows
        self.cols = cols
        self._data = data

    @classmethod
    def _make(cls, rows: int, cols: int, data: tuple) -> "Matrix":
        m = object.__new__(cls)
        m.rows, m.cols = rows, cols
        m._data = data
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls._make(
            rows, cols, tuple(tuple(_ZERO for _ in range(cols)) for _ in range(rows))
        )

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def column(cls, entries: Sequence) -> "Matrix":
        return cls([[x] for x in entries])

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def col(self, j: int) -> tuple:
        return tuple(self._data[i][j] for i in range(self.rows))

    def columns(self) -> list:
        return [self.col(j) for j in range(self.cols)]

    @property
    def entries(self) -> tuple:
        return self._data

    def transpose(self) -> "Matrix":
        return Matrix._make(
            self.cols,
            self.rows,
            tuple(
                tuple(self._data[i][j] for i in range(self.rows)) for j in range(self.cols)
            ),
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValidationError(f"shape mismatch: {self.shape} @ {other.shape}")
        ot = other.transpose()._data
        return Matrix._make(
            self.rows,
            other.cols,
            tuple(
                tuple(sum((a * b for a, b in zip(row, col)), _ZERO) for col in ot)
                for row in self._data
            ),
        )

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValidationError("shape mismatch in addition")
        return Matrix._make(
            self.rows,
            self.cols,
            tuple(
                tuple(a + b for a, b in zip(r1, r2))
                for r1, r2 in zip(self._data, other._data)
            ),
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        return Matrix._make(
            self.rows, self.cols, tuple(tuple(-a for a in row) for row in self._data)
        )

    def scale(self, c) -> "Matrix":
        c = _as_scalar(c)
        return Matrix._make(
            self.rows, self.cols, tuple(tuple(c * a for a in row) for row in self._data)
        )

    def apply(self, vec: Sequence) -> tuple:
        """Matrix-vector product, returning a plain tuple of Fractions."""
        v = [_as_scalar(x) for x in vec]
        if len(v) != self.cols:
            raise ValidationError("vector length does not match column count")
        return tuple(sum((a * b for a, b in zip(row, v)), _ZERO) for row in self._data)

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ValidationError("row mismatch in hstack")
        return Matrix._make(
            self.rows,
            self.cols + other.cols,
            tuple(r1 + r2 for r1, r2 in zip(self._data, other._data)),
        )

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise ValidationError("column mismatch in vstack")
        return Matrix._make(self.rows + other.rows, self.cols, self._data + other._data)

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self._data for x in row)

    def is_skew(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(
            self._data[i][j] == -self._data[j][i]
            for i in range(self.rows)
            for j in range(i, self.cols)
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self._data == other._data and self.shape == other.shape

    def __hash__(self):
        return hash((self.shape, self._data))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in row) for row in self._data)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"


def rref(m: Matrix) -> tuple:
    """Reduced row echelon form of m. Returns (R, pivot_columns)."""
    data = [list(row) for row in m.entries]
    rows, cols = m.rows, m.cols
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot_row = next((i for i in range(r, rows) if data[i][c] != 0), None)
        if pivot_row is None:
            continue
        data[r], data[pivot_row] = data[pivot_row], data[r]
        inv = data[r][c]
        data[r] = [x / inv for x in data[r]]
        for i in range(rows):
            if i != r and data[i][c] != 0:
                f = data[i][c]
                data[i] = [a - f * b for a, b in zip(data[i], data[r])]
        pivots.append(c)
        r += 1
    return Matrix(data) if rows else Matrix.zeros(0, cols), tuple(pivots)


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def solve(a: Matrix, b: Sequence):
    """Solve a @ x = b exactly. Returns a tuple, or None when inconsistent.

    When the solution is not unique the free variables are set to zero, so the
    output is still deterministic.
    """
    bvec = [_as_scalar(x) for x in b]
    if len(bvec) != a.rows:
        raise ValidationError("right-hand side length mismatch")
    aug = a.hstack(Matrix.column(bvec))
    red, pivots = rref(aug)
    if a.cols in pivots:
        return None
    x = [_ZERO] * a.cols
    for r, c in enumerate(pivots):
        x[c] = red[r, a.cols]
    return tuple(x)


def inverse(m: Matrix) -> Matrix:
    """Inverse of a square invertible matrix, via elimination on [m | I]."""
    if m.rows != m.cols:
        raise ValidationError("only square matrices invert")
    red, pivots = rref(m.hstack(Matrix.identity(m.rows)))
    if len(pivots) != m.rows or any(p >= m.rows for p in pivots):
        raise ValidationError("matrix is singular")
    return Matrix([red.row(i)[m.rows :] for i in range(m.rows)])


def kernel(m: Matrix) -> "Subspace":
    """Kernel {x : m x = 0} in canonical form."""
    red, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    vectors = []
    for fc in free:
        v = [_ZERO] * m.cols
        v[fc] = _ONE
        for r, pc in enumerate(pivots):
            v[pc] = -red[r, fc]
        vectors.append(v)
    return Subspace.from_vectors(m.cols, vectors)


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of Q^n in canonical reduced-column-echelon form.

    The basis matrix is n x d; its columns have strictly increasing pivot
    rows, each pivot entry is 1, and the pivot row of each column is zero in
    all other columns. Two subspaces are equal iff their fields are equal.
    """

    ambient_dim: int
    basis: Matrix

    def __post_init__(self):
        if self.basis.rows != self.ambient_dim:
            raise ValidationError("basis rows must equal the ambient dimension")

    @staticmethod
    def from_vectors(ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        """Canonical subspace spanned by the given vectors (possibly none)."""
        vecs = [tuple(_as_scalar(x) for x in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise ValidationError("vector length does not match ambient dimension")
        if not vecs:
            return Subspace(ambient_dim, Matrix.zeros(ambient_dim, 0))
        red, pivots = rref(Matrix(vecs))
        basis_rows = [red.row(r) for r in range(len(pivots))]
        if not basis_rows:
            return Subspace(ambient_dim, Matrix.zeros(ambient_dim, 0))
        return Subspace(ambient_dim, Matrix(basis_rows).transpose())

    @staticmethod
    def from_matrix_columns(m: Matrix) -> "Subspace":
        return Subspace.from_vectors(m.rows, [m.col(j) for j in range(m.cols)])

    @staticmethod
    def zero(n: int) -> "Subspace":
        return Subspace.from_vectors(n, [])

    @staticmethod
    def full(n: int) -> "Subspace":
        return Subspace(n, Matrix.identity(n))

    @property
    def dim(self) -> int:
        return self.basis.cols

    def is_zero(self) -> bool:
        return self.dim == 0

    def contains_vector(self, v: Sequence) -> bool:
        return solve(self.basis, v) is not None


def sum_(a: Subspace, b: Subspace) -> Subspace:
    """Subspace sum A + B."""
    _check_same_ambient(a, b)
    return Subspace.from_vectors(
        a.ambient_dim, [a.basis.col(j) for j in range(a.dim)] + [b.basis.col(j) for j in range(b.dim)]
    )


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Subspace intersection, via the kernel of the stacked system [A | -B]."""
    _check_same_ambient(a, b)
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim)
    stacked = a.basis.hstack(b.basis.scale(-1))
    combos = kernel(stacked)
    vectors = []
    for j in range(combos.dim):
        coeffs = combos.basis.col(j)[: a.dim]
        vectors.append(a.basis.apply(coeffs))
    return Subspace.from_vectors(a.ambient_dim, vectors)


def contains(a: Subspace, b: Subspace) -> bool:
    """True iff b is a subspace of a."""
    _check_same_ambient(a, b)
    return all(a.contains_vector(b.basis.col(j)) for j in range(b.dim))


def _check_same_ambient(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise ValidationError(
            f"ambient dimension mismatch: {a.ambient_dim} vs {b.ambient_dim}"
        )


@dataclass(frozen=True)
class QuotientSpace:
    """ambient/sub presented by an explicit section of coset representatives.

    The section columns are chosen greedily from the ambient canonical basis
    in index order, so identical inputs always produce the identical section.
    """

    ambient: Subspace
    sub: Subspace
    section: Matrix

    @property
    def dim(self) -> int:
        return self.section.cols

    @cached_property
    def _full_space_projector(self):
        # When ambient is the whole space, [section | sub] is square and
        # invertible; caching its inverse turns projections into matvecs.
        if self.ambient.dim != self.ambient.ambient_dim:
            return None
        system = self.section.hstack(self.sub.basis)
        if system.rows != system.cols:
            return None
        return inverse(system)

    def project(self, v: Sequence) -> tuple:
        """Section coordinates of the coset of v (v must lie in ambient)."""
        if self.section.cols == 0 and self.sub.dim == 0:
            if any(_as_scalar(x) != 0 for x in v):
                raise ValidationError("vector outside the ambient subspace")
            return ()
        proj = self._full_space_projector
        if proj is not None:
            return proj.apply(v)[: self.section.cols]
        system = self.section.hstack(self.sub.basis) if self.sub.dim else self.section
        sol = solve(system, v)
        if sol is None:
            raise ValidationError("vector outside the ambient subspace")
        return tuple(sol[: self.section.cols])

    def lift(self, coords: Sequence) -> tuple:
        return self.section.apply(coords)


def quotient(ambient: Subspace, sub: Subspace) -> QuotientSpace:
    """Quotient of ambient by sub (requires sub to be contained in ambient).

    The greedy choice of section columns is read off one echelon pass over
    [sub | ambient]: pivot columns landing in the ambient block are exactly
    the ambient basis columns that extend sub in index order.
    """
    _check_same_ambient(ambient, sub)
    if not contains(ambient, sub):
        raise ValidationError("quotient requires sub to be contained in ambient")
    stacked = sub.basis.hstack(ambient.basis)
    _, pivots = rref(stacked)
    chosen = [ambient.basis.col(p - sub.dim) for p in pivots if p >= sub.dim]
    section = (
        Matrix(list(zip(*chosen)))
        if chosen
        else Matrix.zeros(ambient.ambient_dim, 0)
    )
    return QuotientSpace(ambient, sub, section)


def annihilator(s: Subspace) -> Subspace:
    """{phi : phi(s) = 0} in the dual, identified with Q^n via the dual basis."""
    if s.dim == 0:
        return Subspace.full(s.ambient_dim)
    return kernel(s.basis.transpose())

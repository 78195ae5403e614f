"""Pointwise numeric Hamiltonian formalism on coordinate patches.

A patch carries a potential callback theta: x -> k x n matrix; the structure
form at a point is the negative exterior derivative of theta, evaluated by
central differences and exactly skew by construction. On top of that sit
Hamiltonian vector-field solves (least squares over the stacked component
system), the bracket, moment maps of potential-preserving actions, the
section embedding into the canonical target, and Legendre-transform
pullbacks.

All derivatives use central differences with a fixed step (optionally one
level of Richardson extrapolation); all sampling is low-discrepancy with an
explicit seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.stats import qmc

from .errors import ContractViolation, ValidationError
from .liealg import hat, so3_exp
from .polycore import VForm, canonical_model

DEFAULT_FD_STEP = 1e-5


def vform_to_numpy(form: VForm) -> np.ndarray:
    """Float array of shape (k, n, n) from an exact form."""
    return np.array(
        [[[float(m[i, j]) for j in range(form.dim_u)] for i in range(form.dim_u)] for m in form.components]
    )


def halton_points(dim: int, count: int, seed: int = 0, scale: float = 1.0) -> np.ndarray:
    """Deterministic low-discrepancy points in [-scale, scale]^dim."""
    sampler = qmc.Halton(d=dim, scramble=True, seed=seed)
    return scale * (2.0 * sampler.random(count) - 1.0)


@dataclass(frozen=True)
class ExactPatch:
    """A coordinate patch with an exact structure form -d(theta).

    theta maps a point (length dim_m array) to a (dim_v, dim_m) matrix.
    sample_scale bounds the cube used by the verification samplers; keep it
    inside the domain where theta is defined.
    """

    dim_m: int
    dim_v: int
    theta: Callable[[np.ndarray], np.ndarray]
    fd_step: float = DEFAULT_FD_STEP
    richardson: bool = False
    name: str = ""
    sample_scale: float = 1.0
    base_shape: Optional[tuple] = None  # (n, k) for canonical patches

    def theta_at(self, x: np.ndarray) -> np.ndarray:
        out = np.asarray(self.theta(np.asarray(x, dtype=float)), dtype=float)
        if out.shape != (self.dim_v, self.dim_m):
            raise ValidationError(
                f"theta returned shape {out.shape}, expected {(self.dim_v, self.dim_m)}"
            )
        if not np.all(np.isfinite(out)):
            raise ValidationError("theta returned non-finite values")
        return out


def _theta_derivative(patch: ExactPatch, x: np.ndarray, h: float) -> np.ndarray:
    """D[a, c, b] = d theta_cb / d x_a by central differences at step h."""
    n = patch.dim_m
    d = np.empty((n, patch.dim_v, n))
    for a in range(n):
        e = np.zeros(n)
        e[a] = h
        d[a] = (patch.theta_at(x + e) - patch.theta_at(x - e)) / (2.0 * h)
    return d


def omega_at(patch: ExactPatch, x: np.ndarray) -> np.ndarray:
    """Components of -d(theta) at x, shape (k, n, n), exactly skew."""
    x = np.asarray(x, dtype=float)
    d = _theta_derivative(patch, x, patch.fd_step)
    if patch.richardson:
        d_half = _theta_derivative(patch, x, patch.fd_step / 2.0)
        d = (4.0 * d_half - d) / 3.0
    # raw[c, a, b] = d theta_cb / d x_a
    raw = np.transpose(d, (1, 0, 2))
    return -(raw - np.transpose(raw, (0, 2, 1)))


def canonical_theta(n: int, k: int, fd_step: float = DEFAULT_FD_STEP) -> ExactPatch:
    """The canonical patch on coordinates (q, phi): theta maps (dq, dphi) to phi dq."""
    if n < 1 or k < 1:
        raise ValidationError("canonical patch needs n >= 1 and k >= 1")
    dim = n + n * k

    def theta(x: np.ndarray) -> np.ndarray:
        phi = x[n:].reshape(k, n)
        out = np.zeros((k, dim))
        out[:, :n] = phi
        return out

    return ExactPatch(
        dim_m=dim, dim_v=k, theta=theta, fd_step=fd_step,
        name=f"canonical:{n},{k}", base_shape=(n, k),
    )


def constant_patch(theta_matrix: np.ndarray, fd_step: float = DEFAULT_FD_STEP) -> ExactPatch:
    """Patch with a constant potential; its structure form vanishes."""
    theta_matrix = np.asarray(theta_matrix, dtype=float)
    k, n = theta_matrix.shape
    return ExactPatch(dim_m=n, dim_v=k, theta=lambda x: theta_matrix, fd_step=fd_step, name="constant")


def _so3_dexp_inv(x: np.ndarray) -> np.ndarray:
    """Left-trivialized differential of the exponential chart at x."""
    th = float(np.linalg.norm(x))
    k = hat(x)
    if th < 1e-8:
        return np.eye(3) - 0.5 * k + (k @ k) / 6.0
    a = (1.0 - math.cos(th)) / (th * th)
    b = (th - math.sin(th)) / (th ** 3)
    return np.eye(3) - a * k + b * (k @ k)


def so3_patch(fd_step: float = DEFAULT_FD_STEP) -> ExactPatch:
    """Rotation group in exponential coordinates with its translation form.

    theta_x translates tangent vectors back to the identity, so the patch
    realizes the group with its algebra-valued structure form near 1.
    """
    return ExactPatch(
        dim_m=3, dim_v=3, theta=_so3_dexp_inv, fd_step=fd_step,
        name="so3", sample_scale=0.5,
    )


def so3_left_generator(xi: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    """Induced vector field of left translation by exp(t xi), in exponential
    coordinates: x -> dexp_inv(x)^-1 Ad_{exp(x)^-1} xi."""
    xi = np.asarray(xi, dtype=float)

    def gen(x: np.ndarray) -> np.ndarray:
        g = so3_exp(x)
        ad_inv = g.T @ xi  # Ad_{g^-1} xi for rotations acts by g^-1
        return np.linalg.solve(_so3_dexp_inv(x), ad_inv)

    return gen


def lifted_generator(
    n: int, k: int, v: Callable[[np.ndarray], np.ndarray], dv: Callable[[np.ndarray], np.ndarray]
) -> Callable[[np.ndarray], np.ndarray]:
    """Generator on the canonical patch induced by a base vector field v with
    Jacobian dv: (q, phi) moves by (v(q), -phi dv(q))."""

    def gen(x: np.ndarray) -> np.ndarray:
        q = x[:n]
        phi = x[n:].reshape(k, n)
        return np.concatenate([np.asarray(v(q), dtype=float), (-(phi @ np.asarray(dv(q), dtype=float))).ravel()])

    return gen


def translation_generator(n: int, k: int, direction: int) -> Callable[[np.ndarray], np.ndarray]:
    e = np.zeros(n)
    e[direction] = 1.0
    return lifted_generator(n, k, lambda q: e, lambda q: np.zeros((n, n)))


def gradient(patch: ExactPatch, f: Callable[[np.ndarray], np.ndarray], x: np.ndarray) -> np.ndarray:
    """df at x as a (k, n) array of partial derivatives, central differences."""
    x = np.asarray(x, dtype=float)
    h = patch.fd_step
    n = patch.dim_m
    cols = []
    for a in range(n):
        e = np.zeros(n)
        e[a] = h
        cols.append((np.asarray(f(x + e), dtype=float) - np.asarray(f(x - e), dtype=float)) / (2.0 * h))
    return np.stack(cols, axis=-1).reshape(patch.dim_v, n)


@dataclass(frozen=True)
class HamiltonianSolve:
    """Least-squares solve of the contraction equation at one point.

    X is the minimal-norm solution of the stacked system; the input counts as
    Hamiltonian at the point iff the residual clears the relative threshold.
    A rank below the patch dimension flags a degenerate structure form.
    """

    X: np.ndarray
    residual: float
    threshold: float
    rank: int
    degenerate: bool

    @property
    def is_hamiltonian(self) -> bool:
        return self.residual <= self.threshold


def hamiltonian_field(
    patch: ExactPatch,
    f: Callable[[np.ndarray], np.ndarray],
    x: np.ndarray,
    tolerance_scale: float = 1.0,
) -> HamiltonianSolve:
    """Solve the defining equation of the structure gradient of f at x.

    With the sign conventions of this package (form = -d theta, equation
    -iota_X omega = df) the stacked linear system reads omega_c X = grad f_c
    for every component c.
    """
    x = np.asarray(x, dtype=float)
    omega = omega_at(patch, x)
    df = gradient(patch, f, x)
    a = omega.reshape(patch.dim_v * patch.dim_m, patch.dim_m)
    b = df.reshape(-1)
    sol, _, rank, _ = np.linalg.lstsq(a, b, rcond=None)
    residual = float(np.linalg.norm(a @ sol - b))
    threshold = 1e-6 * tolerance_scale * (1.0 + float(np.linalg.norm(b)))
    return HamiltonianSolve(
        X=sol,
        residual=residual,
        threshold=threshold,
        rank=int(rank),
        degenerate=int(rank) < patch.dim_m,
    )


def poisson_bracket(
    patch: ExactPatch,
    f: Callable[[np.ndarray], np.ndarray],
    g: Callable[[np.ndarray], np.ndarray],
    x: np.ndarray,
    tolerance_scale: float = 1.0,
) -> np.ndarray:
    """{f, g}(x) = -omega_x(X_f, X_g); both inputs must pass the residual test."""
    x = np.asarray(x, dtype=float)
    sf = hamiltonian_field(patch, f, x, tolerance_scale)
    sg = hamiltonian_field(patch, g, x, tolerance_scale)
    if not sf.is_hamiltonian or not sg.is_hamiltonian:
        raise ContractViolation(
            "bracket arguments must be Hamiltonian at the point "
            f"(residuals {sf.residual:.3e}, {sg.residual:.3e})"
        )
    omega = omega_at(patch, x)
    return -np.einsum("i,cij,j->c", sf.X, omega, sg.X)


def lie_derivative_of_theta(
    patch: ExactPatch, gen: Callable[[np.ndarray], np.ndarray], x: np.ndarray
) -> np.ndarray:
    """(L_X theta)_cb = X_a d_a theta_cb + theta_ca d_b X_a, central differences."""
    x = np.asarray(x, dtype=float)
    n = patch.dim_m
    h = patch.fd_step
    d_theta = _theta_derivative(patch, x, h)  # (a, c, b)
    xv = np.asarray(gen(x), dtype=float)
    theta = patch.theta_at(x)
    dx = np.empty((n, n))  # dx[b, a] = d X_a / d x_b
    for b in range(n):
        e = np.zeros(n)
        e[b] = h
        dx[b] = (np.asarray(gen(x + e), dtype=float) - np.asarray(gen(x - e), dtype=float)) / (2.0 * h)
    term1 = np.einsum("a,acb->cb", xv, d_theta)
    term2 = np.einsum("ca,ba->cb", theta, dx)
    return term1 + term2


@dataclass(frozen=True)
class MomentMap:
    """Moment map of a potential-preserving action, column per generator.

    Construction verifies that the sampled action preserves the potential and
    records the measured defect of the directional-derivative identity
    d mu(X)(xi) = omega(xi_induced, X) over the same samples.
    """

    patch: ExactPatch
    generators: tuple
    preservation_defect: float
    identity_defect: float

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        theta = self.patch.theta_at(x)
        cols = [theta @ np.asarray(gen(x), dtype=float) for gen in self.generators]
        return np.stack(cols, axis=1)


def moment_identity_defect(
    patch: ExactPatch,
    generators: Sequence[Callable],
    points: np.ndarray,
    directions: np.ndarray,
) -> float:
    """Max over samples of |d mu(X)(xi) - omega(xi_induced, X)|.

    mu here is the potential contracted with each generator; the derivative
    along X uses a central difference of the whole moment matrix.
    """
    h = patch.fd_step

    def mu(x):
        theta = patch.theta_at(x)
        return np.stack([theta @ np.asarray(g(x), dtype=float) for g in generators], axis=1)

    worst = 0.0
    for x, direction in zip(points, directions):
        x = np.asarray(x, dtype=float)
        nrm = np.linalg.norm(direction)
        if nrm == 0:
            continue
        xdir = direction / nrm
        dmu = (mu(x + h * xdir) - mu(x - h * xdir)) / (2.0 * h)
        omega = omega_at(patch, x)
        for gi, gen in enumerate(generators):
            xi_ind = np.asarray(gen(x), dtype=float)
            rhs = np.einsum("i,cij,j->c", xi_ind, omega, xdir)
            worst = max(worst, float(np.max(np.abs(dmu[:, gi] - rhs))))
    return worst


def moment_from_potential(
    patch: ExactPatch,
    generators: Sequence[Callable],
    sample_count: int = 20,
    seed: int = 0,
    tolerance_scale: float = 1.0,
) -> MomentMap:
    """Moment map x -> theta_x(generator values), for theta-preserving actions.

    Raises ContractViolation when the sampled Lie derivative of the potential
    exceeds the preservation tolerance.
    """
    gens = tuple(generators)
    points = halton_points(patch.dim_m, sample_count, seed=seed, scale=patch.sample_scale)
    preserve = 0.0
    for x in points:
        for gen in gens:
            preserve = max(preserve, float(np.max(np.abs(lie_derivative_of_theta(patch, gen, x)))))
    if preserve > 1e-5 * tolerance_scale:
        raise ContractViolation(
            f"action does not preserve the potential (defect {preserve:.3e})"
        )
    directions = halton_points(patch.dim_m, sample_count, seed=seed + 1, scale=1.0)
    defect = moment_identity_defect(patch, gens, points, directions)
    return MomentMap(
        patch=patch, generators=gens, preservation_defect=preserve, identity_defect=defect
    )


@dataclass(frozen=True)
class SectionEmbedding:
    """The graph x -> (x, theta_x) into the canonical patch over the patch itself."""

    patch: ExactPatch
    target: ExactPatch

    def map(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.concatenate([x, self.patch.theta_at(x).ravel()])

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        n = self.patch.dim_m
        h = self.patch.fd_step
        cols = []
        for a in range(n):
            e = np.zeros(n)
            e[a] = h
            cols.append((self.map(x + e) - self.map(x - e)) / (2.0 * h))
        return np.stack(cols, axis=1)

    def pullback_defect(self, x: np.ndarray) -> float:
        """Max entrywise gap between the pulled-back target form and the patch form."""
        j = self.jacobian(x)
        target_omega = vform_to_numpy(canonical_model(self.patch.dim_m, self.patch.dim_v))
        pulled = np.einsum("ia,cij,jb->cab", j, target_omega, j)
        return float(np.max(np.abs(pulled - omega_at(self.patch, x))))


def local_embed(patch: ExactPatch, x: np.ndarray = None) -> SectionEmbedding:
    """Section embedding of the patch into its canonical target.

    The optional point is accepted for interface symmetry; the section is
    global on the patch domain.
    """
    target = canonical_theta(patch.dim_m, patch.dim_v, fd_step=patch.fd_step)
    return SectionEmbedding(patch=patch, target=target)


@dataclass(frozen=True)
class FiberDerivativeResult:
    fiber_derivative: np.ndarray  # (k, n)
    pullback_form: np.ndarray     # (k, 2n, 2n), skew
    jacobian_rank: int


def fiber_derivative(
    lagrangian: Callable[[np.ndarray, np.ndarray], np.ndarray],
    q: np.ndarray,
    v: np.ndarray,
    dim_v: int,
    fd_step: float = DEFAULT_FD_STEP,
    rank_tolerance: float = 1e-8,
) -> FiberDerivativeResult:
    """Velocity derivative of a V-valued Lagrangian and the induced form.

    The map (q, v) -> (q, dL/dv) must be an immersion at the point: its
    Jacobian (assembled from exact second differences of L) needs full column
    rank 2n at the given tolerance.
    """
    q = np.asarray(q, dtype=float)
    v = np.asarray(v, dtype=float)
    n = q.size
    h = fd_step
    z = np.concatenate([q, v])

    def l_at(zz: np.ndarray) -> np.ndarray:
        out = np.asarray(lagrangian(zz[:n], zz[n:]), dtype=float).reshape(dim_v)
        if not np.all(np.isfinite(out)):
            raise ValidationError("Lagrangian returned non-finite values")
        return out

    def dl_dv(zz: np.ndarray) -> np.ndarray:
        cols = []
        for a in range(n):
            e = np.zeros(2 * n)
            e[n + a] = h
            cols.append((l_at(zz + e) - l_at(zz - e)) / (2.0 * h))
        return np.stack(cols, axis=1)  # (k, n)

    fl = dl_dv(z)

    # Second derivatives d^2 L_c / d v_j d z_m via 4-point differences.
    second = np.empty((dim_v, n, 2 * n))
    for j in range(n):
        ej = np.zeros(2 * n)
        ej[n + j] = h
        for m in range(2 * n):
            em = np.zeros(2 * n)
            em[m] = h
            val = (l_at(z + ej + em) - l_at(z + ej - em) - l_at(z - ej + em) + l_at(z - ej - em)) / (4.0 * h * h)
            second[:, j, m] = val

    jac = np.zeros((n + n * dim_v, 2 * n))
    jac[:n, :n] = np.eye(n)
    for c in range(dim_v):
        for j in range(n):
            jac[n + c * n + j, :] = second[c, j, :]

    jrank = int(np.linalg.matrix_rank(jac, tol=rank_tolerance))
    if jrank < 2 * n:
        raise ContractViolation(
            f"fiber second variation is rank deficient ({jrank} < {2 * n})"
        )

    target_omega = vform_to_numpy(canonical_model(n, dim_v))
    pulled = np.einsum("ia,cij,jb->cab", jac, target_omega, jac)
    pulled = 0.5 * (pulled - np.transpose(pulled, (0, 2, 1)))
    return FiberDerivativeResult(fiber_derivative=fl, pullback_form=pulled, jacobian_rank=jrank)


def closedness_defect(patch: ExactPatch, x: np.ndarray) -> float:
    """Max coefficient of the exterior derivative of the structure form at x,
    approximated by second central differences over coordinate triples."""
    x = np.asarray(x, dtype=float)
    n = patch.dim_m
    h = patch.fd_step

    def omega_partial(a: int) -> np.ndarray:
        e = np.zeros(n)
        e[a] = h
        return (omega_at(patch, x + e) - omega_at(patch, x - e)) / (2.0 * h)

    partials = [omega_partial(a) for a in range(n)]
    worst = 0.0
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                val = partials[a][:, b, c] - partials[b][:, a, c] + partials[c][:, a, b]
                worst = max(worst, float(np.max(np.abs(val))))
    return worst

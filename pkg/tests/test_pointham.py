import numpy as np
import pytest

from polysym import liealg as la
from polysym import pointham as ph
from polysym.errors import ContractViolation, ValidationError
from polysym.polycore import canonical_model


def exact_model(n, k):
    return ph.vform_to_numpy(canonical_model(n, k))


class TestOmegaAt:
    def test_smallest_canonical_patch(self):
        patch = ph.canonical_theta(1, 1)
        omega = ph.omega_at(patch, np.array([0.3, -0.7]))
        assert np.max(np.abs(omega[0] - np.array([[0, 1], [-1, 0]]))) < 1e-8

    def test_matches_linear_model(self):
        patch = ph.canonical_theta(2, 2)
        x = np.array([0.1, 0.2, 0.3, 0.4, -0.5, 0.6])
        assert np.max(np.abs(ph.omega_at(patch, x) - exact_model(2, 2))) < 1e-7

    def test_constant_potential_flat(self):
        patch = ph.constant_patch(np.array([[1.0, 2.0]]))
        assert np.max(np.abs(ph.omega_at(patch, np.array([0.5, 0.5])))) == 0.0

    def test_exactly_skew(self):
        patch = ph.so3_patch()
        omega = ph.omega_at(patch, np.array([0.15, -0.2, 0.05]))
        assert np.max(np.abs(omega + np.transpose(omega, (0, 2, 1)))) == 0.0

    def test_richardson_tightens_canonical(self):
        plain = ph.canonical_theta(2, 2)
        tight = ph.ExactPatch(
            dim_m=plain.dim_m, dim_v=plain.dim_v, theta=plain.theta,
            fd_step=1e-3, richardson=True, base_shape=(2, 2),
        )
        x = np.array([0.1, 0.2, 0.3, 0.4, -0.5, 0.6])
        assert np.max(np.abs(ph.omega_at(tight, x) - exact_model(2, 2))) < 1e-7

    def test_nonfinite_theta_rejected(self):
        patch = ph.ExactPatch(dim_m=1, dim_v=1, theta=lambda x: np.array([[np.inf]]))
        with pytest.raises(ValidationError):
            ph.omega_at(patch, np.zeros(1))


class TestDiffeomorphismLift:
    def test_lifted_map_preserves_omega(self):
        # base diffeo of the plane, lifted to the canonical patch over it
        n = k = 2
        patch = ph.canonical_theta(n, k)

        def psi(q):
            return np.array([q[0] + 0.3 * np.sin(q[1]), q[1]])

        def dpsi(q):
            return np.array([[1.0, 0.3 * np.cos(q[1])], [0.0, 1.0]])

        def lift(x):
            q, phi = x[:n], x[n:].reshape(k, n)
            return np.concatenate([psi(q), (phi @ np.linalg.inv(dpsi(q))).ravel()])

        rng = np.random.default_rng(3)
        target = exact_model(n, k)
        h = 1e-5
        for _ in range(5):
            x = rng.uniform(-0.8, 0.8, patch.dim_m)
            jac = np.stack(
                [(lift(x + h * e) - lift(x - h * e)) / (2 * h) for e in np.eye(patch.dim_m)],
                axis=1,
            )
            pulled = np.einsum("ia,cij,jb->cab", jac, target, jac)
            assert np.max(np.abs(pulled - ph.omega_at(patch, x))) < 1e-7


class TestHamiltonianField:
    def test_momentum_generates_negative_translation(self):
        patch = ph.canonical_theta(1, 1)
        sol = ph.hamiltonian_field(patch, lambda x: np.array([x[1]]), np.array([0.2, 0.4]))
        assert sol.is_hamiltonian
        assert np.max(np.abs(sol.X - np.array([-1.0, 0.0]))) < 1e-6

    def test_base_lift_is_vertical(self):
        patch = ph.canonical_theta(1, 2)
        f = lambda x: np.array([np.sin(x[0]), x[0] ** 2])
        sol = ph.hamiltonian_field(patch, f, np.array([0.3, 0.1, -0.2]))
        assert sol.is_hamiltonian
        assert abs(sol.X[0]) < 1e-6

    def test_obstructed_function_detected(self):
        patch = ph.canonical_theta(1, 2)
        f = lambda x: np.array([x[2], 0.0])
        sol = ph.hamiltonian_field(patch, f, np.array([0.3, 0.1, -0.2]))
        assert sol.residual > 1e-3
        assert not sol.is_hamiltonian

    def test_degenerate_form_reported_not_raised(self):
        patch = ph.constant_patch(np.array([[0.5, 0.5]]))
        sol = ph.hamiltonian_field(patch, lambda x: np.array([x[0]]), np.zeros(2))
        assert sol.degenerate
        assert sol.rank == 0
        assert not sol.is_hamiltonian


class TestPoissonBracket:
    def test_coordinate_bracket(self):
        patch = ph.canonical_theta(1, 1)
        val = ph.poisson_bracket(
            patch, lambda x: np.array([x[0]]), lambda x: np.array([x[1]]), np.zeros(2)
        )
        assert abs(val[0] + 1.0) < 1e-6

    def test_self_bracket_vanishes(self):
        patch = ph.canonical_theta(1, 1)
        f = lambda x: np.array([x[1] ** 2])
        assert abs(ph.poisson_bracket(patch, f, f, np.array([0.1, 0.2]))[0]) < 1e-9

    def test_bilinearity(self):
        patch = ph.canonical_theta(1, 1)
        x = np.array([0.3, -0.2])
        f = lambda z: np.array([z[0]])
        g = lambda z: np.array([z[1]])
        h = lambda z: np.array([z[0] * z[1]])
        gh = lambda z: np.array([z[1] + z[0] * z[1]])
        lhs = ph.poisson_bracket(patch, f, gh, x)
        rhs = ph.poisson_bracket(patch, f, g, x) + ph.poisson_bracket(patch, f, h, x)
        assert np.max(np.abs(lhs - rhs)) < 1e-6

    def test_non_hamiltonian_input_rejected(self):
        patch = ph.canonical_theta(1, 2)
        bad = lambda x: np.array([x[2], 0.0])
        good = lambda x: np.array([np.sin(x[0]), x[0]])
        with pytest.raises(ContractViolation):
            ph.poisson_bracket(patch, bad, good, np.array([0.3, 0.1, -0.2]))

    def test_conditional_product_rule_instance(self):
        # classical patch: scaling a Hamiltonian by a function keeps it
        # Hamiltonian, and the product rule holds where everything qualifies
        # (with the minus the package's gradient sign forces; see the ledger)
        patch = ph.canonical_theta(1, 1)
        x = np.array([0.4, -0.3])
        f = lambda z: np.array([z[1]])          # momentum
        fp = lambda z: np.array([z[0]])         # position
        s = lambda z: z[0] * z[1]               # scalar multiplier
        sfp = lambda z: np.array([s(z) * z[0]])
        assert ph.hamiltonian_field(patch, sfp, x).is_hamiltonian
        lhs = ph.poisson_bracket(patch, f, sfp, x)
        xf = ph.hamiltonian_field(patch, f, x).X
        h = patch.fd_step
        ds = np.array([(s(x + h * e) - s(x - h * e)) / (2 * h) for e in np.eye(2)])
        rhs = -(xf @ ds) * fp(x) + s(x) * ph.poisson_bracket(patch, f, fp, x)
        assert np.max(np.abs(lhs - rhs)) < 1e-5


class TestMomentFromPotential:
    def test_translation_moment_reads_off_fiber(self):
        for k in (1, 2, 3):
            patch = ph.canonical_theta(1, k)
            mu = ph.moment_from_potential(
                patch, [ph.translation_generator(1, k, 0)], sample_count=10, seed=2
            )
            x = np.concatenate([[0.5], 0.1 * np.arange(1, k + 1)])
            assert np.max(np.abs(mu(x)[:, 0] - x[1:])) < 1e-12
            assert mu.identity_defect < 1e-5

    def test_zero_generator_gives_zero_column(self):
        patch = ph.canonical_theta(2, 2)
        zero_gen = lambda x: np.zeros(patch.dim_m)
        mu = ph.moment_from_potential(patch, [zero_gen], sample_count=5, seed=0)
        assert np.max(np.abs(mu(np.ones(patch.dim_m)))) == 0.0

    def test_rotation_action_identity(self):
        rot = np.array([[0.0, -1.0], [1.0, 0.0]])
        patch = ph.canonical_theta(2, 2)
        gen = ph.lifted_generator(2, 2, lambda q: rot @ q, lambda q: rot)
        mu = ph.moment_from_potential(patch, [gen], sample_count=25, seed=5)
        assert mu.identity_defect < 1e-5

    def test_non_preserving_action_rejected(self):
        patch = ph.canonical_theta(1, 1)
        shear = lambda x: np.array([x[0], 0.0])  # moves q without the fiber fix-up
        with pytest.raises(ContractViolation):
            ph.moment_from_potential(patch, [shear], sample_count=5, seed=0)

    def test_so3_moment_is_inverse_adjoint(self):
        patch = ph.so3_patch()
        gens = [ph.so3_left_generator(np.eye(3)[i]) for i in range(3)]
        mu = ph.moment_from_potential(patch, gens, sample_count=10, seed=1)
        x = np.array([0.2, -0.3, 0.1])
        g = la.MatrixGroupElement(la.so3_exp(x))
        for i in range(3):
            expect = la.maurer_cartan_moment(g, np.eye(3)[i])
            assert np.max(np.abs(mu(x)[:, i] - expect)) < 1e-9
        assert mu.identity_defect < 1e-5


class TestSo3Patch:
    def test_generator_matches_flow_derivative(self):
        rng = np.random.default_rng(0)
        for _ in range(6):
            x = rng.uniform(-0.5, 0.5, 3)
            xi = rng.standard_normal(3)
            gen = ph.so3_left_generator(xi)
            h = 1e-6
            fd = (
                la.so3_log(la.so3_exp(h * xi) @ la.so3_exp(x))
                - la.so3_log(la.so3_exp(-h * xi) @ la.so3_exp(x))
            ) / (2 * h)
            assert np.linalg.norm(fd - gen(x)) < 1e-6

    def test_left_invariance_at_matrix_level(self):
        # translating a tangent vector with the group leaves its algebra value fixed
        rng = np.random.default_rng(4)
        for _ in range(10):
            g = la.so3_exp(rng.uniform(-1, 1, 3))
            h = la.so3_exp(rng.uniform(-1, 1, 3))
            tangent = g @ la.hat(rng.standard_normal(3))
            before = la.unhat(np.linalg.inv(g) @ tangent)
            after = la.unhat(np.linalg.inv(h @ g) @ (h @ tangent))
            assert np.linalg.norm(before - after) < 1e-9

    def test_field_of_contracted_potential_is_negative_generator(self):
        patch = ph.so3_patch()
        xi = np.array([0.3, -0.2, 0.5])
        gen = ph.so3_left_generator(xi)
        f = lambda x: patch.theta_at(x) @ gen(x)
        x0 = np.array([0.1, 0.2, -0.15])
        sol = ph.hamiltonian_field(patch, f, x0)
        assert sol.is_hamiltonian
        assert np.linalg.norm(sol.X + gen(x0)) < 1e-5

    def test_bracket_chain_on_rotation_patch(self):
        # bracket of two contracted potentials is minus the contraction of
        # the bracketed generator (see the decisions ledger on the sign)
        patch = ph.so3_patch()
        xi = np.array([0.3, -0.2, 0.5])
        eta = np.array([-0.4, 0.1, 0.2])
        f1 = lambda x: patch.theta_at(x) @ ph.so3_left_generator(xi)(x)
        f2 = lambda x: patch.theta_at(x) @ ph.so3_left_generator(eta)(x)
        lie = la.unhat(la.hat(xi) @ la.hat(eta) - la.hat(eta) @ la.hat(xi))
        f3 = lambda x: patch.theta_at(x) @ ph.so3_left_generator(lie)(x)
        for x in (np.array([0.1, 0.2, -0.15]), np.array([-0.2, 0.05, 0.3])):
            lhs = ph.poisson_bracket(patch, f1, f2, x)
            assert np.max(np.abs(lhs + f3(x))) < 1e-4


class TestLocalEmbed:
    def test_canonical_patch_into_its_double(self):
        emb = ph.local_embed(ph.canonical_theta(1, 1))
        assert emb.pullback_defect(np.array([0.3, 0.4])) < 1e-7

    def test_so3_patch(self):
        emb = ph.local_embed(ph.so3_patch())
        for x in ph.halton_points(3, 5, seed=2, scale=0.5):
            assert emb.pullback_defect(x) < 1e-5

    def test_constant_patch_lands_in_one_fiber(self):
        patch = ph.constant_patch(np.array([[1.0, 0.0]]))
        emb = ph.local_embed(patch)
        a, b = emb.map(np.array([0.1, 0.9])), emb.map(np.array([0.7, -0.3]))
        assert np.array_equal(a[2:], b[2:])
        assert emb.pullback_defect(np.array([0.1, 0.9])) < 1e-9


class TestFiberDerivative:
    def test_classical_free_particle(self):
        res = ph.fiber_derivative(
            lambda q, v: np.array([0.5 * v[0] ** 2]), np.array([0.3]), np.array([0.7]), dim_v=1
        )
        assert abs(res.fiber_derivative[0, 0] - 0.7) < 1e-8
        assert np.max(np.abs(res.pullback_form[0] - np.array([[0, 1], [-1, 0]]))) < 1e-6

    def test_two_valued_lagrangian_nondegenerate(self):
        res = ph.fiber_derivative(
            lambda q, v: np.array([0.5 * v[0] ** 2, q[0] * v[0]]),
            np.array([0.4]),
            np.array([0.9]),
            dim_v=2,
        )
        stacked = np.vstack(list(res.pullback_form))
        assert np.linalg.matrix_rank(stacked, tol=1e-8) == 2

    def test_constant_slope_rejected(self):
        with pytest.raises(ContractViolation):
            ph.fiber_derivative(
                lambda q, v: np.array([v[0]]), np.array([0.0]), np.array([0.0]), dim_v=1
            )


class TestClosedness:
    def test_canonical_and_rotation_patches(self):
        canon = ph.canonical_theta(2, 2)
        x = np.array([0.1, 0.2, 0.3, 0.4, -0.5, 0.6])
        assert ph.closedness_defect(canon, x) < 1e-4
        assert ph.closedness_defect(ph.so3_patch(), np.array([0.1, 0.2, -0.1])) < 1e-4


def test_halton_points_deterministic():
    a = ph.halton_points(3, 7, seed=9, scale=0.5)
    b = ph.halton_points(3, 7, seed=9, scale=0.5)
    assert np.array_equal(a, b)
    assert np.max(np.abs(a)) <= 0.5

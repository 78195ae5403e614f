import itertools
import random
from fractions import Fraction as F

import pytest

from _oracles import oracle_betti
from polysym import discgauge as dg
from polysym.errors import ValidationError
from polysym.exactla import Subspace, contains


def rand_cochain(rng, cx, degree, span=3):
    return dg.Cochain(
        cx, degree, [F(rng.randint(-span, span)) for _ in range(cx.count(degree))]
    )


def closed_cochain(rng, cx, degree=1):
    z = dg.cohomology(cx, degree).cocycles
    coeffs = [F(rng.randint(-3, 3)) for _ in range(z.dim)]
    return dg.Cochain(cx, degree, z.basis.apply(coeffs))


def grid_torus3() -> dg.DeltaComplex:
    """Periodic 2x2x2 triangulated grid: same space as the quotient-cube
    torus, but with enough vertices to carry non-constant 0-cochains. Faces
    resolve by vertex-tuple lookup, exercising that construction path."""
    n = 2
    verts = list(itertools.product(range(n), repeat=3))
    vid = {v: i for i, v in enumerate(verts)}
    offsets = [o for o in itertools.product((0, 1), repeat=3) if any(o)]

    def disjoint(u, v):
        return all(not (a and b) for a, b in zip(u, v))

    def chains(p):
        out = [()]
        for _ in range(p):
            out = [c + (u,) for c in out for u in offsets if all(disjoint(u, w) for w in c)]
        return out

    simplices = {0: [(vid[v],) for v in verts]}
    for p in range(1, 4):
        cells = set()
        for base in verts:
            for ch in chains(p):
                pts = [base]
                for u in ch:
                    pts.append(tuple(a + b for a, b in zip(pts[-1], u)))
                cells.add(tuple(vid[tuple(c % n for c in q)] for q in pts))
        simplices[p] = sorted(cells)
    return dg.DeltaComplex(simplices, name="torus3grid")


class TestDeltaComplexValidation:
    def test_missing_face_rejected(self):
        with pytest.raises(ValidationError):
            dg.DeltaComplex({0: [(0,)], 1: [(0, 1)]})

    def test_ambiguous_tuples_need_explicit_faces(self):
        with pytest.raises(ValidationError, match="ambiguous"):
            dg.DeltaComplex({0: [(0,)], 1: [(0, 0), (0, 0)], 2: [(0, 0, 0)]})

    def test_simplicial_identity_enforced(self):
        # a scrambled triangle face row on a multi-vertex complex; a
        # one-vertex complex would satisfy the identities vacuously
        s2 = dg.sphere_complex(2)
        bad = {p: [tuple(f) for f in rows] for p, rows in s2.faces.items()}
        r0 = bad[2][0]
        bad[2] = [(r0[1], r0[0], r0[2])] + bad[2][1:]
        with pytest.raises(ValidationError, match="simplicial identity"):
            dg.DeltaComplex(s2.simplices, faces=bad)

    def test_dimension_cap(self):
        simplices = {
            p: [tuple(c) for c in itertools.combinations(range(6), p + 1)]
            for p in range(5)
        }
        with pytest.raises(ValidationError, match="dimension"):
            dg.DeltaComplex(simplices)

    def test_counts(self):
        assert dg.torus_complex(2).counts == (1, 3, 2)
        assert dg.torus_complex(3).counts == (1, 7, 12, 6)
        assert dg.sphere_complex(2).counts == (4, 6, 4)
        assert dg.sphere_complex(3).counts == (5, 10, 10, 5)


class TestCoboundary:
    def test_interval_step_function(self):
        iv = dg.interval_complex()
        assert dg.d(dg.Cochain(iv, 0, (0, 1))).values == (F(1),)

    def test_constant_has_zero_coboundary(self):
        iv = dg.interval_complex()
        assert dg.d(dg.Cochain(iv, 0, (5, 5))).is_zero()

    def test_one_vertex_torus_kills_degree_zero(self):
        t2 = dg.torus_complex(2)
        assert dg.d(dg.Cochain(t2, 0, (7,))).is_zero()

    def test_top_degree_rejected(self):
        t2 = dg.torus_complex(2)
        with pytest.raises(ValidationError):
            dg.d(dg.Cochain.zero(t2, 2))

    def test_dd_zero_everywhere(self):
        for make in dg.BUILTIN_COMPLEXES.values():
            cx = make()
            for p in range(cx.dimension):
                prod = cx.coboundary_matrix(p + 1) @ cx.coboundary_matrix(p)
                assert prod.is_zero()


class TestCup:
    def test_constant_one_is_identity_both_sides(self):
        t3 = dg.torus_complex(3)
        one = dg.Cochain(t3, 0, (1,))
        rng = random.Random(0)
        beta = rand_cochain(rng, t3, 1)
        assert dg.cup(one, beta).values == beta.values
        assert dg.cup(beta, one).values == beta.values

    def test_degree_overflow_rejected(self):
        t2 = dg.torus_complex(2)
        with pytest.raises(ValidationError):
            dg.cup(dg.Cochain.zero(t2, 1), dg.Cochain.zero(t2, 2))

    def test_leibniz_exact(self):
        rng = random.Random(5)
        for cx in (dg.torus_complex(3), dg.sphere_complex(3)):
            for _ in range(20):
                p = rng.choice([0, 1, 1, 2])
                q = rng.choice([0, 1])
                if p + q + 1 > cx.dimension:
                    continue
                a = rand_cochain(rng, cx, p)
                b = rand_cochain(rng, cx, q)
                lhs = dg.d(dg.cup(a, b))
                rhs = dg.cup(dg.d(a), b) + dg.cup(a, dg.d(b)).scale(F(-1) ** p)
                assert lhs.values == rhs.values

    def test_torus2_edge_product_generates_top_cohomology(self):
        t2 = dg.torus_complex(2)
        a = dg.Cochain.basis(t2, 1, 1)  # straight edge in the first direction
        b = dg.Cochain.basis(t2, 1, 0)  # straight edge in the second direction
        product = dg.cup(a, b)
        quot = dg.CochainQuotient(t2, 2)
        assert not quot.is_coboundary(product)

    def test_coboundary_cup_cocycle_is_coboundary(self):
        rng = random.Random(8)
        t3 = dg.torus_complex(3)
        quot = dg.CochainQuotient(t3, 2)
        for _ in range(15):
            gamma = rand_cochain(rng, t3, 0)
            beta = closed_cochain(rng, t3)
            assert quot.is_coboundary(dg.cup(dg.d(gamma), beta))


class TestCohomology:
    @pytest.mark.parametrize(
        "name,expected",
        [
            ("torus2", (1, 2, 1)),
            ("sphere2", (1, 0, 1)),
            ("sphere3", (1, 0, 0, 1)),
            ("torus3", (1, 3, 3, 1)),
            ("interval", (1, 0)),
        ],
    )
    def test_betti_numbers_against_oracle(self, name, expected):
        cx = dg.BUILTIN_COMPLEXES[name]()
        betti = tuple(dg.cohomology(cx, p).betti for p in range(cx.dimension + 1))
        assert betti == expected
        assert betti == tuple(oracle_betti(cx, p) for p in range(cx.dimension + 1))

    def test_presentation_decomposes_cocycles(self):
        t3 = dg.torus_complex(3)
        pres = dg.cohomology(t3, 1)
        assert contains(pres.cocycles, pres.coboundaries)
        assert pres.harmonic_section.cols == pres.betti

    def test_degree_out_of_range(self):
        with pytest.raises(ValidationError):
            dg.cohomology(dg.torus_complex(2), 3)


class TestOmegaDisc:
    def test_zero_argument(self):
        t2 = dg.torus_complex(2)
        coset = dg.omega_disc(t2, dg.Cochain.zero(t2, 1), dg.Cochain.basis(t2, 1, 0))
        assert coset.is_zero()

    def test_self_pairing_projects_to_zero_in_cohomology(self):
        rng = random.Random(2)
        t2 = dg.torus_complex(2)
        h2 = dg.cohomology(t2, 2)
        for _ in range(10):
            alpha = closed_cochain(rng, t2)
            square = dg.cup(alpha, alpha)
            assert all(x == 0 for x in h2.class_coordinates(square))

    def test_generator_pairing_nonzero(self):
        t2 = dg.torus_complex(2)
        z = dg.cohomology(t2, 1).cocycles
        alpha = dg.Cochain(t2, 1, z.basis.col(0))
        beta = dg.Cochain(t2, 1, z.basis.col(1))
        assert not dg.omega_disc(t2, alpha, beta).is_zero()

    def test_antisymmetric_mod_coboundaries(self):
        rng = random.Random(3)
        t3 = dg.torus_complex(3)
        quot = dg.CochainQuotient(t3, 2)
        for _ in range(10):
            alpha = closed_cochain(rng, t3)
            beta = closed_cochain(rng, t3)
            total = dg.cup(alpha, beta) + dg.cup(beta, alpha)
            assert quot.is_coboundary(total)

    def test_kernel_reported_on_coarse_complexes(self):
        assert dg.omega_kernel(dg.torus_complex(2)).dim == 1
        assert dg.omega_kernel(dg.torus_complex(3)).dim == 1
        assert dg.omega_kernel(dg.interval_complex()) == Subspace.full(1)


class TestGaugeMoment:
    def test_closed_connection_gives_zero_functional(self):
        rng = random.Random(4)
        for name in ("torus2", "torus3", "sphere2"):
            cx = dg.BUILTIN_COMPLEXES[name]()
            assert dg.gauge_moment(cx, closed_cochain(rng, cx)).is_zero()

    def test_constant_test_function_scales_curvature(self):
        rng = random.Random(5)
        cx = dg.sphere_complex(2)
        a = rand_cochain(rng, cx, 1)
        moment = dg.gauge_moment(cx, a)
        quot = dg.CochainQuotient(cx, 2)
        da = dg.d(a)
        ones = dg.Cochain(cx, 0, (1,) * cx.count(0))
        assert moment.evaluate(ones).coords == quot.coords(da)

    def test_moment_identity_exact_on_builtins(self):
        for name in ("interval", "torus2", "torus3", "sphere2", "sphere3"):
            assert dg.check_gauge_moment_identity(dg.BUILTIN_COMPLEXES[name]())

    def test_single_vertex_complexes_have_vanishing_functional(self):
        # only constant test functions exist, and curvature cup a constant
        # is a coboundary; the honest nonzero case needs more vertices
        rng = random.Random(6)
        t3 = dg.torus_complex(3)
        for _ in range(5):
            assert dg.gauge_moment(t3, rand_cochain(rng, t3, 1)).is_zero()

    def test_zero_sets(self):
        iv = dg.interval_complex()
        assert dg.moment_zero_set(iv).zero_set == Subspace.full(1)
        for name in ("torus2", "torus3", "sphere2", "sphere3"):
            report = dg.moment_zero_set(dg.BUILTIN_COMPLEXES[name]())
            assert report.contains_cocycles

    def test_sphere2_zero_set_strictly_contains_cocycles(self):
        # even with non-constant test functions the coarse level set stays
        # strictly larger than the closed cochains; the report records this
        report = dg.moment_zero_set(dg.sphere_complex(2))
        assert report.contains_cocycles
        assert not report.equals_cocycles
        assert (report.zero_set.dim, report.cocycles.dim) == (5, 3)


class TestGridTorus:
    def test_grid_carries_nonzero_moment_functional(self):
        grid = grid_torus3()
        assert grid.counts == (8, 56, 96, 48)
        betti1 = dg.cohomology(grid, 1).betti
        assert betti1 == 3
        rng = random.Random(3)
        a = rand_cochain(rng, grid, 1)
        assert not dg.d(a).is_zero()
        assert not dg.gauge_moment(grid, a).is_zero()


class TestReduceGauge:
    @pytest.mark.parametrize(
        "name,b1", [("torus2", 2), ("torus3", 3), ("sphere2", 0), ("sphere3", 0)]
    )
    def test_carrier_dimensions(self, name, b1):
        red = dg.reduce_gauge(dg.BUILTIN_COMPLEXES[name]())
        assert red.carrier.betti == b1
        assert red.carrier.betti == oracle_betti(dg.BUILTIN_COMPLEXES[name](), 1)

    def test_torus2_pairing_skew_rank_two(self):
        red = dg.reduce_gauge(dg.torus_complex(2))
        p = red.pairing[0]
        assert p.transpose() == -p
        assert p[0, 1] != 0

    def test_torus3_pairing_nondegenerate(self):
        red = dg.reduce_gauge(dg.torus_complex(3))
        assert len(red.pairing) == 3
        for p in red.pairing:
            assert p.transpose() == -p
        assert red.pairing_kernel().is_zero()
        assert red.pairing_form is not None

    def test_sphere3_has_no_pairing_components(self):
        red = dg.reduce_gauge(dg.sphere_complex(3))
        assert red.pairing == ()
        assert red.pairing_form is None

    def test_pairing_independent_of_representatives(self):
        # evaluating on arbitrary closed representatives agrees with the
        # stored pairing of their classes
        rng = random.Random(9)
        for name in ("torus2", "torus3"):
            cx = dg.BUILTIN_COMPLEXES[name]()
            red = dg.reduce_gauge(cx)
            h1, h2 = red.carrier, red.target
            for _ in range(10):
                z1 = closed_cochain(rng, cx)
                z2 = closed_cochain(rng, cx)
                x1 = h1.class_coordinates(z1)
                x2 = h1.class_coordinates(z2)
                direct = h2.class_coordinates(dg.cup(z1, z2))
                via_pairing = tuple(
                    sum(
                        (p[i, j] * x1[i] * x2[j] for i in range(h1.betti) for j in range(h1.betti)),
                        F(0),
                    )
                    for p in red.pairing
                )
                assert direct == via_pairing

    def test_gauge_invariance_of_cup_values(self):
        rng = random.Random(10)
        for name in ("torus2", "torus3"):
            cx = dg.BUILTIN_COMPLEXES[name]()
            quot = dg.CochainQuotient(cx, 2)
            for _ in range(25):
                alpha = closed_cochain(rng, cx)
                beta = closed_cochain(rng, cx)
                gamma = rand_cochain(rng, cx, 0)
                shifted = alpha + dg._d_extended(gamma)
                assert dg.omega_disc(cx, shifted, beta, quot).coords == dg.omega_disc(
                    cx, alpha, beta, quot
                ).coords


class TestLagrangianCheck:
    def test_sphere3_report(self):
        report = dg.lagrangian_check(dg.sphere_complex(3))
        assert report.h2_trivial
        assert report.z1_dim == 4
        assert report.z1_is_lagrangian is False
        assert report.orthogonal_dim == 7

    def test_torus2_skipped(self):
        report = dg.lagrangian_check(dg.torus_complex(2))
        assert not report.h2_trivial
        assert report.z1_is_lagrangian is None

    def test_interval_everything_isotropic(self):
        report = dg.lagrangian_check(dg.interval_complex())
        assert report.h2_trivial
        assert report.orthogonal_dim == 1
        assert report.z1_is_lagrangian is True

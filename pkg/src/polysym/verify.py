"""Named verification suites.

Each suite drives one family of identities on randomized or built-in
instances and returns a structured result; the CLI renders them and the
acceptance tests pin their seeds, trial counts, and tolerances. Exact suites
assert set equalities over the rationals; numeric suites compare against the
stated tolerances, scaled by the caller's tolerance factor.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List

import numpy as np

from . import discgauge as dg
from . import liealg as la
from . import pointham as ph
from .errors import ValidationError
from .exactla import Subspace, contains, intersect, kernel, sum_
from .polycore import (
    apply_coefficient_map,
    canonical_model,
    check_reduction_candidate,
    classify,
    linear_reduce,
    orthogonal,
    pullback,
    universal_embed,
)
from .randgen import (
    rand_dims,
    rand_line,
    rand_plane,
    rand_subspace,
    rand_surjection,
    rand_vform,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteResult:
    suite: str
    identity: str
    seed: int
    trials: int
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = ""):
        self.checks.append(CheckResult(name=name, passed=bool(passed), detail=detail))


def suite_cross_table(seed: int, trials: int, tol_scale: float) -> SuiteResult:
    res = SuiteResult(
        "cross-table",
        "cross-product orthogonals: zero space to all, lines fixed, planes to zero",
        seed,
        trials,
    )
    rng = random.Random(seed)
    cross = la.bracket_form(la.so3())
    res.add("zero maps to full", orthogonal(cross, Subspace.zero(3)) == Subspace.full(3))
    res.add("full maps to zero", orthogonal(cross, Subspace.full(3)).is_zero())
    lines = planes = True
    for _ in range(trials):
        line = rand_line(rng, 3)
        lines &= orthogonal(cross, line) == line
        plane = rand_plane(rng, 3)
        planes &= orthogonal(cross, plane).is_zero()
    res.add(f"{trials} random lines are self-orthogonal", lines)
    res.add(f"{trials} random planes map to zero", planes)
    return res


def suite_lemma_subspaces(seed: int, trials: int, tol_scale: float) -> SuiteResult:
    res = SuiteResult(
        "lemma-subspaces",
        "orthogonal calculus: extremes, inclusion reversal, double orthogonal, sums and intersections",
        seed,
        trials,
    )
    rng = random.Random(seed)
    ok = {key: True for key in ("i", "ii", "iii", "iv", "v", "vi")}
    for _ in range(trials):
        n, k = rand_dims(rng, max_n=8, max_k=4)
        form = rand_vform(rng, n, k)
        a = rand_subspace(rng, n)
        b = sum_(a, rand_subspace(rng, n))
        a1, a2 = rand_subspace(rng, n), rand_subspace(rng, n)

        ok["i"] &= orthogonal(form, Subspace.full(n)).is_zero()
        ok["i"] &= orthogonal(form, Subspace.zero(n)) == Subspace.full(n)
        ok["ii"] &= contains(orthogonal(form, a), orthogonal(form, b))
        o1 = orthogonal(form, a)
        o2 = orthogonal(form, o1)
        o3 = orthogonal(form, o2)
        ok["iii"] &= contains(o2, a)
        ok["iv"] &= o1 == o3
        ok["v"] &= intersect(orthogonal(form, a1), orthogonal(form, a2)) == orthogonal(
            form, sum_(a1, a2)
        )
        ok["vi"] &= contains(
            orthogonal(form, intersect(a1, a2)),
            sum_(orthogonal(form, a1), orthogonal(form, a2)),
        )
    res.add("part i: extremes swap", ok["i"])
    res.add("part ii: inclusions reverse", ok["ii"])
    res.add("part iii: double orthogonal grows", ok["iii"])
    res.add("part iv: triple orthogonal stabilizes", ok["iv"])
    res.add("part v: orthogonal of a sum is the intersection", ok["v"])
    res.add("part vi: sum of orthogonals refines the intersection", ok["vi"])
    return res


def suite_reduction_kernel(seed: int, trials: int, tol_scale: float) -> SuiteResult:
    res = SuiteResult(
        "reduction-kernel",
        "reduced-form kernel matches the quotient image of the double orthogonal",
        seed,
        trials,
    )
    rng = random.Random(seed)
    kernel_ok = nondeg_ok = True
    for _ in range(trials):
        n, k = rand_dims(rng, max_n=6, max_k=4)
        form = rand_vform(rng, n, k)
        a = rand_subspace(rng, n)
        red = linear_reduce(form, a)
        orth = orthogonal(form, a)
        double = orthogonal(form, orth)
        witness = intersect(double, orth)
        core = intersect(a, orth)
        image = Subspace.from_vectors(
            red.carrier.dim,
            [red.carrier.project(witness.basis.col(j)) for j in range(witness.dim)],
        )
        kernel_ok &= image == red.kernel
        nondeg_ok &= red.nondegenerate == (witness == core)
    res.add(f"kernel formula on {trials} random instances", kernel_ok)
    res.add("nondegeneracy criterion matches", nondeg_ok)
    return res


def suite_canonical_reduction(seed: int, trials: int, tol_scale: float) -> SuiteResult:
    res = SuiteResult(
        "canonical-reduction",
        "reducing the universal model by a base subspace reproduces the smaller model",
        seed,
        trials,
    )
    rng = random.Random(seed)
    dims_ok = nondeg_ok = True
    for _ in range(trials):
        n = rng.randint(1, 4)
        k = rng.randint(1, 4)
        model = canonical_model(n, k)
        base = rand_subspace(rng, n)
        lifted = Subspace.from_vectors(
            n + n * k,
            [
                tuple(base.basis.col(j)) + (Fraction(0),) * (n * k)
                for j in range(base.dim)
            ],
        )
        red = linear_reduce(model, lifted)
        dims_ok &= red.carrier.dim == (n - base.dim) * (1 + k)
        nondeg_ok &= red.nondegenerate
    res.add(f"carrier dimension (n - dim A)(1 + k) on {trials} instances", dims_ok)
    res.add("reduced form always nondegenerate", nondeg_ok)
    return res


def suite_embedding(seed: int, trials: int, tol_scale: float) -> SuiteResult:
    res = SuiteResult(
        "embedding",
        "graph embedding into the universal model pulls the canonical form back exactly",
        seed,
        trials,
    )
    rng = random.Random(seed)
    ok = True
    for _ in range(trials):
        n, k = rand_dims(rng, max_n=6, max_k=3)
        form = rand_vform(rng, n, k)
        emb = universal_embed(form)
        pulled = pullback(canonical_model(n, k), emb)
        ok &= list(pulled.components) == list(form.components)
    res.add(f"exact pullback identity on {trials} random forms", ok)
    return res


def suite_irreducibility(seed: int, trials: int, tol_scale: float) -> SuiteResult:
    res = SuiteResult(
        "irreducibility",
        "every proper coefficient surjection degenerates the universal model, with the constant-direction witness",
        seed,
        trials,
    )
    rng = random.Random(seed)
    reject_ok = witness_ok = True
    for _ in range(trials):
        k = rng.randint(2, 4)
        n = rng.randint(1, 3)
        model = canonical_model(n, k)
        kp = rng.randint(1, k - 1)
        f = rand_surjection(rng, kp, k)
        reject_ok &= check_reduction_candidate(model, f) is False
        _, degeneracy = apply_coefficient_map(f, model)
        v = kernel(f.matrix).basis.col(0)
        witness = [Fraction(0)] * (n + n * k)
        for i in range(k):
            witness[n + i * n] = v[i]
        witness_ok &= degeneracy.contains_vector(witness)
    res.add(f"{trials} proper surjections rejected", reject_ok)
    res.add("kernel contains the constant-direction witness", witness_ok)
    return res


def suite_lie_reductions(seed: int, trials: int, tol_scale: float) -> SuiteResult:
    res = SuiteResult(
        "lie-reductions",
        "rotation algebra reduces to a point by any line; the diagonal subalgebra is self-orthogonal; centralizers are orthogonals",
        seed,
        trials,
    )
    rng = random.Random(seed)
    g3, g2 = la.so3(), la.sl2()
    point_ok = True
    for _ in range(trials):
        line = rand_line(rng, 3)
        point_ok &= la.lie_reduce(g3, line).carrier.dim == 0
    res.add(f"{trials} lines reduce the rotation algebra to a point", point_ok)
    cartan = Subspace.from_vectors(3, [(1, 0, 0)])
    flags = classify(la.bracket_form(g2), cartan)
    res.add("diagonal subalgebra classifies self-orthogonal", flags.lagrangian)
    cent_ok = True
    for g in (g3, g2):
        form = la.bracket_form(g)
        for _ in range(trials):
            a = rand_subspace(rng, 3)
            cent_ok &= orthogonal(form, a) == la.centralizer(g, a)
    res.add(f"centralizer equals bracket orthogonal on {2 * trials} subspaces", cent_ok)
    return res


def suite_moment_identity(seed: int, trials: int, tol_scale: float) -> SuiteResult:
    res = SuiteResult(
        "moment-identity",
        "directional derivative of the moment map pairs as the structure form on induced fields",
        seed,
        trials,
    )
    tol = 1e-5 * tol_scale
    per_patch = max(1, -(-trials // 9))
    worst_canon = 0.0
    for n in (1, 2, 3):
        for k in (1, 2, 3):
            patch = ph.canonical_theta(n, k)
            gens = [ph.translation_generator(n, k, i) for i in range(n)]
            if n == 2:
                rot = np.array([[0.0, -1.0], [1.0, 0.0]])
                gens.append(ph.lifted_generator(n, k, lambda q: rot @ q, lambda q: rot))
            pts = ph.halton_points(patch.dim_m, per_patch, seed=seed + 10 * n + k, scale=1.0)
            dirs = ph.halton_points(patch.dim_m, per_patch, seed=seed + 100 + 10 * n + k, scale=1.0)
            worst_canon = max(worst_canon, ph.moment_identity_defect(patch, gens, pts, dirs))
    res.add(
        f"canonical patches, {9 * per_patch} samples",
        worst_canon <= tol,
        f"defect {worst_canon:.3e} <= {tol:.1e}",
    )
    patch = ph.so3_patch()
    gens = [ph.so3_left_generator(np.eye(3)[i]) for i in range(3)]
    pts = ph.halton_points(3, trials, seed=seed + 7, scale=patch.sample_scale)
    dirs = ph.halton_points(3, trials, seed=seed + 8, scale=1.0)
    worst_so3 = ph.moment_identity_defect(patch, gens, pts, dirs)
    res.add(
        f"rotation-group patch, {trials} samples",
        worst_so3 <= tol,
        f"defect {worst_so3:.3e} <= {tol:.1e}",
    )
    return res


def suite_arnold(seed: int, trials: int, tol_scale: float) -> SuiteResult:
    res = SuiteResult(
        "arnold",
        "a non-identity left translation of the rotation group is fixed-point free",
        seed,
        trials,
    )
    xi = np.array([0.0, 0.0, 2.0 * np.pi])
    report = la.arnold_counterexample(xi, 0.5, trials, seed=seed, tolerance_scale=tol_scale)
    res.add(
        f"{trials} samples, half-period translation",
        report.fixed_points_found == 0,
        f"fixed points {report.fixed_points_found}",
    )
    report2 = la.arnold_counterexample(xi, 1e-4, trials, seed=seed + 1, tolerance_scale=tol_scale)
    res.add(
        "tiny but nonzero translation",
        report2.fixed_points_found == 0,
        f"fixed points {report2.fixed_points_found}",
    )
    return res


def suite_convexity(seed: int, trials: int, tol_scale: float) -> SuiteResult:
    res = SuiteResult(
        "convexity",
        "the moment image is a sphere: radius is preserved and midpoints fall inside",
        seed,
        trials,
    )
    xi = np.array([1.0, 0.0, 0.0])
    report = la.convexity_counterexample(xi, trials, seed=seed, tolerance_scale=tol_scale)
    res.add(
        f"{trials} samples stay on the sphere",
        report.on_sphere,
        f"max radius error {report.max_radius_error:.3e}",
    )
    res.add(
        "an exhibited midpoint is interior",
        report.midpoint_gap >= 1e-6,
        f"midpoint norm {report.midpoint_norm:.3e}, gap {report.midpoint_gap:.3e}",
    )
    return res


def _oracle_betti(cx: dg.DeltaComplex, p: int) -> int:
    """Rank-nullity first Betti oracle by fraction-free integer elimination,
    independent of the package's echelon and cup machinery."""

    def coboundary_rows(q: int) -> list:
        n_from = cx.count(q)
        n_to = cx.count(q + 1)
        rows = [[0] * n_from for _ in range(n_to)]
        if q + 1 in cx.faces:
            for s, frow in enumerate(cx.faces[q + 1]):
                for i, f in enumerate(frow):
                    rows[s][f] += (-1) ** i
        return rows

    def int_rank(rows: list) -> int:
        m = [list(r) for r in rows]
        rank_ = 0
        cols = len(m[0]) if m else 0
        for c in range(cols):
            piv = next((r for r in range(rank_, len(m)) if m[r][c] != 0), None)
            if piv is None:
                continue
            m[rank_], m[piv] = m[piv], m[rank_]
            pv = m[rank_][c]
            for r in range(len(m)):
                if r != rank_ and m[r][c] != 0:
                    factor = m[r][c]
                    m[r] = [pv * x - factor * y for x, y in zip(m[r], m[rank_])]
            rank_ += 1
        return rank_

    rank_dp = int_rank(coboundary_rows(p))
    rank_dprev = int_rank(coboundary_rows(p - 1)) if p >= 1 else 0
    return cx.count(p) - rank_dp - rank_dprev


def suite_gauge_h1(seed: int, trials: int, tol_scale: float) -> SuiteResult:
    res = SuiteResult(
        "gauge-h1",
        "gauge reduction lands on first cohomology; the pairing is the cup pairing into second cohomology",
        seed,
        trials,
    )
    expected = {"torus2": 2, "torus3": 3, "sphere2": 0, "sphere3": 0}
    for name, want in expected.items():
        cx = dg.BUILTIN_COMPLEXES[name]()
        red = dg.reduce_gauge(cx)
        oracle = _oracle_betti(cx, 1)
        res.add(
            f"{name}: carrier dim {red.carrier.betti} equals oracle {oracle} equals {want}",
            red.carrier.betti == oracle == want,
        )
        if name == "torus2":
            p = red.pairing[0]
            skew = p.transpose() == -p
            nonzero = p[0, 1] != 0
            res.add("torus2 pairing is skew of rank 2", skew and nonzero)
        if name == "torus3":
            res.add(
                "torus3 pairing has trivial component-kernel intersection",
                red.pairing_kernel().is_zero(),
            )
    return res


def suite_gauge_invariance(seed: int, trials: int, tol_scale: float) -> SuiteResult:
    res = SuiteResult(
        "gauge-invariance",
        "shifting a closed argument by a coboundary moves the cup value by a coboundary only",
        seed,
        trials,
    )
    rng = random.Random(seed)
    for name in ("torus2", "torus3"):
        cx = dg.BUILTIN_COMPLEXES[name]()
        z1 = dg.cohomology(cx, 1).cocycles
        quot = dg.CochainQuotient(cx, 2)
        ok = True
        for _ in range(trials):
            alpha = dg.Cochain(
                cx,
                1,
                z1.basis.apply([Fraction(rng.randint(-3, 3)) for _ in range(z1.dim)]),
            )
            beta = dg.Cochain(
                cx,
                1,
                z1.basis.apply([Fraction(rng.randint(-3, 3)) for _ in range(z1.dim)]),
            )
            gamma = dg.Cochain(
                cx, 0, [Fraction(rng.randint(-3, 3)) for _ in range(cx.count(0))]
            )
            shifted = alpha + dg._d_extended(gamma)
            lhs = dg.omega_disc(cx, shifted, beta, quot)
            rhs = dg.omega_disc(cx, alpha, beta, quot)
            ok &= lhs.coords == rhs.coords
        res.add(f"{name}: {trials} random shifted pairs agree mod coboundaries", ok)
    return res


def suite_lagrangian_sphere3(seed: int, trials: int, tol_scale: float) -> SuiteResult:
    res = SuiteResult(
        "lagrangian-sphere3",
        "with trivial second cohomology, compare closed 1-cochains with their cup orthogonal",
        seed,
        trials,
    )
    cx = dg.BUILTIN_COMPLEXES["sphere3"]()
    first = dg.lagrangian_check(cx)
    second = dg.lagrangian_check(dg.BUILTIN_COMPLEXES["sphere3"]())
    res.add("second cohomology vanishes", first.h2_trivial)
    res.add(
        "report is deterministic",
        (first.z1_is_lagrangian, first.orthogonal_dim) == (second.z1_is_lagrangian, second.orthogonal_dim),
        f"z1 dim {first.z1_dim}, orthogonal dim {first.orthogonal_dim}, "
        f"lagrangian {first.z1_is_lagrangian}",
    )
    return res


SUITES: dict = {
    "cross-table": (suite_cross_table, 50),
    "lemma-subspaces": (suite_lemma_subspaces, 100),
    "reduction-kernel": (suite_reduction_kernel, 100),
    "canonical-reduction": (suite_canonical_reduction, 50),
    "embedding": (suite_embedding, 50),
    "irreducibility": (suite_irreducibility, 50),
    "lie-reductions": (suite_lie_reductions, 50),
    "moment-identity": (suite_moment_identity, 100),
    "arnold": (suite_arnold, 1000),
    "convexity": (suite_convexity, 1000),
    "gauge-h1": (suite_gauge_h1, 1),
    "gauge-invariance": (suite_gauge_invariance, 100),
    "lagrangian-sphere3": (suite_lagrangian_sphere3, 1),
}


def run_suite(name: str, seed: int = 0, trials: int = None, tolerance_scale: float = 1.0) -> SuiteResult:
    if name not in SUITES:
        raise ValidationError(
            f"unknown suite {name!r}; known suites: {', '.join(sorted(SUITES))}"
        )
    fn, default_trials = SUITES[name]
    return fn(seed, trials if trials is not None else default_trials, tolerance_scale)

"""Command-line front end.

One binary, subcommand style. Every run prints a deterministic report:
`key: value` lines in a stable order (or `key=value` with --machine), so
identical input and seed produce identical bytes. Exit codes: 0 success,
1 computational contract violation, 2 validation error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from . import discgauge as dg
from . import docio
from . import liealg as la
from . import pointham as ph
from .errors import ContractViolation, ValidationError
from .exactla import Matrix, Subspace
from .polycore import (
    apply_coefficient_map,
    check_reduction_candidate,
    classify,
    linear_reduce,
    orthogonal,
    pullback,
    canonical_model,
    universal_embed,
)
from .verify import SUITES, run_suite


class Report:
    """Ordered key-value output with a human and a machine rendering."""

    def __init__(self, command: str):
        self.rows: List[Tuple[str, str]] = [("command", command)]

    def add(self, key: str, value) -> "Report":
        self.rows.append((key, str(value)))
        return self

    def render(self, machine: bool) -> str:
        if machine:
            return "".join(f"{k}={v}\n" for k, v in self.rows)
        return "".join(f"{k}: {v}\n" for k, v in self.rows)


def _fmt_scalar(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _fmt_vector(v) -> str:
    return "(" + ", ".join(_fmt_scalar(x) for x in v) + ")"


def _fmt_matrix(m: Matrix) -> str:
    return "[" + "; ".join(" ".join(_fmt_scalar(x) for x in row) for row in m.entries) + "]"


def _fmt_subspace(s: Subspace) -> str:
    if s.dim == 0:
        return f"0 (in dim {s.ambient_dim})"
    return " ".join(_fmt_vector(s.basis.col(j)) for j in range(s.dim))


def _fmt_float(x: float) -> str:
    return f"{x:.12f}"


def _fmt_float_matrix(m: np.ndarray) -> str:
    return "[" + "; ".join(" ".join(_fmt_float(x) for x in row) for row in m) + "]"


def parse_subspace_arg(text: str, ambient_dim: int) -> Subspace:
    text = text.strip()
    if text in ("zero", "0"):
        return Subspace.zero(ambient_dim)
    if text == "full":
        return Subspace.full(ambient_dim)
    if all(tok.strip().startswith("e") for tok in text.split(",")):
        vectors = []
        for tok in text.split(","):
            tok = tok.strip()
            if not tok[1:].isdigit():
                raise ValidationError(f"bad basis vector {tok!r}")
            idx = int(tok[1:])
            if not (1 <= idx <= ambient_dim):
                raise ValidationError(f"basis vector {tok} out of range")
            v = [Fraction(0)] * ambient_dim
            v[idx - 1] = Fraction(1)
            vectors.append(v)
        return Subspace.from_vectors(ambient_dim, vectors)
    vectors = []
    for part in text.split(";"):
        entries = [e.strip() for e in part.split(",")]
        if len(entries) != ambient_dim:
            raise ValidationError(
                f"subspace vector {part!r} needs {ambient_dim} entries"
            )
        vectors.append([Fraction(e) for e in entries])
    return Subspace.from_vectors(ambient_dim, vectors)


def _load_document(args) -> docio.ProblemDocument:
    if getattr(args, "file", None):
        try:
            with open(args.file, "r", encoding="utf-8") as fh:
                return docio.parse_document(fh.read())
        except OSError as exc:
            raise ValidationError(f"cannot read {args.file}: {exc}") from exc
    if getattr(args, "builtin", None):
        return docio.resolve_builtin(args.builtin)
    raise ValidationError("supply --file or --builtin")


def _form_and_subspace(args):
    doc = _load_document(args)
    form = docio.form_to_vform(doc)
    sub = None
    if getattr(args, "subspace", None):
        sub = parse_subspace_arg(args.subspace, form.dim_u)
    else:
        sub = docio.document_subspace(doc, form.dim_u)
    return doc, form, sub


def cmd_orth(args) -> Report:
    _, form, sub = _form_and_subspace(args)
    if sub is None:
        raise ValidationError("orth needs a subspace (--subspace or document field)")
    rep = Report(f"orth {args.builtin or args.file}")
    rep.add("ambient_dim", form.dim_u)
    rep.add("value_dim", form.dim_v)
    rep.add("subspace", _fmt_subspace(sub))
    rep.add("orthogonal", _fmt_subspace(orthogonal(form, sub)))
    rep.add("identity", "orthogonal = joint kernel of the contraction maps")
    return rep


def cmd_classify(args) -> Report:
    _, form, sub = _form_and_subspace(args)
    if sub is None:
        raise ValidationError("classify needs a subspace (--subspace or document field)")
    flags = classify(form, sub)
    rep = Report(f"classify {args.builtin or args.file}")
    rep.add("subspace", _fmt_subspace(sub))
    rep.add("isotropic", str(flags.isotropic).lower())
    rep.add("coisotropic", str(flags.coisotropic).lower())
    rep.add("lagrangian", str(flags.lagrangian).lower())
    rep.add("polysymplectic", str(flags.polysymplectic).lower())
    rep.add("identity", "classification from containments between a subspace and its orthogonal")
    return rep


def cmd_reduce(args) -> Report:
    doc, form, sub = _form_and_subspace(args)
    if sub is None:
        raise ValidationError("reduce needs a subspace (--subspace or document field)")
    cmap = docio.document_coefficient_map(doc)
    rep = Report(f"reduce {args.builtin or args.file}")
    if cmap is not None:
        candidate, ker = apply_coefficient_map(cmap, form)
        rep.add("coefficient_map", _fmt_matrix(cmap.matrix))
        rep.add("coefficient_kernel_dim", ker.dim)
        rep.add("reduction_candidate_ok", str(check_reduction_candidate(form, cmap)).lower())
        form = candidate
    red = linear_reduce(form, sub)
    rep.add("subspace", _fmt_subspace(sub))
    rep.add("carrier_dim", red.carrier.dim)
    rep.add("section", _fmt_matrix(red.carrier.section))
    for i, comp in enumerate(red.reduced_form.components):
        rep.add(f"reduced_component_{i}", _fmt_matrix(comp))
    rep.add("kernel_dim", red.kernel.dim)
    rep.add("nondegenerate", str(red.nondegenerate).lower())
    rep.add("identity", "form descends to the quotient of the orthogonal by its core")
    return rep


def cmd_embed(args) -> Report:
    _, form, _ = _form_and_subspace(args)
    emb = universal_embed(form)
    pulled = pullback(canonical_model(form.dim_u, form.dim_v), emb)
    exact = list(pulled.components) == list(form.components)
    rep = Report(f"embed {args.builtin or args.file}")
    rep.add("target_dim", form.dim_u + form.dim_u * form.dim_v)
    rep.add("embedding", _fmt_matrix(emb))
    rep.add("pullback_exact", str(exact).lower())
    rep.add("identity", "graph of the half contraction includes into the universal model")
    return rep


def _lie_algebra_from_args(args) -> la.LieAlgebra:
    if getattr(args, "file", None):
        return docio.lie_to_algebra(_load_document(args))
    name = args.builtin or "so3"
    if name in la.BUILTIN_ALGEBRAS:
        return la.BUILTIN_ALGEBRAS[name]()
    return docio.lie_to_algebra(docio.resolve_builtin(name))


def _parse_xi(text: str) -> np.ndarray:
    try:
        return np.array([float(t) for t in text.split(",")], dtype=float)
    except ValueError as exc:
        raise ValidationError(f"bad vector literal {text!r}") from exc


def cmd_lie(args) -> Report:
    rep = Report(f"lie {args.verb}")
    if args.verb in ("center", "centralizer", "reduce"):
        algebra = _lie_algebra_from_args(args)
        rep.add("algebra_dim", algebra.dim)
        if args.verb == "center":
            rep.add("center", _fmt_subspace(la.center(algebra)))
            rep.add("identity", "joint kernel of the adjoint maps")
            return rep
        if not args.subspace:
            raise ValidationError(f"lie {args.verb} needs --subspace")
        sub = parse_subspace_arg(args.subspace, algebra.dim)
        rep.add("subspace", _fmt_subspace(sub))
        if args.verb == "centralizer":
            rep.add("centralizer", _fmt_subspace(la.centralizer(algebra, sub)))
            rep.add("identity", "centralizer equals the bracket-form orthogonal when the center vanishes")
            return rep
        red = la.lie_reduce(algebra, sub)
        rep.add("carrier_dim", red.carrier.dim)
        rep.add("kernel_dim", red.kernel.dim)
        rep.add("nondegenerate", str(red.nondegenerate).lower())
        rep.add("identity", "centralizer modulo its meet with the subspace")
        return rep
    if args.verb == "arnold":
        xi = _parse_xi(args.xi) if args.xi else np.array([0.0, 0.0, 2.0 * np.pi])
        report = la.arnold_counterexample(
            xi, args.t, args.trials or 1000, seed=args.seed, tolerance_scale=args.tolerance_scale
        )
        rep.add("samples", report.samples)
        rep.add("translation_distance", _fmt_float(report.translation_distance))
        rep.add("fixed_points_found", report.fixed_points_found)
        rep.add("identity", "left translation by a non-identity element has no fixed points")
        return rep
    if args.verb == "convexity":
        xi = _parse_xi(args.xi) if args.xi else np.array([1.0, 0.0, 0.0])
        report = la.convexity_counterexample(
            xi, args.trials or 1000, seed=args.seed, tolerance_scale=args.tolerance_scale
        )
        rep.add("samples", report.samples)
        rep.add("sphere_radius", _fmt_float(report.sphere_radius))
        rep.add("on_sphere", str(report.on_sphere).lower())
        rep.add("max_radius_error", f"{report.max_radius_error:.3e}")
        rep.add("midpoint_norm", _fmt_float(report.midpoint_norm))
        rep.add("midpoint_gap", _fmt_float(report.midpoint_gap))
        rep.add("identity", "the moment image is a sphere, so midpoints leave it")
        return rep
    raise ValidationError(f"unknown lie verb {args.verb!r}")


def _patch_from_name(name: str) -> ph.ExactPatch:
    if name in ("so3", "rigidbody"):
        return ph.so3_patch()
    if name.startswith("canonical:"):
        try:
            n, k = (int(t) for t in name.split(":", 1)[1].split(","))
        except ValueError as exc:
            raise ValidationError(f"bad patch spec {name!r}") from exc
        return ph.canonical_theta(n, k)
    raise ValidationError(f"unknown patch {name!r} (canonical:n,k, so3, rigidbody)")


def _patch_point(args, patch: ph.ExactPatch) -> np.ndarray:
    if args.point:
        pt = _parse_xi(args.point)
        if pt.size != patch.dim_m:
            raise ValidationError(
                f"point needs {patch.dim_m} coordinates for patch {patch.name}"
            )
        return pt
    return np.zeros(patch.dim_m)


def _patch_generators(patch: ph.ExactPatch):
    if patch.name in ("so3", "rigidbody"):
        return [ph.so3_left_generator(np.eye(3)[i]) for i in range(3)]
    n, k = patch.base_shape
    return [ph.translation_generator(n, k, i) for i in range(n)]


def cmd_ham(args) -> Report:
    from .exprs import compile_vector

    patch = _patch_from_name(args.patch)
    rep = Report(f"ham {args.verb} {args.patch}")
    x = _patch_point(args, patch)
    rep.add("point", ", ".join(_fmt_float(v) for v in x))
    if args.verb == "omega":
        omega = ph.omega_at(patch, x)
        for c in range(patch.dim_v):
            rep.add(f"omega_component_{c}", _fmt_float_matrix(omega[c]))
        rep.add("identity", "negative exterior derivative of the potential, skew by construction")
        return rep
    if args.verb == "field":
        if not args.function:
            raise ValidationError("ham field needs --function (one expression per value coordinate)")
        f = compile_vector(args.function, patch.dim_m)
        if len(args.function) != patch.dim_v:
            raise ValidationError(f"need {patch.dim_v} expressions for this patch")
        sol = ph.hamiltonian_field(patch, f, x, tolerance_scale=args.tolerance_scale)
        rep.add("field", ", ".join(_fmt_float(v) for v in sol.X))
        rep.add("residual", f"{sol.residual:.3e}")
        rep.add("threshold", f"{sol.threshold:.3e}")
        rep.add("rank", sol.rank)
        rep.add("degenerate", str(sol.degenerate).lower())
        rep.add("is_hamiltonian", str(sol.is_hamiltonian).lower())
        rep.add("identity", "minimal-norm solve of the contraction equation")
        return rep
    if args.verb == "bracket":
        if not args.function or not args.function2:
            raise ValidationError("ham bracket needs --function and --function2")
        f = compile_vector(args.function, patch.dim_m)
        g = compile_vector(args.function2, patch.dim_m)
        value = ph.poisson_bracket(patch, f, g, x, tolerance_scale=args.tolerance_scale)
        rep.add("bracket", ", ".join(_fmt_float(v) for v in value))
        rep.add("identity", "negative form value on the two structure gradients")
        return rep
    if args.verb == "moment":
        gens = _patch_generators(patch)
        mu = ph.moment_from_potential(
            patch, gens, sample_count=max(5, (args.trials or 20)), seed=args.seed,
            tolerance_scale=args.tolerance_scale,
        )
        val = mu(x)
        for i in range(val.shape[1]):
            rep.add(f"moment_column_{i}", ", ".join(_fmt_float(v) for v in val[:, i]))
        rep.add("preservation_defect", f"{mu.preservation_defect:.3e}")
        rep.add("identity_defect", f"{mu.identity_defect:.3e}")
        rep.add("identity", "potential contracted with the induced fields is a moment map")
        return rep
    if args.verb == "embed":
        emb = ph.local_embed(patch)
        pts = ph.halton_points(patch.dim_m, max(5, (args.trials or 10)), seed=args.seed,
                               scale=patch.sample_scale)
        worst = max(emb.pullback_defect(p) for p in pts)
        rep.add("target_patch", emb.target.name)
        rep.add("samples", len(pts))
        rep.add("max_pullback_defect", f"{worst:.3e}")
        rep.add("identity", "the potential graph pulls the canonical form back to the patch form")
        return rep
    raise ValidationError(f"unknown ham verb {args.verb!r}")


def _complex_from_args(args) -> dg.DeltaComplex:
    if getattr(args, "file", None):
        return docio.complex_to_delta(_load_document(args))
    name = args.builtin or "torus2"
    if name in dg.BUILTIN_COMPLEXES:
        return dg.BUILTIN_COMPLEXES[name]()
    raise ValidationError(f"unknown builtin complex {name!r}")


def _random_cocycle(cx: dg.DeltaComplex, rng, closed: bool = True) -> dg.Cochain:
    if closed:
        z1 = dg.cohomology(cx, 1).cocycles
        coeffs = [Fraction(rng.randint(-3, 3)) for _ in range(z1.dim)]
        return dg.Cochain(cx, 1, z1.basis.apply(coeffs))
    return dg.Cochain(cx, 1, [Fraction(rng.randint(-3, 3)) for _ in range(cx.count(1))])


def cmd_gauge(args) -> Report:
    import random as _random

    cx = _complex_from_args(args)
    rep = Report(f"gauge {args.verb} {args.builtin or args.file}")
    rep.add("cells", " ".join(str(c) for c in cx.counts))
    rng = _random.Random(args.seed)
    if args.verb == "betti":
        betti = " ".join(str(dg.cohomology(cx, p).betti) for p in range(cx.dimension + 1))
        rep.add("betti", betti)
        rep.add("identity", "cocycle rank minus coboundary rank per degree")
        return rep
    if args.verb == "omega":
        alpha = _random_cocycle(cx, rng)
        beta = _random_cocycle(cx, rng)
        coset = dg.omega_disc(cx, alpha, beta)
        rep.add("alpha", _fmt_vector(alpha.values))
        rep.add("beta", _fmt_vector(beta.values))
        rep.add("coset_coords", _fmt_vector(coset.coords))
        rep.add("representative", _fmt_vector(coset.representative.values))
        rep.add("form_kernel_dim", dg.omega_kernel(cx).dim)
        rep.add("identity", "cup value taken modulo coboundaries; kernel measured, not assumed")
        return rep
    if args.verb == "moment":
        a = _random_cocycle(cx, rng, closed=False)
        moment = dg.gauge_moment(cx, a)
        zero = dg.moment_zero_set(cx)
        rep.add("connection", _fmt_vector(a.values))
        rep.add("functional_matrix", _fmt_matrix(moment.matrix))
        rep.add("functional_zero", str(moment.is_zero()).lower())
        rep.add("zero_set_dim", zero.zero_set.dim)
        rep.add("cocycle_dim", zero.cocycles.dim)
        rep.add("zero_set_equals_cocycles", str(zero.equals_cocycles).lower())
        rep.add("moment_identity_exact", str(dg.check_gauge_moment_identity(cx)).lower())
        rep.add("identity", "curvature cupped with test functions, modulo coboundaries")
        return rep
    if args.verb == "reduce":
        red = dg.reduce_gauge(cx)
        rep.add("carrier_dim", red.carrier.betti)
        rep.add("target_dim", red.target.betti)
        for i, p in enumerate(red.pairing):
            rep.add(f"pairing_component_{i}", _fmt_matrix(p))
        if red.pairing:
            rep.add("pairing_kernel_dim", red.pairing_kernel().dim)
        rep.add("identity", "reduced space is first cohomology with the cup pairing into second")
        return rep
    if args.verb == "lagrangian":
        lag = dg.lagrangian_check(cx)
        rep.add("h2_trivial", str(lag.h2_trivial).lower())
        rep.add("z1_dim", lag.z1_dim)
        if lag.h2_trivial:
            rep.add("orthogonal_dim", lag.orthogonal_dim)
            rep.add("z1_is_lagrangian", str(lag.z1_is_lagrangian).lower())
        else:
            rep.add("z1_is_lagrangian", "skipped")
        rep.add("identity", "zero level set against its cup orthogonal when second cohomology vanishes")
        return rep
    raise ValidationError(f"unknown gauge verb {args.verb!r}")


def cmd_verify(args) -> Tuple[Report, bool]:
    result = run_suite(
        args.suite, seed=args.seed, trials=args.trials, tolerance_scale=args.tolerance_scale
    )
    rep = Report(f"verify {args.suite}")
    rep.add("identity", result.identity)
    rep.add("seed", result.seed)
    rep.add("trials", result.trials)
    passed = 0
    for c in result.checks:
        status = "pass" if c.passed else "FAIL"
        detail = f" ({c.detail})" if c.detail else ""
        rep.add(f"check[{c.name}]", status + detail)
        passed += c.passed
    rep.add("summary", f"{passed}/{len(result.checks)} pass")
    return rep, result.passed


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polysym",
        description="vector-valued symplectic computations: orthogonals, reductions, "
        "group counterexamples, patch Hamiltonians, and discrete gauge cohomology",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(p, with_subspace=False):
        p.add_argument("--file", help="problem document (JSON)")
        p.add_argument("--builtin", help="builtin problem name")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--machine", action="store_true", help="line-delimited key=value output")
        p.add_argument(
            "--tolerance-scale", dest="tolerance_scale", type=float, default=1.0,
            help="multiplies numeric tolerances (exact checks ignore it)",
        )
        if with_subspace:
            p.add_argument("--subspace", help="e1,e2 | full | zero | 1,0,0;0,1,0")

    for name in ("orth", "classify", "reduce"):
        p = sub.add_parser(name, help=f"{name} on a form document")
        common(p, with_subspace=True)
    p = sub.add_parser("embed", help="embedding of a form into the universal model")
    common(p)

    p = sub.add_parser("lie", help="Lie-algebra and rotation-group operations")
    p.add_argument("verb", choices=("center", "centralizer", "reduce", "arnold", "convexity"))
    common(p, with_subspace=True)
    p.add_argument("--xi", help="algebra vector, comma separated")
    p.add_argument("--t", type=float, default=0.5, help="translation time in full periods")

    p = sub.add_parser("ham", help="pointwise Hamiltonian operations on a patch")
    p.add_argument("verb", choices=("omega", "field", "bracket", "moment", "embed"))
    common(p)
    p.add_argument("--patch", default="canonical:1,1", help="canonical:n,k | so3 | rigidbody")
    p.add_argument("--point", help="patch coordinates, comma separated")
    p.add_argument("--function", action="append", help="value-coordinate expression (repeat)")
    p.add_argument("--function2", action="append", help="second function for bracket")

    p = sub.add_parser("gauge", help="discrete gauge operations on a complex")
    p.add_argument("verb", choices=("betti", "omega", "moment", "reduce", "lagrangian"))
    common(p)

    p = sub.add_parser("verify", help="run a named property suite")
    common(p)
    p.add_argument("--suite", required=True, help=", ".join(sorted(SUITES)))
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.cmd == "verify":
            rep, ok = cmd_verify(args)
            sys.stdout.write(rep.render(args.machine))
            return 0 if ok else 1
        handler = {
            "orth": cmd_orth,
            "classify": cmd_classify,
            "reduce": cmd_reduce,
            "embed": cmd_embed,
            "lie": cmd_lie,
            "ham": cmd_ham,
            "gauge": cmd_gauge,
        }[args.cmd]
        rep = handler(args)
        sys.stdout.write(rep.render(args.machine))
        return 0
    except ValidationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ContractViolation as exc:
        sys.stderr.write(f"contract violation: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())

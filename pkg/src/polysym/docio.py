"""Problem-document parsing and rendering.

Documents are JSON with a `kind` discriminator (form, lie, patch, complex).
Exact entries are decimal integers or "p/q" strings; rendering restores the
same shape, so parse-render round-trips to a fixpoint.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .discgauge import BUILTIN_COMPLEXES, DeltaComplex
from .errors import ValidationError
from .exactla import Matrix, Subspace
from .liealg import BUILTIN_ALGEBRAS, LieAlgebra
from .polycore import CoefficientMap, VForm

KINDS = ("form", "lie", "patch", "complex")


@dataclass(frozen=True)
class ProblemDocument:
    kind: str
    payload: dict
    seed: Optional[int] = None


def _parse_scalar(x) -> Fraction:
    if isinstance(x, bool):
        raise ValidationError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"bad scalar literal {x!r}") from exc
    raise ValidationError(f"bad scalar literal {x!r} (use integers or 'p/q' strings)")


def _render_scalar(x: Fraction):
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _parse_matrix(rows, what: str) -> Matrix:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ValidationError(f"{what} must be a non-empty nested array")
    return Matrix([[_parse_scalar(x) for x in row] for row in rows])


def _render_matrix(m: Matrix):
    return [[_render_scalar(x) for x in row] for row in m.entries]


def parse_document(text: str) -> ProblemDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed document: {exc}") from exc
    if not isinstance(raw, dict):
        raise ValidationError("document must be a JSON object")
    kind = raw.get("kind")
    if kind not in KINDS:
        raise ValidationError(f"unknown document kind {kind!r} (expected one of {KINDS})")
    seed = raw.get("seed")
    if seed is not None and not isinstance(seed, int):
        raise ValidationError("seed must be an integer")
    payload = {k: v for k, v in raw.items() if k not in ("kind", "seed")}
    _validate_payload(kind, payload)
    return ProblemDocument(kind=kind, payload=payload, seed=seed)


def _validate_payload(kind: str, payload: dict):
    if kind == "form":
        form_to_vform(ProblemDocument(kind, payload))
    elif kind == "lie":
        lie_to_algebra(ProblemDocument(kind, payload))
    elif kind == "complex":
        complex_to_delta(ProblemDocument(kind, payload))
    elif kind == "patch":
        name = payload.get("patch")
        if not isinstance(name, str):
            raise ValidationError("patch documents need a 'patch' name")


def render_document(doc: ProblemDocument) -> str:
    out = {"kind": doc.kind}
    out.update(doc.payload)
    if doc.seed is not None:
        out["seed"] = doc.seed
    return json.dumps(out, indent=2, sort_keys=False) + "\n"


def form_to_vform(doc: ProblemDocument) -> VForm:
    if doc.kind != "form":
        raise ValidationError("expected a form document")
    comps = doc.payload.get("form")
    if not isinstance(comps, list) or not comps:
        raise ValidationError("form documents need a non-empty 'form' list of matrices")
    matrices = [_parse_matrix(m, "form component") for m in comps]
    n = matrices[0].rows
    for m in matrices:
        if m.shape != (n, n):
            raise ValidationError("form components must be square of equal size")
        if not m.is_skew():
            raise ValidationError("form components must be skew-symmetric")
    return VForm(n, tuple(matrices))


def document_subspace(doc: ProblemDocument, ambient_dim: int) -> Optional[Subspace]:
    vecs = doc.payload.get("subspace")
    if vecs is None:
        return None
    if not isinstance(vecs, list):
        raise ValidationError("'subspace' must be a list of vectors")
    return Subspace.from_vectors(
        ambient_dim, [[_parse_scalar(x) for x in v] for v in vecs]
    )


def document_coefficient_map(doc: ProblemDocument) -> Optional[CoefficientMap]:
    rows = doc.payload.get("coefficient_map")
    if rows is None:
        return None
    return CoefficientMap(_parse_matrix(rows, "coefficient_map"))


def lie_to_algebra(doc: ProblemDocument) -> LieAlgebra:
    if doc.kind != "lie":
        raise ValidationError("expected a lie document")
    dim = doc.payload.get("dim")
    triples = doc.payload.get("triples")
    if not isinstance(dim, int) or dim < 1:
        raise ValidationError("lie documents need a positive integer 'dim'")
    if not isinstance(triples, list):
        raise ValidationError("lie documents need a 'triples' list of (i, j, k, c)")
    parsed = []
    for t in triples:
        if not isinstance(t, list) or len(t) != 4:
            raise ValidationError(f"bad structure triple {t!r}")
        i, j, k, c = t
        parsed.append((i, j, k, _parse_scalar(c)))
    return LieAlgebra.from_triples(dim, parsed)


def complex_to_delta(doc: ProblemDocument) -> DeltaComplex:
    if doc.kind != "complex":
        raise ValidationError("expected a complex document")
    raw = doc.payload.get("simplices")
    if not isinstance(raw, dict):
        raise ValidationError("complex documents need a 'simplices' object keyed by degree")
    simplices = {}
    for key, items in raw.items():
        try:
            p = int(key)
        except ValueError as exc:
            raise ValidationError(f"bad degree key {key!r}") from exc
        if not isinstance(items, list):
            raise ValidationError(f"degree {p} simplices must be a list")
        simplices[p] = [tuple(s) for s in items]
    faces_raw = doc.payload.get("faces")
    faces = None
    if faces_raw is not None:
        if not isinstance(faces_raw, dict):
            raise ValidationError("'faces' must be an object keyed by degree")
        faces = {int(k): [tuple(f) for f in v] for k, v in faces_raw.items()}
    return DeltaComplex(simplices, faces=faces)


# Builtin documents, rendered through the same schema the parser accepts.

def _cross_form_document() -> ProblemDocument:
    eps = {
        (0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1,
        (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1,
    }
    comps = [
        [[eps.get((i, j, k), 0) for k in range(3)] for j in range(3)]
        for i in range(3)
    ]
    return ProblemDocument(kind="form", payload={"form": comps}, seed=0)


def _canonical_form_document(n: int, k: int) -> ProblemDocument:
    from .polycore import canonical_model

    form = canonical_model(n, k)
    comps = [_render_matrix(m) for m in form.components]
    return ProblemDocument(kind="form", payload={"form": comps}, seed=0)


def _lie_document(name: str) -> ProblemDocument:
    triples = {
        "so3": [[1, 2, 3, 1], [2, 3, 1, 1], [3, 1, 2, 1]],
        "sl2": [[1, 2, 2, 2], [1, 3, 3, -2], [2, 3, 1, 1]],
        "heisenberg": [[1, 2, 3, 1]],
    }[name]
    return ProblemDocument(kind="lie", payload={"dim": 3, "triples": triples}, seed=0)


def _complex_document(name: str) -> ProblemDocument:
    cx = BUILTIN_COMPLEXES[name]()
    simplices = {str(p): [list(s) for s in cx.simplices[p]] for p in sorted(cx.simplices)}
    payload = {"simplices": simplices}
    if cx.explicit_faces:
        payload["faces"] = {str(p): [list(f) for f in cx.faces[p]] for p in sorted(cx.faces)}
    return ProblemDocument(kind="complex", payload=payload, seed=0)


def builtin_documents() -> dict:
    docs = {
        "cross": _cross_form_document(),
        "canonical:1,1": _canonical_form_document(1, 1),
        "canonical:2,2": _canonical_form_document(2, 2),
    }
    for name in BUILTIN_ALGEBRAS:
        docs[name] = _lie_document(name)
    for name in BUILTIN_COMPLEXES:
        docs[name] = _complex_document(name)
    return docs


def resolve_builtin(name: str) -> ProblemDocument:
    if name.startswith("canonical:"):
        try:
            n, k = (int(t) for t in name.split(":", 1)[1].split(","))
        except ValueError as exc:
            raise ValidationError(f"bad canonical form spec {name!r}") from exc
        return _canonical_form_document(n, k)
    docs = builtin_documents()
    if name not in docs:
        raise ValidationError(f"unknown builtin {name!r}")
    return docs[name]

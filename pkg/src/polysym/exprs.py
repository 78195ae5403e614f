"""Tiny safe evaluator for the numeric function specs the CLI accepts.

Expressions use coordinates x0, x1, ... plus arithmetic and a few math
functions; they are compiled through the ast whitelist below, never eval'd
raw.
"""

from __future__ import annotations

import ast
import math
from typing import Callable, Sequence

import numpy as np

from .errors import ValidationError

_ALLOWED_CALLS = {"sin": math.sin, "cos": math.cos, "exp": math.exp, "tanh": math.tanh}
_ALLOWED_NODES = (
    ast.Expression, ast.BinOp, ast.UnaryOp, ast.Constant, ast.Name, ast.Call,
    ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.USub, ast.UAdd, ast.Load,
)


def _check(node: ast.AST, dim: int):
    if not isinstance(node, _ALLOWED_NODES):
        raise ValidationError(f"disallowed syntax in expression: {type(node).__name__}")
    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in _ALLOWED_CALLS:
            raise ValidationError("only sin, cos, exp, tanh calls are allowed")
        if node.keywords or len(node.args) != 1:
            raise ValidationError("math calls take exactly one positional argument")
    if isinstance(node, ast.Name) and node.id not in _ALLOWED_CALLS:
        if not (node.id.startswith("x") and node.id[1:].isdigit()):
            raise ValidationError(f"unknown name {node.id!r} (coordinates are x0, x1, ...)")
        if int(node.id[1:]) >= dim:
            raise ValidationError(f"coordinate {node.id} is out of range for dimension {dim}")
    if isinstance(node, ast.Constant) and not isinstance(node.value, (int, float)):
        raise ValidationError("only numeric constants are allowed")
    for child in ast.iter_child_nodes(node):
        _check(child, dim)


def compile_scalar(expr: str, dim: int) -> Callable[[np.ndarray], float]:
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise ValidationError(f"bad expression {expr!r}: {exc}") from exc
    _check(tree, dim)
    code = compile(tree, "<expr>", "eval")

    def fn(x: np.ndarray) -> float:
        env = {f"x{i}": float(x[i]) for i in range(dim)}
        env.update(_ALLOWED_CALLS)
        return float(eval(code, {"__builtins__": {}}, env))

    return fn


def compile_vector(exprs: Sequence[str], dim: int) -> Callable[[np.ndarray], np.ndarray]:
    fns = [compile_scalar(e, dim) for e in exprs]

    def fn(x: np.ndarray) -> np.ndarray:
        return np.array([f(x) for f in fns])

    return fn

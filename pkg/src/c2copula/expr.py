"""Closed expression grammar for one-variable factors of product generators.

Accepted: the variable ``x``, numeric literals, ``pi``, the binary operators
``+ - * /``, unary ``+``/``-``, and calls to ``sin``, ``cos``, ``sqrt``, ``abs``
with one argument. Anything else is rejected at parse time; nothing is
``eval``-ed.
"""
from __future__ import annotations

import ast
import math
from typing import Callable

import numpy as np

__all__ = ["ExpressionError", "compile_expression"]

_FUNCS = {"sin": np.sin, "cos": np.cos, "sqrt": np.sqrt, "abs": np.abs}
_BINOPS = {ast.Add: np.add, ast.Sub: np.subtract, ast.Mult: np.multiply, ast.Div: np.divide}


class ExpressionError(ValueError):
    pass


def _build(node) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(node, ast.Expression):
        return _build(node.body)
    if isinstance(node, ast.Constant) and type(node.value) in (int, float):
        val = float(node.value)
        return lambda x: np.full_like(x, val, dtype=float)
    if isinstance(node, ast.Name):
        if node.id == "x":
            return lambda x: np.asarray(x, dtype=float)
        if node.id == "pi":
            return lambda x: np.full_like(x, math.pi, dtype=float)
        raise ExpressionError(f"unknown name {node.id!r}")
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        op, lhs, rhs = _BINOPS[type(node.op)], _build(node.left), _build(node.right)
        return lambda x: op(lhs(x), rhs(x))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _build(node.operand)
        if isinstance(node.op, ast.USub):
            return lambda x: -inner(x)
        return inner
    if isinstance(node, ast.Call):
        if not (isinstance(node.func, ast.Name) and node.func.id in _FUNCS):
            raise ExpressionError("only sin, cos, sqrt and abs may be called")
        if len(node.args) != 1 or node.keywords:
            raise ExpressionError(f"{node.func.id} takes exactly one argument")
        fn, arg = _FUNCS[node.func.id], _build(node.args[0])
        return lambda x: fn(arg(x))
    raise ExpressionError(f"unsupported syntax: {ast.dump(node)[:60]}")


def compile_expression(src: str) -> Callable[[np.ndarray], np.ndarray]:
    """Turn e.g. ``"0.5*sin(2*pi*x)"`` into a vectorised function of x."""
    if not isinstance(src, str) or not src.strip():
        raise ExpressionError("expression must be a non-empty string")
    try:
        tree = ast.parse(src.strip(), mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {src!r}: {exc.msg}") from None
    fn = _build(tree)

    def f(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(all="ignore"):
            return np.broadcast_to(fn(x), x.shape)

    return f

"""A minimal arithmetic grammar for obstacle functions over coordinates.

Supported: numeric constants, + - *, unary minus, and the calls
re(), im(), abs(), log(), max() applied to coordinate names z1..zN.
Anything else is rejected; this is deliberately not a scripting hook.
"""

from __future__ import annotations

import ast

import numpy as np

from .domains import Obstacle
from .errors import ConfigurationError

_FUNCS = {
    "re": np.real,
    "im": np.imag,
    "abs": np.abs,
    "log": np.log,
    "max": np.maximum,
}


def _compile_node(node, n):
    if isinstance(node, ast.Expression):
        return _compile_node(node.body, n)
    if isinstance(node, ast.Constant):
        if not isinstance(node.value, (int, float)):
            raise ConfigurationError(
                f"obstacle expression: unsupported constant {node.value!r}")
        v = float(node.value)
        return lambda pts: v
    if isinstance(node, ast.Name):
        name = node.id
        if not (name.startswith("z") and name[1:].isdigit()):
            raise ConfigurationError(
                f"obstacle expression: unknown name {name!r}")
        idx = int(name[1:]) - 1
        if not 0 <= idx < n:
            raise ConfigurationError(
                f"obstacle expression: coordinate {name} out of range for C^{n}")
        return lambda pts: pts[..., idx]
    if isinstance(node, ast.UnaryOp):
        inner = _compile_node(node.operand, n)
        if isinstance(node.op, ast.USub):
            return lambda pts: -inner(pts)
        if isinstance(node.op, ast.UAdd):
            return inner
        raise ConfigurationError("obstacle expression: unsupported unary op")
    if isinstance(node, ast.BinOp):
        left = _compile_node(node.left, n)
        right = _compile_node(node.right, n)
        if isinstance(node.op, ast.Add):
            return lambda pts: left(pts) + right(pts)
        if isinstance(node.op, ast.Sub):
            return lambda pts: left(pts) - right(pts)
        if isinstance(node.op, ast.Mult):
            return lambda pts: left(pts) * right(pts)
        raise ConfigurationError(
            "obstacle expression: only +, - and * are allowed")
    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCS:
            raise ConfigurationError(
                "obstacle expression: only re/im/abs/log/max calls allowed")
        if node.keywords:
            raise ConfigurationError(
                "obstacle expression: keyword arguments not allowed")
        fn = _FUNCS[node.func.id]
        args = [_compile_node(a, n) for a in node.args]
        if node.func.id == "max":
            if len(args) != 2:
                raise ConfigurationError(
                    "obstacle expression: max takes exactly two arguments")
            return lambda pts: fn(args[0](pts), args[1](pts))
        if len(args) != 1:
            raise ConfigurationError(
                f"obstacle expression: {node.func.id} takes one argument")
        return lambda pts: fn(args[0](pts))
    raise ConfigurationError(
        f"obstacle expression: unsupported syntax {type(node).__name__}")


def compile_expression(text, n):
    """Compile an expression string into a vectorised points -> real function."""
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ConfigurationError(f"obstacle expression: {exc}") from exc
    fn = _compile_node(tree, n)

    def evaluate(pts):
        return np.real(fn(np.asarray(pts, dtype=complex)))

    return evaluate


def obstacle_from_expression(text, n, rotation_invariant_last=False,
                             lower_bound=-np.inf, upper_bound=np.inf):
    return Obstacle(compile_expression(text, n), description=text,
                    rotation_invariant_last=rotation_invariant_last,
                    lower_bound=lower_bound, upper_bound=upper_bound)

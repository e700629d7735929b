"""A small arithmetic language for closed-form inputs in scenario files.

Expressions are parsed with :mod:`ast` and only a whitelist of node types
is accepted.  Variables:

* ``a``, ``ahat`` -- the Lorentz coordinate and its conjugate,
* ``sigma`` -- the unit with ``sigma**2 = 1``,
* ``s``, ``t``, ``u``, ``v`` -- real coordinates (``a = u + sigma v``,
  ``s = u + v``, ``t = u - v``),
* ``pi``, ``e``.

Evaluation happens separately on the two idempotent components, where
``a``, ``ahat`` and ``sigma`` become real numbers, so any function in the
list below extends to Lorentz numbers in the natural way.
"""
from __future__ import annotations

import ast
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import LorentzNum

__all__ = ["Expr", "ExprError", "parse", "FUNCTIONS"]

FUNCTIONS: dict[str, Callable] = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "tanh": np.tanh,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
}
VARIABLES = {"a", "ahat", "sigma", "s", "t", "u", "v"}
CONSTANTS = {"pi": float(np.pi), "e": float(np.e)}

_BINOPS = {
    ast.Add: np.add,
    ast.Sub: np.subtract,
    ast.Mult: np.multiply,
    ast.Div: np.divide,
    ast.Pow: np.power,
}


class ExprError(ValueError):
    pass


def _check(node: ast.AST, names: set):
    if isinstance(node, ast.Expression):
        _check(node.body, names)
    elif isinstance(node, ast.BinOp):
        if type(node.op) not in _BINOPS:
            raise ExprError(f"operator {type(node.op).__name__} is not allowed")
        _check(node.left, names)
        _check(node.right, names)
    elif isinstance(node, ast.UnaryOp):
        if not isinstance(node.op, (ast.UAdd, ast.USub)):
            raise ExprError(f"operator {type(node.op).__name__} is not allowed")
        _check(node.operand, names)
    elif isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
            raise ExprError(f"constant {node.value!r} is not a number")
    elif isinstance(node, ast.Name):
        if node.id not in VARIABLES and node.id not in CONSTANTS:
            raise ExprError(f"unknown name {node.id!r}")
        names.add(node.id)
    elif isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS:
            raise ExprError("only calls to " + ", ".join(sorted(FUNCTIONS)) + " are allowed")
        if len(node.args) != 1 or node.keywords:
            raise ExprError(f"{node.func.id} takes exactly one argument")
        _check(node.args[0], names)
    else:
        raise ExprError(f"syntax {type(node).__name__} is not allowed")


def _eval(node: ast.AST, env: dict):
    if isinstance(node, ast.Expression):
        return _eval(node.body, env)
    if isinstance(node, ast.BinOp):
        return _BINOPS[type(node.op)](_eval(node.left, env), _eval(node.right, env))
    if isinstance(node, ast.UnaryOp):
        x = _eval(node.operand, env)
        return -x if isinstance(node.op, ast.USub) else x
    if isinstance(node, ast.Constant):
        return float(node.value)
    if isinstance(node, ast.Name):
        return env[node.id] if node.id in env else CONSTANTS[node.id]
    return FUNCTIONS[node.func.id](_eval(node.args[0], env))


@dataclass(frozen=True)
class Expr:
    source: str
    tree: ast.Expression
    names: frozenset

    @property
    def conformal(self) -> bool:
        """True when the expression depends on ``a`` (and constants) only."""
        return not (self.names & {"ahat", "s", "t", "u", "v"})

    def component(self, sign: int, a, ahat, s, t, u, v):
        env = {"a": a, "ahat": ahat, "sigma": float(sign), "s": s, "t": t, "u": u, "v": v}
        with np.errstate(all="ignore"):
            out = _eval(self.tree, env)
        return np.asarray(out, dtype=float)

    def __call__(self, a: LorentzNum) -> LorentzNum:
        """Evaluate at Lorentz-valued points ``a``."""
        a = a if isinstance(a, LorentzNum) else LorentzNum(a, 0.0)
        s, t = np.asarray(a.plus, float), np.asarray(a.minus, float)
        u, v = np.asarray(a.u, float), np.asarray(a.v, float)
        plus = self.component(+1, s, t, s, t, u, v)
        minus = self.component(-1, t, s, s, t, u, v)
        shape = np.broadcast_shapes(s.shape, plus.shape, minus.shape)
        plus, minus = np.broadcast_to(plus, shape), np.broadcast_to(minus, shape)
        if not (np.all(np.isfinite(plus)) and np.all(np.isfinite(minus))):
            raise ExprError(f"{self.source!r} is not finite on the grid")
        return LorentzNum.from_split(plus, minus)

    def profiles(self):
        """``(plus, minus)`` one-variable callables of a conformal expression."""
        if not self.conformal:
            raise ExprError(f"{self.source!r} is not conformal: it may only depend on a")

        def plus(x):
            x = np.asarray(x, float)
            return np.broadcast_to(self.component(+1, x, x, x, x, x, 0 * x), x.shape)

        def minus(x):
            x = np.asarray(x, float)
            return np.broadcast_to(self.component(-1, x, x, x, x, x, 0 * x), x.shape)

        return plus, minus


def parse(source) -> Expr:
    if isinstance(source, (int, float)) and not isinstance(source, bool):
        source = repr(float(source))
    if not isinstance(source, str):
        raise ExprError(f"expected an expression string, got {type(source).__name__}")
    try:
        tree = ast.parse(source.strip(), mode="eval")
    except SyntaxError as exc:
        raise ExprError(f"cannot parse {source!r}: {exc.msg}") from None
    names: set = set()
    _check(tree, names)
    return Expr(source, tree, frozenset(names))

# app/expr/schemas/nodes.py
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Union

import numpy as np

from app.errors import ExprEvalError

Value = Union[float, np.ndarray]

BINARY_OPS = ("+", "-", "*", "/", "^")
FUNCTIONS: Dict[str, Callable[[Value], Value]] = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "log": np.log,
    "abs": np.abs,
    "sqrt": np.sqrt,
}


class Expr:
    """Immutable scalar expression tree.

    `offset` is the byte offset of the node in the parsed source (-1 for nodes
    built by diff / folding); it is excluded from equality.
    """

    offset: int

    def _eval(self, env: Dict[str, Value]) -> Value:
        raise NotImplementedError

    def to_source(self) -> str:
        raise NotImplementedError

    def free_variables(self) -> FrozenSet[str]:
        raise NotImplementedError

    def _checked(self, value: Value) -> Value:
        if not np.all(np.isfinite(value)):
            raise ExprEvalError(self.offset, "non-finite result", self.to_source())
        return value

    def __str__(self) -> str:
        return self.to_source()


@dataclass(frozen=True, eq=True)
class Const(Expr):
    value: float
    offset: int = field(default=-1, compare=False)

    def _eval(self, env):
        return np.float64(self.value)

    def to_source(self) -> str:
        if self.value < 0 or (self.value == 0 and np.signbit(self.value)):
            return f"(-{repr(-float(self.value))})"
        return repr(float(self.value))

    def free_variables(self):
        return frozenset()


@dataclass(frozen=True, eq=True)
class Var(Expr):
    name: str
    offset: int = field(default=-1, compare=False)

    def _eval(self, env):
        return env[self.name]

    def to_source(self) -> str:
        return self.name

    def free_variables(self):
        return frozenset({self.name})


@dataclass(frozen=True, eq=True)
class Neg(Expr):
    operand: Expr
    offset: int = field(default=-1, compare=False)

    def _eval(self, env):
        return -self.operand._eval(env)

    def to_source(self) -> str:
        return f"(-{self.operand.to_source()})"

    def free_variables(self):
        return self.operand.free_variables()


@dataclass(frozen=True, eq=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr
    offset: int = field(default=-1, compare=False)

    def _eval(self, env):
        a = self.left._eval(env)
        b = self.right._eval(env)
        try:
            if self.op == "+":
                out = a + b
            elif self.op == "-":
                out = a - b
            elif self.op == "*":
                out = a * b
            elif self.op == "/":
                out = np.divide(a, b)
            else:
                out = np.power(a, b)
        except FloatingPointError as e:
            raise ExprEvalError(self.offset, f"domain error ({e})", self.to_source()) from e
        return self._checked(out)

    def to_source(self) -> str:
        return f"({self.left.to_source()} {self.op} {self.right.to_source()})"

    def free_variables(self):
        return self.left.free_variables() | self.right.free_variables()


@dataclass(frozen=True, eq=True)
class Call(Expr):
    func: str
    arg: Expr
    offset: int = field(default=-1, compare=False)

    def _eval(self, env):
        a = self.arg._eval(env)
        try:
            out = FUNCTIONS[self.func](a)
        except FloatingPointError as e:
            raise ExprEvalError(self.offset, f"domain error ({e})", self.to_source()) from e
        return self._checked(out)

    def to_source(self) -> str:
        return f"{self.func}({self.arg.to_source()})"

    def free_variables(self):
        return self.arg.free_variables()


ZERO = Const(0.0)
ONE = Const(1.0)

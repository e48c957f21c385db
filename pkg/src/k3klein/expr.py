"""Named coordinate spaces and a small linear-expression evaluator."""

from __future__ import annotations

import ast
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .lattice import Lattice
from .linalg import Matrix

Vector = tuple[Fraction, ...]


class UnknownSymbol(KeyError):
    pass


class Space:
    """A lattice on named coordinates together with a table of named vectors.

    Coordinates are themselves symbols; further symbols (glue vectors,
    images of symbols under maps) are added with :meth:`define`.
    """

    def __init__(self, name: str, coords: Sequence[str], gram: Matrix):
        if len(set(coords)) != len(coords):
            raise ValueError(f"{name}: duplicate coordinate names")
        self.name = name
        self.coords = tuple(coords)
        self.lattice = Lattice(gram, name)
        self.index = {c: i for i, c in enumerate(self.coords)}
        self.symbols: dict[str, Vector] = {}
        self.order: list[str] = []
        for i, c in enumerate(self.coords):
            self._store(c, tuple(Fraction(int(i == j)) for j in range(len(coords))))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def _store(self, name: str, v: Vector):
        if name not in self.symbols:
            self.order.append(name)
        self.symbols[name] = v

    def define(self, name: str, value: str | Sequence) -> Vector:
        v = self.parse(value) if isinstance(value, str) else tuple(Fraction(c) for c in value)
        if len(v) != self.dim:
            raise ValueError(f"{self.name}.{name}: wrong vector length")
        if name in self.index:
            raise ValueError(f"{self.name}: cannot redefine coordinate {name}")
        self._store(name, v)
        return v

    def __getitem__(self, name: str) -> Vector:
        try:
            return self.symbols[name]
        except KeyError:
            raise UnknownSymbol(f"{self.name}: unknown symbol {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.symbols

    def parse(self, text: str) -> Vector:
        return _Evaluator(self).run(text)

    def vector(self, terms: Mapping[str, int | Fraction]) -> Vector:
        out = [Fraction(0)] * self.dim
        for name, c in terms.items():
            for i, x in enumerate(self[name]):
                out[i] += c * x
        return tuple(out)

    def pair(self, u: Sequence, v: Sequence) -> Fraction:
        return self.lattice.gram.bilinear(u, v)

    def square(self, u: Sequence) -> Fraction:
        return self.lattice.gram.bilinear(u, u)

    def format(self, v: Sequence) -> str:
        """Render a coordinate vector as a linear combination of coordinates."""
        parts = []
        for c, x in zip(self.coords, v):
            x = Fraction(x)
            if x == 0:
                continue
            sign = "-" if x < 0 else "+"
            a = abs(x)
            coef = "" if a == 1 else f"{a}*"
            parts.append(f"{sign}{coef}{c}")
        if not parts:
            return "0"
        s = "".join(parts)
        return s[1:] if s[0] == "+" else s

    def symbol_table(self) -> dict[str, list[str]]:
        return {n: [str(x) for x in self.symbols[n]] for n in self.order}


class _Evaluator(ast.NodeVisitor):
    def __init__(self, space: Space):
        self.space = space

    def run(self, text: str) -> Vector:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
        val = self.visit(tree.body)
        if val == 0 and not isinstance(val, tuple):
            return (Fraction(0),) * self.space.dim  # "0" is what format prints for the zero vector
        if not isinstance(val, tuple):
            raise ValueError(f"expression {text!r} is a scalar, not a vector")
        return val

    def visit_Name(self, node):
        return self.space[node.id]

    def visit_Constant(self, node):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise ValueError(f"unsupported literal {node.value!r}")
        return Fraction(node.value)

    def visit_UnaryOp(self, node):
        v = self.visit(node.operand)
        if isinstance(node.op, ast.USub):
            return _scale(v, -1) if isinstance(v, tuple) else -v
        if isinstance(node.op, ast.UAdd):
            return v
        raise ValueError("unsupported unary operator")

    def visit_BinOp(self, node):
        a, b = self.visit(node.left), self.visit(node.right)
        va, vb = isinstance(a, tuple), isinstance(b, tuple)
        op = node.op
        if isinstance(op, (ast.Add, ast.Sub)):
            if va != vb:
                raise ValueError("cannot add a scalar to a vector")
            if not va:
                return a + b if isinstance(op, ast.Add) else a - b
            sgn = 1 if isinstance(op, ast.Add) else -1
            return tuple(x + sgn * y for x, y in zip(a, b))
        if isinstance(op, ast.Mult):
            if va and vb:
                raise ValueError("cannot multiply two vectors")
            if va:
                return _scale(a, b)
            if vb:
                return _scale(b, a)
            return a * b
        if isinstance(op, ast.Div):
            if vb:
                raise ValueError("cannot divide by a vector")
            return _scale(a, 1 / b) if va else a / b
        raise ValueError("unsupported operator")

    def generic_visit(self, node):
        raise ValueError(f"unsupported syntax: {type(node).__name__}")


def _scale(v: Vector, c) -> Vector:
    return tuple(c * x for x in v)


def add(*vs: Sequence) -> Vector:
    return tuple(sum(xs, Fraction(0)) for xs in zip(*vs))


def scale(v: Sequence, c) -> Vector:
    return tuple(Fraction(c) * x for x in v)


def is_integral_vector(v: Iterable) -> bool:
    return all(Fraction(x).denominator == 1 for x in v)

"""Expression AST nodes and round-trip stable printing.

Node equality is structural (frozen dataclasses), so ``parse(print_expr(e))
== e`` can be checked node-for-node.
"""
from __future__ import annotations

from dataclasses import dataclass

FUNCTIONS = ("exp", "log", "sin", "cos", "sqrt", "abs")

BINARY_OPS = ("+", "-", "*", "/", "^")


class Node:
    __slots__ = ()


@dataclass(frozen=True)
class Constant(Node):
    value: float


@dataclass(frozen=True)
class Variable(Node):
    name: str


@dataclass(frozen=True)
class Neg(Node):
    operand: Node


@dataclass(frozen=True)
class Call(Node):
    func: str
    arg: Node


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class Expression:
    """A parsed model expression; ``root`` is the AST."""

    root: Node

    def variables(self) -> tuple[str, ...]:
        """Variable names referenced, in first-appearance order."""
        seen: dict[str, None] = {}

        def walk(node: Node) -> None:
            if isinstance(node, Variable):
                seen.setdefault(node.name)
            elif isinstance(node, Neg):
                walk(node.operand)
            elif isinstance(node, Call):
                walk(node.arg)
            elif isinstance(node, BinOp):
                walk(node.left)
                walk(node.right)

        walk(self.root)
        return tuple(seen)

    def __str__(self) -> str:
        return print_expr(self)


# Precedence levels used by both the parser and the printer.
# pow binds tighter than unary minus, which binds tighter than mul/div.
_PREC_ADD = 1
_PREC_MUL = 2
_PREC_NEG = 3
_PREC_POW = 4
_PREC_ATOM = 5


def _prec(node: Node) -> int:
    if isinstance(node, BinOp):
        if node.op in ("+", "-"):
            return _PREC_ADD
        if node.op in ("*", "/"):
            return _PREC_MUL
        return _PREC_POW
    if isinstance(node, Neg):
        return _PREC_NEG
    return _PREC_ATOM


def _render(node: Node, min_prec: int) -> str:
    if isinstance(node, Constant):
        text = repr(float(node.value))
        # negative literals only arise from programmatic construction;
        # keep them parseable by parenthesizing
        return f"({text})" if node.value < 0 else text
    if isinstance(node, Variable):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({_render(node.arg, _PREC_ADD)})"
    if isinstance(node, Neg):
        text = "-" + _render(node.operand, _PREC_NEG)
    elif isinstance(node, BinOp) and node.op == "^":
        # right-associative: left operand must be an atom
        text = _render(node.left, _PREC_ATOM) + "^" + _render(node.right, _PREC_NEG)
    elif isinstance(node, BinOp):
        level = _PREC_ADD if node.op in ("+", "-") else _PREC_MUL
        # left-associative: parenthesize same-level right operands
        text = (
            _render(node.left, level)
            + node.op
            + _render(node.right, level + 1)
        )
    else:  # pragma: no cover - exhaustive above
        raise TypeError(f"unknown node type {type(node)!r}")
    if _prec(node) < min_prec:
        return f"({text})"
    return text


def print_expr(expr: Expression | Node) -> str:
    """Serialize an AST back to source text; inverse of ``parse`` on its image."""
    root = expr.root if isinstance(expr, Expression) else expr
    return _render(root, _PREC_ADD)

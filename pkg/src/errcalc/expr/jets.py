"""Exact second-order forward differentiation of expression ASTs.

Every node rule builds the Hessian from symmetric pieces (outer-product
pairs, scalar multiples of symmetric matrices), so the result is symmetric
to exact representation equality without any after-the-fact symmetrization.
"""
from __future__ import annotations

import math
import warnings
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from ..exceptions import DomainError, NonDifferentiableWarning, ValidationError
from .nodes import BinOp, Call, Constant, Expression, Neg, Node, Variable, print_expr


@dataclass(frozen=True)
class SecondOrderJet:
    """Value, gradient and symmetric Hessian of a scalar quantity."""

    value: float
    gradient: np.ndarray
    hessian: np.ndarray

    def __post_init__(self):
        self.gradient.setflags(write=False)
        self.hessian.setflags(write=False)


def _domain_error(node: Node, message: str) -> DomainError:
    return DomainError(f"{message} in {print_expr(node)!r}")


def _is_constant(node: Node) -> bool:
    if isinstance(node, Constant):
        return True
    if isinstance(node, Variable):
        return False
    if isinstance(node, Neg):
        return _is_constant(node.operand)
    if isinstance(node, Call):
        return _is_constant(node.arg)
    return _is_constant(node.left) and _is_constant(node.right)


def _jet(node: Node, env: Mapping[str, int], x: np.ndarray, n: int):
    if isinstance(node, Constant):
        return node.value, np.zeros(n), np.zeros((n, n))
    if isinstance(node, Variable):
        g = np.zeros(n)
        g[env[node.name]] = 1.0
        return x[env[node.name]], g, np.zeros((n, n))
    if isinstance(node, Neg):
        v, g, h = _jet(node.operand, env, x, n)
        return -v, -g, -h
    if isinstance(node, Call):
        v, g, h = _jet(node.arg, env, x, n)
        return _call_jet(node, v, g, h)
    if isinstance(node, BinOp):
        if node.op == "^":
            return _pow_jet(node, env, x, n)
        lv, lg, lh = _jet(node.left, env, x, n)
        rv, rg, rh = _jet(node.right, env, x, n)
        if node.op == "+":
            return lv + rv, lg + rg, lh + rh
        if node.op == "-":
            return lv - rv, lg - rg, lh - rh
        if node.op == "*":
            h = lv * rh + rv * lh + np.outer(lg, rg) + np.outer(rg, lg)
            return lv * rv, lv * rg + rv * lg, h
        if node.op == "/":
            if rv == 0.0:
                raise _domain_error(node, "division by zero")
            g = lg / rv - lv * rg / rv**2
            cross = np.outer(lg, rg) + np.outer(rg, lg)
            h = lh / rv - cross / rv**2 - lv * rh / rv**2 + (
                2.0 * lv / rv**3
            ) * np.outer(rg, rg)
            return lv / rv, g, h
    raise TypeError(f"unknown node type {type(node)!r}")  # pragma: no cover


def _call_jet(node: Call, v, g, h):
    if node.func == "exp":
        f = math.exp(v)
        return f, f * g, f * (np.outer(g, g) + h)
    if node.func == "log":
        if v <= 0.0:
            raise _domain_error(node, f"log of non-positive value {v!r}")
        return math.log(v), g / v, h / v - np.outer(g, g) / v**2
    if node.func == "sin":
        s, c = math.sin(v), math.cos(v)
        return s, c * g, c * h - s * np.outer(g, g)
    if node.func == "cos":
        s, c = math.sin(v), math.cos(v)
        return c, -s * g, -s * h - c * np.outer(g, g)
    if node.func == "sqrt":
        if v < 0.0:
            raise _domain_error(node, f"sqrt of negative value {v!r}")
        if v == 0.0:
            raise _domain_error(node, "sqrt has an infinite derivative at 0")
        r = math.sqrt(v)
        return r, g / (2.0 * r), h / (2.0 * r) - np.outer(g, g) / (4.0 * r**3)
    if node.func == "abs":
        if v == 0.0:
            warnings.warn(
                f"abs evaluated at 0 in {print_expr(node)!r}: not differentiable, "
                "reporting zero gradient",
                NonDifferentiableWarning,
                stacklevel=4,
            )
            s = 0.0
        else:
            s = math.copysign(1.0, v)
        # away from 0, abs contributes sign(x) gradient and no curvature of
        # its own
        return abs(v), s * g, s * h
    raise TypeError(f"unknown function {node.func!r}")  # pragma: no cover


def _pow_jet(node: BinOp, env, x, n):
    uv, ug, uh = _jet(node.left, env, x, n)
    if _is_constant(node.right):
        c, _, _ = _jet(node.right, env, x, n)
        return _const_pow_jet(node, uv, ug, uh, c, n)
    wv, wg, wh = _jet(node.right, env, x, n)
    if uv <= 0.0:
        raise _domain_error(
            node, f"base {uv!r} must be positive for a non-constant exponent"
        )
    # u^w = exp(w log u)
    log_u = math.log(uv)
    f = math.exp(wv * log_u)
    # gradient of s = w log u
    sg = wg * log_u + (wv / uv) * ug
    sh = (
        wh * log_u
        + (np.outer(wg, ug) + np.outer(ug, wg)) / uv
        + (wv / uv) * uh
        - (wv / uv**2) * np.outer(ug, ug)
    )
    return f, f * sg, f * (np.outer(sg, sg) + sh)


def _const_pow_jet(node, uv, ug, uh, c, n):
    if c == 0.0:
        return 1.0, np.zeros(n), np.zeros((n, n))
    if uv < 0.0 and c != round(c):
        raise _domain_error(
            node, f"negative base {uv!r} with non-integer exponent {c!r}"
        )
    if uv == 0.0 and c < 0.0:
        raise _domain_error(node, f"zero base with negative exponent {c!r}")
    value = uv**c
    if uv == 0.0:
        # x^c at 0: derivative is 0 for c > 1, value rule for c == 1
        d1 = 1.0 if c == 1.0 else (0.0 if c > 1.0 else math.inf)
        d2 = 2.0 if c == 2.0 else (0.0 if c > 2.0 or c == 1.0 else math.inf)
        if not (math.isfinite(d1) and math.isfinite(d2)):
            raise _domain_error(
                node, f"derivative of x^{c!r} is unbounded at x = 0"
            )
    else:
        d1 = c * uv ** (c - 1.0)
        d2 = c * (c - 1.0) * uv ** (c - 2.0)
    return value, d1 * ug, d2 * np.outer(ug, ug) + d1 * uh


def jet(
    expr: Expression | Node,
    point: Mapping[str, float],
    variables: Sequence[str] | None = None,
) -> SecondOrderJet:
    """Value, gradient and Hessian of ``expr`` at a named point.

    ``variables`` fixes the coordinate order of the gradient/Hessian;
    it defaults to the sorted point names.
    """
    root = expr.root if isinstance(expr, Expression) else expr
    names = tuple(variables) if variables is not None else tuple(sorted(point))
    env = {name: i for i, name in enumerate(names)}
    referenced = Expression(root).variables()
    for name in referenced:
        if name not in env:
            raise ValidationError(f"unbound variable {name!r}")
        if name not in point:
            raise ValidationError(f"no value given for variable {name!r}")
    x = np.array([float(point.get(name, 0.0)) for name in names])
    v, g, h = _jet(root, env, x, len(names))
    return SecondOrderJet(float(v), g, h)


_EPS = float(np.finfo(float).eps)
DEFAULT_GRADIENT_STEP = _EPS ** (1.0 / 3.0)
DEFAULT_HESSIAN_STEP = _EPS ** 0.25


def finite_difference_jet(
    f,
    point: Sequence[float] | np.ndarray,
    step: float | None = None,
    hessian_step: float | None = None,
) -> SecondOrderJet:
    """Central-difference jet of a scalar function of a real vector.

    Serves as the derivative oracle for analytic jets.  Steps are scaled
    per coordinate by max(1, |x_i|); defaults balance truncation against
    round-off (eps^(1/3) for the gradient, eps^(1/4) for the Hessian).
    """
    func = f
    if hasattr(f, "n_out"):
        if f.n_out != 1:
            raise ValidationError("finite_difference_jet needs a scalar map")
        func = lambda v: float(np.asarray(f(v)).reshape(-1)[0])  # noqa: E731
    x = np.asarray(point, dtype=float).reshape(-1)
    n = x.size
    scale = np.maximum(1.0, np.abs(x))
    hg = (step if step is not None else DEFAULT_GRADIENT_STEP) * scale
    hh = (hessian_step if hessian_step is not None else DEFAULT_HESSIAN_STEP) * scale

    def at(offsets):
        return float(func(x + offsets))

    value = at(np.zeros(n))
    gradient = np.zeros(n)
    hessian = np.zeros((n, n))
    for i in range(n):
        e = np.zeros(n)
        e[i] = hg[i]
        gradient[i] = (at(e) - at(-e)) / (2.0 * hg[i])
    for i in range(n):
        e = np.zeros(n)
        e[i] = hh[i]
        hessian[i, i] = (at(e) - 2.0 * value + at(-e)) / hh[i] ** 2
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = hh[j]
            mixed = (
                at(e + ej) - at(e - ej) - at(-e + ej) + at(-e - ej)
            ) / (4.0 * hh[i] * hh[j])
            hessian[i, j] = mixed
            hessian[j, i] = mixed
    return SecondOrderJet(value, gradient, hessian)

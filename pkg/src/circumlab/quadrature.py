"""Quadrature on triangles and Lp Sobolev seminorms.

Rules come from a collapsed tensor Gauss-Legendre construction: the unit
square maps onto the reference triangle (0,0), (1,0), (0,1) via
(u, w) -> (u, w(1-u)) with Jacobian (1-u), so a degree-d rule needs
ceil((d+2)/2) x ceil((d+1)/2) Gauss points and is exact for every
polynomial of total degree <= d.  Arbitrary degree is supported without
embedded point tables.

Seminorms follow the weighted convention

    |u|_{2,p,K}^p = int |u_xx|^p + |u_yy|^p + 2 |u_xy|^p

for p < inf, and a plain max over the per-derivative sup-estimates at
p = inf (sampled on a nested barycentric grid, hence a lower estimate of
the essential sup that never decreases under grid refinement).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InconsistentSpec, InvalidExponent, UnsupportedDegree
from .geometry import Triangle

MAX_DEGREE = 30


@dataclass(frozen=True)
class QuadratureRule:
    """Points (barycentric, on the reference triangle) and weights (sum 1/2)."""

    degree: int
    points: np.ndarray
    weights: np.ndarray


def make_rule(degree: int) -> QuadratureRule:
    """Rule exact to ``degree`` on the reference triangle; 1 <= degree <= 30."""
    if not (1 <= degree <= MAX_DEGREE):
        raise UnsupportedDegree(f"degree {degree} outside [1, {MAX_DEGREE}]")
    nu = (degree + 3) // 2  # u-degree rises by 1 through the Jacobian factor
    nw = (degree + 2) // 2
    xu, wu = np.polynomial.legendre.leggauss(nu)
    xw, ww = np.polynomial.legendre.leggauss(nw)
    u = 0.5 * (xu + 1.0)
    w = 0.5 * (xw + 1.0)
    U, W = np.meshgrid(u, w, indexing="ij")
    WU, WW = np.meshgrid(wu, ww, indexing="ij")
    x = U.ravel()
    y = (W * (1.0 - U)).ravel()
    wt = (0.25 * WU * WW * (1.0 - U)).ravel()
    pts = np.column_stack([1.0 - x - y, x, y])
    return QuadratureRule(degree=degree, points=pts, weights=wt)


def physical_points(rule: QuadratureRule, tri: Triangle):
    """Map rule points into ``tri``; returns (x, y, weights) with weights
    scaled by |det J| = 2S so that sum(w_i f_i) integrates f over tri."""
    v = tri.vertices
    xy = rule.points @ v
    return xy[:, 0], xy[:, 1], rule.weights * (2.0 * tri.area)


def integrate(f, tri: Triangle, rule: QuadratureRule) -> float:
    """Integral over ``tri`` of f(x, y) (vectorized callable)."""
    x, y, w = physical_points(rule, tri)
    return float(w @ np.asarray(f(x, y), dtype=float))


@dataclass(frozen=True)
class SeminormSpec:
    """Derivative order m in {0, 1, 2} and Lebesgue exponent p in [1, inf]."""

    m: int
    p: float

    def __post_init__(self):
        if self.m not in (0, 1, 2):
            raise InconsistentSpec(f"order m = {self.m} not in {{0, 1, 2}}")
        if not self.p >= 1.0:
            raise InvalidExponent(f"p = {self.p} below 1")


def _components(expr, spec: SeminormSpec):
    """(lp_weight, evaluator) pairs for the derivatives entering |.|_{m,p}."""
    if spec.m == 0:
        return [(1.0, lambda x, y: expr.value(x, y))]
    if spec.m == 1:
        if getattr(expr, "grad", None) is None:
            raise InconsistentSpec(f"{getattr(expr, 'name', expr)} has no gradient")
        return [
            (1.0, lambda x, y: expr.grad(x, y)[0]),
            (1.0, lambda x, y: expr.grad(x, y)[1]),
        ]
    if getattr(expr, "hess", None) is None:
        raise InconsistentSpec(f"{getattr(expr, 'name', expr)} has no Hessian")
    return [
        (1.0, lambda x, y: expr.hess(x, y)[0]),
        (1.0, lambda x, y: expr.hess(x, y)[2]),
        (2.0, lambda x, y: expr.hess(x, y)[1]),
    ]


def barycentric_grid(subdiv: int) -> np.ndarray:
    """Uniform barycentric sample grid; nested under subdiv doubling."""
    pts = []
    for i in range(subdiv + 1):
        for j in range(subdiv + 1 - i):
            pts.append((1.0 - (i + j) / subdiv, i / subdiv, j / subdiv))
    return np.array(pts)


def seminorm(
    expr,
    spec: SeminormSpec,
    tri: Triangle,
    rule: QuadratureRule | None = None,
    sup_grid: int = 64,
) -> float:
    """|expr|_{m,p,K} by quadrature (p < inf) or grid sampling (p = inf).

    ``expr`` must expose value/grad/hess evaluators as far as m requires.
    For p = inf the result is the max over a barycentric grid with
    ``sup_grid`` subdivisions (a lower estimate of the essential sup).
    """
    comps = _components(expr, spec)
    if math.isinf(spec.p):
        xy = barycentric_grid(sup_grid) @ tri.vertices
        x, y = xy[:, 0], xy[:, 1]
        return max(float(np.max(np.abs(f(x, y)))) for _, f in comps)
    if rule is None:
        rule = make_rule(8)
    x, y, w = physical_points(rule, tri)
    total = 0.0
    for lp_weight, f in comps:
        total += lp_weight * float(w @ np.abs(np.asarray(f(x, y), dtype=float)) ** spec.p)
    return total ** (1.0 / spec.p)


def seminorm_auto(
    expr,
    spec: SeminormSpec,
    tri: Triangle,
    rel_tol: float = 1e-8,
    start_degree: int = 8,
    sup_grid: int = 64,
) -> float:
    """Seminorm with rule-degree doubling until two successive values agree.

    For polynomial expressions with even p the first exact rule already
    settles it; otherwise degrees double until agreement to ``rel_tol``
    relative, capped at the max supported degree.
    """
    if math.isinf(spec.p):
        return seminorm(expr, spec, tri, sup_grid=sup_grid)
    deg = getattr(expr, "degree", None)
    if deg is not None and spec.p == int(spec.p) and int(spec.p) % 2 == 0:
        # |D^m u|^p is itself a polynomial: one exact rule suffices
        need = max(1, (deg - spec.m) * int(spec.p))
        if need <= MAX_DEGREE:
            return seminorm(expr, spec, tri, make_rule(need))
    d = start_degree
    prev = seminorm(expr, spec, tri, make_rule(d))
    while d < MAX_DEGREE:
        d = min(2 * d, MAX_DEGREE)
        cur = seminorm(expr, spec, tri, make_rule(d))
        if abs(cur - prev) <= rel_tol * max(abs(cur), 1e-300):
            return cur
        prev = cur
    return prev

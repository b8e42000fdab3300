"""Exact per-triangle geometry: metrics, Kobayashi's interpolation constant,
angle-condition predicates, and canonicalization to a baseline form.

A triangle with edge lengths A, B, C and area S has circumradius
R = ABC/(4S).  Kobayashi's formula gives an explicit constant

    C(K) = sqrt( A^2 B^2 C^2 / (16 S^2)
                 - (A^2 + B^2 + C^2) / 30
                 - (S^2 / 5) (1/A^2 + 1/B^2 + 1/C^2) )

bounding the H1 seminorm of the linear-interpolation error by
C(K) |v|_{2,2,K}; it satisfies C(K) < R for every triangle.  The
canonical form places the longest edge on (-1,0)-(1,0) and the apex at
(s, eta*t) with s^2 + t^2 = 1, so every triangle is a rotated, translated,
scaled copy of a canonical one with eta in (0, sqrt(3)].
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTriangle, InvalidThreshold

# Relative area floor: reject triangles with S < AREA_FLOOR * h_K^2 so the
# S^2 and 1/S^2 terms of C(K) stay finite.
AREA_FLOOR = 1e-14

_SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class Triangle:
    """Non-degenerate triangle; vertex order normalized to counterclockwise."""

    p1: tuple[float, float]
    p2: tuple[float, float]
    p3: tuple[float, float]

    def __post_init__(self):
        p1 = (float(self.p1[0]), float(self.p1[1]))
        p2 = (float(self.p2[0]), float(self.p2[1]))
        p3 = (float(self.p3[0]), float(self.p3[1]))
        s2 = _signed_area2(p1, p2, p3)
        h = max(_dist(p1, p2), _dist(p2, p3), _dist(p3, p1))
        if abs(s2) < 2.0 * AREA_FLOOR * h * h:
            raise DegenerateTriangle(
                f"area {abs(s2) / 2:.3e} below floor {AREA_FLOOR:g}*h^2 "
                f"for vertices {p1}, {p2}, {p3}"
            )
        if s2 < 0.0:
            p2, p3 = p3, p2
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "p2", p2)
        object.__setattr__(self, "p3", p3)

    @property
    def vertices(self) -> np.ndarray:
        return np.array([self.p1, self.p2, self.p3], dtype=float)

    @property
    def area(self) -> float:
        return 0.5 * _signed_area2(self.p1, self.p2, self.p3)


def _signed_area2(p1, p2, p3) -> float:
    return (p2[0] - p1[0]) * (p3[1] - p1[1]) - (p3[0] - p1[0]) * (p2[1] - p1[1])


def _dist(p, q) -> float:
    return math.hypot(q[0] - p[0], q[1] - p[1])


def reference_triangle() -> Triangle:
    """Unit right triangle with apexes (0,0), (1,0), (0,1)."""
    return Triangle((0.0, 0.0), (1.0, 0.0), (0.0, 1.0))


@dataclass(frozen=True)
class TriangleMetrics:
    """Derived metric quantities of one triangle.

    Edge A is opposite vertex p1, B opposite p2, C opposite p3.
    """

    A: float
    B: float
    C: float
    S: float
    h_K: float
    rho_K: float
    R_K: float
    theta_min: float
    theta_max: float
    C_K: float


def kobayashi_constant(A, B, C, S):
    """Kobayashi's constant from edge lengths and area (vectorized).

    Evaluated in extended precision: for flat triangles the expression is a
    difference of nearly equal large terms.
    """
    A2 = np.square(np.asarray(A, dtype=np.longdouble))
    B2 = np.square(np.asarray(B, dtype=np.longdouble))
    C2 = np.square(np.asarray(C, dtype=np.longdouble))
    S2 = np.square(np.asarray(S, dtype=np.longdouble))
    val = (
        A2 * B2 * C2 / (16.0 * S2)
        - (A2 + B2 + C2) / 30.0
        - (S2 / 5.0) * (1.0 / A2 + 1.0 / B2 + 1.0 / C2)
    )
    out = np.sqrt(val).astype(float)
    return out if out.ndim else float(out)


def circumradius(A, B, C, S):
    """R = ABC/(4S), vectorized over edge-length/area arrays."""
    A = np.asarray(A, dtype=float)
    out = A * B * C / (4.0 * np.asarray(S, dtype=float))
    return out if out.ndim else float(out)


def _angles(A: float, B: float, C: float) -> tuple[float, float, float]:
    # law of cosines; clip for safety near degenerate configurations
    def ang(a, b, c):
        return math.acos(max(-1.0, min(1.0, (b * b + c * c - a * a) / (2.0 * b * c))))

    return ang(A, B, C), ang(B, C, A), ang(C, A, B)


def metrics(tri: Triangle) -> TriangleMetrics:
    """All metric quantities of ``tri`` (edges, area, radii, angles, C(K))."""
    A = _dist(tri.p2, tri.p3)
    B = _dist(tri.p3, tri.p1)
    C = _dist(tri.p1, tri.p2)
    S = tri.area
    h_K = max(A, B, C)
    rho_K = 2.0 * S / (A + B + C)
    R_K = circumradius(A, B, C, S)
    a1, a2, a3 = _angles(A, B, C)
    return TriangleMetrics(
        A=A,
        B=B,
        C=C,
        S=S,
        h_K=h_K,
        rho_K=rho_K,
        R_K=R_K,
        theta_min=min(a1, a2, a3),
        theta_max=max(a1, a2, a3),
        C_K=kobayashi_constant(A, B, C, S),
    )


def condition_flags(
    m: TriangleMetrics, theta0: float, theta1: float, sigma: float
) -> dict:
    """Classical mesh-quality predicates for one triangle.

    min_angle_ok: every angle >= theta0 (0 < theta0 < pi/3);
    max_angle_ok: every angle <= theta1 (pi/3 <= theta1 < pi);
    regular_ok:   h_K / rho_K <= sigma (sigma > 0, inf allowed).
    """
    if not (0.0 < theta0 < math.pi / 3.0):
        raise InvalidThreshold(f"theta0 = {theta0} outside (0, pi/3)")
    if not (math.pi / 3.0 <= theta1 < math.pi):
        raise InvalidThreshold(f"theta1 = {theta1} outside [pi/3, pi)")
    if not sigma > 0.0:
        raise InvalidThreshold(f"sigma = {sigma} must be positive")
    return {
        "min_angle_ok": m.theta_min >= theta0,
        "max_angle_ok": m.theta_max <= theta1,
        "regular_ok": m.h_K / m.rho_K <= sigma,
    }


@dataclass(frozen=True)
class CanonicalForm:
    """Similarity decomposition onto the baseline triangle.

    The input triangle equals the canonical triangle with apexes (-1,0),
    (1,0), (s, eta*t) scaled by ``ratio`` (plus a rotation/translation).
    a, b are the direction cosines of the slanted edge through (-1,0);
    X, Y the stretched edge factors; the canonical circumradius is X*Y/eta.
    """

    s: float
    t: float
    eta: float
    a: float
    b: float
    X: float
    Y: float
    ratio: float

    @property
    def canonical_circumradius(self) -> float:
        return self.X * self.Y / self.eta

    def rebuild(self) -> Triangle:
        """Triangle congruent to the decomposed input, in canonical position."""
        r = self.ratio
        return Triangle((-r, 0.0), (r, 0.0), (r * self.s, r * self.eta * self.t))


def canonicalize(tri: Triangle) -> CanonicalForm:
    """Decompose ``tri`` onto the canonical baseline triangle.

    The longest edge (ties: largest opposite angle, then lowest vertex index)
    maps to (-1,0)-(1,0) following the triangle's counterclockwise
    orientation, which places the apex above the baseline; eta lands in
    (0, sqrt(3)] because the baseline is the longest edge.
    """
    v = [tri.p1, tri.p2, tri.p3]
    lengths = [_dist(v[1], v[2]), _dist(v[2], v[0]), _dist(v[0], v[1])]
    lmax = max(lengths)
    candidates = [i for i in range(3) if lengths[i] == lmax]
    if len(candidates) > 1:
        m = metrics(tri)
        angs = _angles(m.A, m.B, m.C)
        amax = max(angs[i] for i in candidates)
        candidates = [i for i in candidates if angs[i] == amax]
    i = min(candidates)

    pa, pb, pc = v[(i + 1) % 3], v[(i + 2) % 3], v[i]
    L = lengths[i]
    ux, uy = (pb[0] - pa[0]) / L, (pb[1] - pa[1]) / L
    nx, ny = -uy, ux  # left normal; CCW order puts the apex on this side
    mx, my = 0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])
    dx, dy = pc[0] - mx, pc[1] - my
    s = 2.0 * (dx * ux + dy * uy) / L
    mu = 2.0 * (dx * nx + dy * ny) / L

    t = math.sqrt(max(0.0, 1.0 - s * s))
    eta = mu / t
    if not 0.0 < eta <= _SQRT3 * (1.0 + 1e-12):
        raise DegenerateTriangle(
            f"canonical height factor {eta} outside (0, sqrt(3)]"
        )
    a = math.sqrt((1.0 + s) / 2.0)
    b = math.sqrt((1.0 - s) / 2.0)
    X = math.sqrt(a * a * eta * eta + b * b)
    Y = math.sqrt(a * a + b * b * eta * eta)
    return CanonicalForm(s=s, t=t, eta=min(eta, _SQRT3), a=a, b=b, X=X, Y=Y, ratio=L / 2.0)


def circumradius_identity_check(tri: Triangle, rel_tol: float = 1e-12) -> bool:
    """True iff ratio * X*Y/eta reproduces R_K to ``rel_tol`` relative."""
    form = canonicalize(tri)
    r_k = metrics(tri).R_K
    return abs(form.ratio * form.canonical_circumradius - r_k) <= rel_tol * r_k


def needle_triangle(h: float, alpha: float) -> Triangle:
    """Isosceles triangle with base h on the x-axis and apex height h**alpha."""
    return Triangle((0.0, 0.0), (h, 0.0), (0.5 * h, h ** alpha))


def random_triangles(n: int, rng: np.random.Generator) -> np.ndarray:
    """(n, 3, 2) vertex array, uniform in the unit square, degeneracy-filtered."""
    out = np.empty((n, 3, 2))
    got = 0
    while got < n:
        pts = rng.random((n - got, 3, 2))
        s2 = np.abs(
            (pts[:, 1, 0] - pts[:, 0, 0]) * (pts[:, 2, 1] - pts[:, 0, 1])
            - (pts[:, 2, 0] - pts[:, 0, 0]) * (pts[:, 1, 1] - pts[:, 0, 1])
        )
        h2 = np.maximum(
            ((pts[:, 1] - pts[:, 0]) ** 2).sum(axis=1),
            np.maximum(
                ((pts[:, 2] - pts[:, 1]) ** 2).sum(axis=1),
                ((pts[:, 0] - pts[:, 2]) ** 2).sum(axis=1),
            ),
        )
        keep = pts[s2 >= 2.0 * AREA_FLOOR * h2]
        out[got : got + len(keep)] = keep
        got += len(keep)
    return out


def edge_lengths_and_area(pts: np.ndarray):
    """Edge-length triples and absolute areas for an (n, 3, 2) vertex array."""
    a = np.linalg.norm(pts[:, 2] - pts[:, 1], axis=1)
    b = np.linalg.norm(pts[:, 0] - pts[:, 2], axis=1)
    c = np.linalg.norm(pts[:, 1] - pts[:, 0], axis=1)
    s = 0.5 * np.abs(
        (pts[:, 1, 0] - pts[:, 0, 0]) * (pts[:, 2, 1] - pts[:, 0, 1])
        - (pts[:, 2, 0] - pts[:, 0, 0]) * (pts[:, 1, 1] - pts[:, 0, 1])
    )
    return a, b, c, s

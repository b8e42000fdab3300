"""P1 finite elements for the Poisson problem with zero Dirichlet data,
plus convergence studies tying the discretization error to the largest
element circumradius.

The chain being exhibited numerically is

    |u - u_h|_{1,2}  <=  |u - I_h u|_{1,2}  <=  (max_K R_K) |u|_{2,2}

(energy optimality of the Galerkin solution, then the per-element
circumradius bound summed over the mesh), so the solutions converge as
long as max_K R_K -> 0, regardless of the maximum angle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse

from .errors import DegenerateTriangle, InconsistentSpec, NoConvergence
from .fields import ScalarField, neg_laplacian
from .mesh import Mesh, stats
from .quadrature import QuadratureRule, make_rule

LOAD_QUAD_DEGREE = 4
ERROR_QUAD_DEGREE = 6


def _element_geometry(mesh: Mesh):
    """Per-element signed areas and P1 shape gradients.

    Returns (areas (nt,), gx (nt, 3), gy (nt, 3)) where column i holds the
    gradient of the hat function of local vertex i.
    """
    p = mesh.element_coords()
    x, y = p[..., 0], p[..., 1]
    e1, e2, e3 = (np.roll(np.arange(3), -1), np.roll(np.arange(3), -2),
                  np.arange(3))
    s2 = (x[:, 1] - x[:, 0]) * (y[:, 2] - y[:, 0]) - (x[:, 2] - x[:, 0]) * (
        y[:, 1] - y[:, 0]
    )
    if np.any(s2 <= 0.0):
        k = int(np.argmax(s2 <= 0.0))
        raise DegenerateTriangle(f"element {k} has non-positive area {s2[k] / 2:.3e}")
    # grad(lambda_i) = rot90(opposite edge) / (2S)
    gx = (y[:, e1] - y[:, e2]) / s2[:, None]
    gy = (x[:, e2] - x[:, e1]) / s2[:, None]
    return 0.5 * s2, gx, gy


def stiffness_matrix(mesh: Mesh) -> scipy.sparse.csr_matrix:
    """Unconstrained P1 stiffness matrix (exact per-element closed form)."""
    areas, gx, gy = _element_geometry(mesh)
    ke = areas[:, None, None] * (
        gx[:, :, None] * gx[:, None, :] + gy[:, :, None] * gy[:, None, :]
    )
    t = mesh.triangles
    rows = np.repeat(t, 3, axis=1).ravel()
    cols = np.tile(t, (1, 3)).ravel()
    a = scipy.sparse.coo_matrix(
        (ke.ravel(), (rows, cols)), shape=(mesh.n_vertices, mesh.n_vertices)
    )
    return a.tocsr()


def load_vector(mesh: Mesh, f: ScalarField,
                rule: QuadratureRule | None = None) -> np.ndarray:
    """int f * hat_i by per-element quadrature (default degree 4)."""
    if rule is None:
        rule = make_rule(LOAD_QUAD_DEGREE)
    areas, _, _ = _element_geometry(mesh)
    p = mesh.element_coords()
    lam = rule.points  # (nq, 3) barycentric
    xq = lam @ p[:, :, 0].T  # (nq, nt)
    yq = lam @ p[:, :, 1].T
    fv = np.asarray(f.value(xq, yq), dtype=float)
    # weights carry the reference area 1/2; physical scaling is 2*area
    contrib = (rule.weights[:, None, None] * fv[:, :, None] * lam[:, None, :]).sum(axis=0)
    contrib *= 2.0 * areas[:, None]
    b = np.zeros(mesh.n_vertices)
    np.add.at(b, mesh.triangles.ravel(), contrib.ravel())
    return b


@dataclass
class SparseSystem:
    """Constrained SPD system on the free (interior) degrees of freedom."""

    matrix: scipy.sparse.csr_matrix
    rhs: np.ndarray
    free: np.ndarray
    n_total: int


def assemble(mesh: Mesh, f: ScalarField,
             load_rule: QuadratureRule | None = None) -> SparseSystem:
    """Stiffness + load with symmetric elimination of boundary rows/columns."""
    a = stiffness_matrix(mesh)
    b = load_vector(mesh, f, load_rule)
    free = np.flatnonzero(~mesh.boundary)
    a_ff = a[free][:, free].tocsr()
    return SparseSystem(matrix=a_ff, rhs=b[free], free=free,
                        n_total=mesh.n_vertices)


@dataclass
class SolverReport:
    iterations: int
    relative_residual: float
    history: list[float]


@dataclass
class FemSolution:
    """Nodal values (zero at boundary nodes) plus the solver report."""

    mesh: Mesh
    values: np.ndarray
    report: SolverReport


def solve_cg(sys: SparseSystem, rel_tol: float = 1e-10,
             max_iter: int | None = None) -> tuple[np.ndarray, SolverReport]:
    """Jacobi-preconditioned conjugate gradients on the free block.

    Deterministic for fixed input; raises NoConvergence (with the residual
    history attached) when max_iter is exhausted.
    """
    a = sys.matrix
    b = sys.rhs
    n = len(b)
    if n == 0:
        return np.zeros(0), SolverReport(0, 0.0, [0.0])
    if max_iter is None:
        max_iter = max(200, 20 * n)
    dinv = 1.0 / a.diagonal()
    x = np.zeros(n)
    r = b.copy()
    z = dinv * r
    p = z.copy()
    rz = float(r @ z)
    bnorm = float(np.linalg.norm(b))
    if bnorm == 0.0:
        return x, SolverReport(0, 0.0, [0.0])
    history = [1.0]
    for it in range(1, max_iter + 1):
        ap = a @ p
        alpha = rz / float(p @ ap)
        x += alpha * p
        r -= alpha * ap
        res = float(np.linalg.norm(r)) / bnorm
        history.append(res)
        if res <= rel_tol:
            return x, SolverReport(it, res, history)
        z = dinv * r
        rz_new = float(r @ z)
        p = z + (rz_new / rz) * p
        rz = rz_new
    raise NoConvergence(max_iter, history)


def solve_poisson(mesh: Mesh, f: ScalarField, rel_tol: float = 1e-10,
                  max_iter: int | None = None) -> FemSolution:
    """Assemble and solve -lap(u) = f, u = 0 on the boundary."""
    sys = assemble(mesh, f)
    xf, report = solve_cg(sys, rel_tol=rel_tol, max_iter=max_iter)
    values = np.zeros(mesh.n_vertices)
    values[sys.free] = xf
    return FemSolution(mesh=mesh, values=values, report=report)


def interpolant_values(mesh: Mesh, u: ScalarField) -> np.ndarray:
    """Nodal vector of the piecewise-linear interpolant of u."""
    return np.asarray(u.value(mesh.vertices[:, 0], mesh.vertices[:, 1]), dtype=float)


def h1_error(mesh: Mesh, nodal: np.ndarray, exact: ScalarField,
             rule: QuadratureRule | None = None) -> tuple[float, float]:
    """(H1-seminorm error, full H1-norm error) of a nodal P1 function
    against ``exact``, accumulated in element-index order."""
    if exact.grad is None:
        raise InconsistentSpec(f"{exact.name} has no gradient evaluators")
    if rule is None:
        rule = make_rule(ERROR_QUAD_DEGREE)
    areas, gx, gy = _element_geometry(mesh)
    p = mesh.element_coords()
    un = nodal[mesh.triangles]  # (nt, 3)
    uhx = (un * gx).sum(axis=1)  # constant per element
    uhy = (un * gy).sum(axis=1)

    lam = rule.points
    xq = lam @ p[:, :, 0].T  # (nq, nt)
    yq = lam @ p[:, :, 1].T
    ex, ey = exact.grad(xq, yq)
    ev = np.asarray(exact.value(xq, yq), dtype=float)
    uhv = lam @ un.T

    w = rule.weights[:, None] * (2.0 * areas)[None, :]
    semi2_el = (w * ((ex - uhx) ** 2 + (ey - uhy) ** 2)).sum(axis=0)
    l22_el = (w * (ev - uhv) ** 2).sum(axis=0)
    semi2 = float(np.add.reduce(semi2_el))
    l22 = float(np.add.reduce(l22_el))
    return math.sqrt(semi2), math.sqrt(semi2 + l22)


def hessian_seminorm(mesh: Mesh, u: ScalarField,
                     rule: QuadratureRule | None = None) -> float:
    """|u|_{2,2} over the meshed domain (weight-2 mixed term)."""
    if u.hess is None:
        raise InconsistentSpec(f"{u.name} has no Hessian evaluators")
    if rule is None:
        rule = make_rule(ERROR_QUAD_DEGREE)
    areas, _, _ = _element_geometry(mesh)
    p = mesh.element_coords()
    lam = rule.points
    xq = lam @ p[:, :, 0].T
    yq = lam @ p[:, :, 1].T
    hxx, hxy, hyy = u.hess(xq, yq)
    w = rule.weights[:, None] * (2.0 * areas)[None, :]
    total = (w * (np.asarray(hxx) ** 2 + np.asarray(hyy) ** 2
                  + 2.0 * np.asarray(hxy) ** 2)).sum()
    return math.sqrt(float(total))


def interpolation_h1_error(mesh: Mesh, u: ScalarField,
                           rule: QuadratureRule | None = None) -> tuple[float, float]:
    """Mesh-wide H1 interpolation error |u - I_h u| (seminorm, full norm)."""
    return h1_error(mesh, interpolant_values(mesh, u), exact=u, rule=rule)


@dataclass(frozen=True)
class CeaRow:
    level: int
    n: int
    n_triangles: int
    max_R_K: float
    h_max: float
    max_angle: float
    interp_h1: float
    h1_seminorm_error: float
    h1_norm_error: float
    semi_22_exact: float
    quotient: float
    cg_iterations: int
    cg_residual: float

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "n": self.n,
            "n_triangles": self.n_triangles,
            "max_R_K": self.max_R_K,
            "h_max": self.h_max,
            "max_angle": self.max_angle,
            "interp_h1": self.interp_h1,
            "h1_seminorm_error": self.h1_seminorm_error,
            "h1_norm_error": self.h1_norm_error,
            "semi_22_exact": self.semi_22_exact,
            "quotient": self.quotient,
            "cg_iterations": self.cg_iterations,
            "cg_residual": self.cg_residual,
        }


CEA_CSV_COLUMNS = (
    "level", "n", "n_triangles", "max_R_K", "h_max", "max_angle", "interp_h1",
    "h1_seminorm_error", "h1_norm_error", "semi_22_exact", "quotient",
    "cg_iterations", "cg_residual",
)


@dataclass(frozen=True)
class CeaReport:
    exact_name: str
    family: str
    rows: list[CeaRow]


def cea_study(mesh_factory, ns, exact: ScalarField, rel_tol: float = 1e-10,
              family: str = "custom") -> CeaReport:
    """One refinement row per n in ``ns``.

    ``exact`` must vanish on the domain boundary (manufactured solution);
    the right-hand side is derived analytically as -lap(exact).  Rows carry
    the interpolation-error column so all three chain inequalities are
    visible: |u-u_h|_1 <= |u-I_h u|_1 <= (max R_K) |u|_2.
    """
    f = neg_laplacian(exact)
    rows = []
    for level, n in enumerate(ns):
        mesh = mesh_factory(n)
        st = stats(mesh)
        sol = solve_poisson(mesh, f, rel_tol=rel_tol)
        semi_err, norm_err = h1_error(mesh, sol.values, exact)
        interp_err, _ = interpolation_h1_error(mesh, exact)
        semi22 = hessian_seminorm(mesh, exact)
        rows.append(
            CeaRow(
                level=level,
                n=int(n),
                n_triangles=mesh.n_triangles,
                max_R_K=st.max_R_K,
                h_max=st.h_max,
                max_angle=st.max_angle,
                interp_h1=interp_err,
                h1_seminorm_error=semi_err,
                h1_norm_error=norm_err,
                semi_22_exact=semi22,
                quotient=norm_err / (st.max_R_K * semi22),
                cg_iterations=sol.report.iterations,
                cg_residual=sol.report.relative_residual,
            )
        )
    return CeaReport(exact_name=exact.name, family=family, rows=rows)

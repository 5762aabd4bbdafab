"""Direct solvers for the cell system and the block saddle systems.

Everything is banded or small: the finite-volume path is one symmetric
banded solve, the mixed path eliminates the gradient block first and solves
the dense Schur complement on the cells.  No iterative methods.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .assembly import SaddleSystem, assemble_fv
from .mesh import Mesh

__all__ = ["SolverError", "DiscreteSolution", "solve_fv", "solve_mixed", "residual"]

RESIDUAL_RTOL = 1e-10


class SolverError(RuntimeError):
    """A linear system could not be solved reliably."""


@dataclass(frozen=True)
class DiscreteSolution:
    """Cell values of u and vertex values of the gradient p."""

    u_cells: np.ndarray
    p_nodes: np.ndarray
    mesh: Mesh
    scheme: str

    def __post_init__(self):
        if self.u_cells.shape != (self.mesh.n,) or self.p_nodes.shape != (self.mesh.n + 1,):
            raise ValueError("solution arrays do not match the mesh")


def solve_fv(mesh: Mesh, f, quad_order: int = 8) -> DiscreteSolution:
    """Solve the heuristic finite-volume scheme.

    The cell system is solved with a symmetric banded factorization; the
    gradient is then recovered from the dual-width difference quotients with
    zero ghost values outside the interval, so the cell balance
    p_{j+1} - p_j + int_cell f = 0 holds to rounding by construction.
    """
    A, b = assemble_fv(mesh, f, quad_order)
    if mesh.n == 1:  # scipy's banded tridiagonal path rejects 1x1 systems
        u = b / A.diag
    else:
        ab = np.zeros((2, mesh.n))
        ab[0, 1:] = A.upper
        ab[1, :] = A.diag
        try:
            u = scipy.linalg.solveh_banded(ab, b)
        except np.linalg.LinAlgError as exc:
            raise SolverError("finite-volume cell system is not positive definite") from exc
    u_ext = np.concatenate(([0.0], u, [0.0]))
    p = np.diff(u_ext) / mesh.dual_widths
    return DiscreteSolution(u_cells=u, p_nodes=p, mesh=mesh, scheme="fv")


def solve_mixed(system: SaddleSystem) -> DiscreteSolution:
    """Solve a saddle system by block elimination.

    First p = -mass^{-1} B^t u via a banded LU of the mass block, then the
    Schur complement B mass^{-1} B^t on the cells (Cholesky when symmetric,
    LU otherwise).  Raises SolverError on a singular mass block, an
    indefinite symmetric Schur complement, or a block residual above 1e-10
    relative.
    """
    M, B, f_cells = system.mass, system.div_matrix, system.rhs_cells
    with np.errstate(all="ignore"):
        try:
            X = scipy.linalg.solve_banded((1, 1), M.to_banded(), B.T)
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise SolverError("mass block is singular") from exc
    if not np.all(np.isfinite(X)):
        raise SolverError("mass block is singular or badly scaled")
    S = B @ X
    sym_scale = max(1.0, float(np.abs(S).max()))
    try:
        if np.allclose(S, S.T, rtol=0.0, atol=1e-12 * sym_scale):
            try:
                u = scipy.linalg.cho_solve(scipy.linalg.cho_factor(S), f_cells)
            except np.linalg.LinAlgError as exc:
                raise SolverError("Schur complement is not positive definite") from exc
        else:
            u = scipy.linalg.solve(S, f_cells)
    except scipy.linalg.LinAlgError as exc:
        raise SolverError("Schur complement is singular") from exc
    p = -X @ u
    solution = DiscreteSolution(u_cells=u, p_nodes=p, mesh=system.mesh,
                                scheme=system.label or "mixed")
    r = residual(system, solution)
    scale = max(1.0, float(np.abs(f_cells).max()))
    if not np.isfinite(r) or r > RESIDUAL_RTOL * scale:
        raise SolverError(f"block residual {r:.3e} exceeds {RESIDUAL_RTOL:.0e} relative")
    return solution


def residual(system: SaddleSystem, solution: DiscreteSolution) -> float:
    """Max-norm residual of the full block system at a candidate solution."""
    r_grad = system.mass.matvec(solution.p_nodes) + system.div_matrix.T @ solution.u_cells
    r_cells = system.div_matrix @ solution.p_nodes + system.rhs_cells
    return float(max(np.abs(r_grad).max(), np.abs(r_cells).max()))

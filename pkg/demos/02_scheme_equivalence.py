"""Three discretizations, two of them secretly identical.

All schemes share the unknowns (cell values of u, vertex values of the
gradient p) and the same divergence block; they differ only in the mass
matrix of the gradient equation.  Whenever the weighting function makes that
mass matrix the dual-width diagonal — orthogonality plus fv compatibility —
block elimination reproduces the heuristic finite-volume system coefficient
for coefficient, so the solutions agree to rounding.  The affine weighting
instead reproduces the classical mixed scheme, a genuinely different method.
"""

import numpy as np

from fvpg1d import (RegularFamilySpec, build_random_regular, builtin_affine,
                    builtin_spline, moments, perturbed_family,
                    saddle_classical, saddle_pg, sin_problem, solve_fv,
                    solve_mixed)


def gap(a, b):
    du = float(np.max(np.abs(a.u_cells - b.u_cells)))
    dp = float(np.max(np.abs(a.p_nodes - b.p_nodes)))
    return max(du, dp)


def main():
    mesh = build_random_regular(RegularFamilySpec(alpha=0.5, beta=2.0, n=48, seed=3))
    prob = sin_problem()
    print(f"random regular mesh: n = {mesh.n}, h_max = {mesh.h_max:.5f}, "
          f"width ratio = {mesh.cell_widths.max() / mesh.cell_widths.min():.3f}")
    print(f"problem: -u'' = pi^2 sin(pi x), u(0) = u(1) = 0\n")

    fv = solve_fv(mesh, prob.f)
    classical = solve_mixed(saddle_classical(mesh, prob.f))
    pg = {label: solve_mixed(saddle_pg(mesh, moments(psi), prob.f, label=label))
          for label, psi in [("pg:affine", builtin_affine()),
                             ("pg:spline", builtin_spline()),
                             ("pg:perturbed:1", perturbed_family(1.0))]}

    print("max |difference| in (u, p) between scheme pairs:")
    print(f"  pg:affine      vs classical : {gap(pg['pg:affine'], classical):.3e}"
          "   (same scheme, by construction)")
    print(f"  pg:spline      vs fv        : {gap(pg['pg:spline'], fv):.3e}"
          "   (diagonal mass = dual widths)")
    print(f"  pg:perturbed:1 vs fv        : {gap(pg['pg:perturbed:1'], fv):.3e}"
          "   (still diagonal: the bump has zero moments)")
    print(f"  classical      vs fv        : {gap(classical, fv):.3e}"
          "   (different methods, O(h^2) apart)")

    print("\nThe equivalences are algebraic, not asymptotic: they hold on any")
    print("mesh at rounding level.  The classical-vs-fv gap, in contrast,")
    print("shrinks only as the mesh is refined.")


if __name__ == "__main__":
    main()

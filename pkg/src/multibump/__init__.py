"""Numerics for multi-bump states of -Delta u + a(x) u = u^p on a truncated box.

Submodules
----------
fields       grids, sampled fields, discrete operators, quadrature
potentials   potential families a(x) and hypothesis validators
groundstate  radial profile of the limit problem, decay fit, delta / R_delta
energy       energy functionals, submerged/emerging decomposition
constraints  local Nehari + barycenter constraints and the projection onto them
solver       constrained minimization of the energy at fixed bump centers
minimax      inner minimization over radii, outer maximization over configurations
diagnostics  profile, localization and equidistribution checks
cli          run orchestration
"""

__version__ = "0.1.0"

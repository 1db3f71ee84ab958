"""Shape functionals evaluated on convex polygons."""

from .base import EnergyResult, KernelNotAdmissible, KernelSpec
from .cheeger import cheeger_constant, inner_parallel_area
from .fem import ConvergenceError, Mesh, dirichlet_lambda1, triangulate
from .functional import FunctionalSpec, Kind, evaluate
from .logcap import EquilibriumSolution, equilibrium, log_capacity
from .potentials import (
    EXTERIOR,
    INTERIOR,
    interior_interaction,
    nonlocal_perimeter,
    radial_potential,
    radial_potentials,
    riesz_energy,
)

__all__ = [
    "ConvergenceError",
    "EXTERIOR",
    "EnergyResult",
    "EquilibriumSolution",
    "FunctionalSpec",
    "INTERIOR",
    "KernelNotAdmissible",
    "KernelSpec",
    "Kind",
    "Mesh",
    "cheeger_constant",
    "dirichlet_lambda1",
    "equilibrium",
    "evaluate",
    "inner_parallel_area",
    "interior_interaction",
    "log_capacity",
    "nonlocal_perimeter",
    "radial_potential",
    "radial_potentials",
    "riesz_energy",
    "triangulate",
]

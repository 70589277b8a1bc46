"""Normalized Ricci flow on the Stiefel manifolds SO(n)/SO(n-2).

Invariant metrics are diagonal, ``(x1, x2, x3)``, with module dimensions
``(n-2, n-2, 1)``; the flow keeps ``Vol = x1**(n-2) * x2**(n-2) * x3`` fixed.
"""
__version__ = "0.1.0"

from ._core import IMPLEMENTATION
from .exactpoly import (PositivityReport, RationalPoly, SturmChain, Verdict, count_roots,
                        discriminant_p, p_nu, sturm_chain, verify_positivity)
from .flow import (Classification, EquilibriumReport, FlowVector, PlanarReport,
                   char_poly_at_equilibrium, equilibrium_spectrum, jacobian,
                   planar_equilibrium_data, planar_field, reduced_flow_general, vector_field)
from .geometry import (CurvatureData, DomainError, MetricPoint, SpaceParams, curvature,
                       einstein_point, principal_ricci, scal_conic_residual, scalar_curvature,
                       volume)
from .integrate import (EventKind, EventRecord, IntegratorConfig, NotEnteredError,
                        StepSizeUnderflowError, Trajectory, conservation_report, entry_time,
                        integrate, run_batch, trace_separatrix)
from .regions import (RegionClass, RegionKind, StructuralConstants, SurfaceId, boundary_normal,
                      gamma_curve, gamma_point, i_curve, inward_flux, on_surface, pi_curve,
                      r_plus_membership, structural_constants)
from .rng import SplitMix64

__all__ = [
    "IMPLEMENTATION", "PositivityReport", "RationalPoly", "SturmChain", "Verdict", "count_roots",
    "discriminant_p", "p_nu", "sturm_chain", "verify_positivity", "Classification",
    "EquilibriumReport", "FlowVector", "PlanarReport", "char_poly_at_equilibrium",
    "equilibrium_spectrum", "jacobian", "planar_equilibrium_data", "planar_field",
    "reduced_flow_general", "vector_field", "CurvatureData", "DomainError", "MetricPoint",
    "SpaceParams", "curvature", "einstein_point", "principal_ricci", "scal_conic_residual",
    "scalar_curvature", "volume", "EventKind", "EventRecord", "IntegratorConfig",
    "NotEnteredError", "StepSizeUnderflowError", "Trajectory", "conservation_report",
    "entry_time", "integrate", "run_batch", "trace_separatrix", "RegionClass", "RegionKind",
    "StructuralConstants", "SurfaceId", "boundary_normal", "gamma_curve", "gamma_point",
    "i_curve", "inward_flux", "on_surface", "pi_curve", "r_plus_membership",
    "structural_constants", "SplitMix64",
]

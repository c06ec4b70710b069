"""Entropy-stable hybrid DGSEM / FV-subcell solver for the compressible
Euler equations on moving curved hexahedral meshes."""

from .operators import (SbpOperator, build_sbp, derivative_matrix,
                        gauss_lobatto, lagrange_eval)
from .physics import (GasModel, StateInvalidError, ale_state_function,
                      conserved, ec_two_point_flux, entropy_quantities,
                      log_mean, max_wave_speed, physical_flux, primitives,
                      rusanov_flux)
from .meshmotion import (CornerSinusoid, MeshTopology, PistonChannel,
                         StandingWave, Static, sample_motion)
from .geometry import (GeometryCache, InvertedElementError, Mesh, build_mesh,
                       face_geometry, metric_terms, subcell_face_geometry)
from .dg import (contravariant_two_point_flux, dg_surface_residual,
                 dg_volume_residual, gcl_two_point_flux)
from .fv import fv_element_residual, reconstruct_interface_states, \
    subcell_interfaces
from .blending import (BlendField, FixedBlend, IndicatorBlend, RandomBlend,
                       assign_alpha, face_alpha, indicator_alpha)
from .semidisc import Dirichlet, InternalWall, Semidiscretization, Wall
from .timeint import advance_step, compute_dt
from .diagnostics import (conserved_totals, eoc, integral_entropy_error,
                          l2_error, normal_shock_from_piston, total_entropy)
from .cases import (CaseConfig, ConfigError, case_library, load_config,
                    parse_config, replace_fields, serialize_config)
from .runner import DiagnosticsSeries, RunResult, SolverAbort, run_case

__all__ = [name for name in dir() if not name.startswith("_")]

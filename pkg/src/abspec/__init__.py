"""Aharonov-Bohm eigenvalues on surfaces of revolution.

Exact spectra for the punctured sphere, hemisphere and flat cylinder;
singular Sturm-Liouville solvers for the reduced 1-D eigenproblems; level
set weights of surfaces of revolution; and a verification harness for the
isoperimetric eigenvalue bounds these models are extremal for.
"""

from .flux import Flux, reduce_flux
from .spectra import (Spectrum, SpectrumLine, cylinder_spectrum,
                      hemisphere_spectrum, sphere_decomposition_check,
                      sphere_spectrum)
from .weights import Weight, bumped, eps_max, load_weight, save_weight, star, star_eps
from .sl import SLProblem, SLSolution, default_problem, fd_oracle, kappa1, \
    riccati_profile, solve
from .shooting import SolverError
from .geometry import (Profile, SurfaceReport, analyze, annulus_modulus,
                       green_weight, isoperimetric_check, load_profile,
                       profile_from_spec, radial_mode_eigenvalue, surface_mu1)
from .verify import (TheoremReport, flux_sweep, verify_annulus,
                     verify_boundary_isoperimetric, verify_boundary_large_area,
                     verify_closed_bound, verify_no_hersch)

__version__ = "0.1.0"

__all__ = [
    "Flux", "reduce_flux",
    "Spectrum", "SpectrumLine", "sphere_spectrum", "hemisphere_spectrum",
    "cylinder_spectrum", "sphere_decomposition_check",
    "Weight", "star", "star_eps", "eps_max", "bumped", "save_weight",
    "load_weight",
    "SLProblem", "SLSolution", "solve", "kappa1", "riccati_profile",
    "fd_oracle", "default_problem", "SolverError",
    "Profile", "SurfaceReport", "analyze", "green_weight",
    "isoperimetric_check", "radial_mode_eigenvalue", "annulus_modulus",
    "surface_mu1", "profile_from_spec", "load_profile",
    "TheoremReport", "verify_boundary_isoperimetric", "verify_closed_bound",
    "verify_boundary_large_area", "verify_no_hersch", "verify_annulus",
    "flux_sweep",
]

"""Recover the Levy measure of an infinitely divisible distribution from
its characteristic function.

Pipeline: build or parse a characteristic function (charfn), take its
branch-continuous logarithm (distlog), sample the reweighted-measure
transform or the cumulant curvature on a z-grid (rho), then invert for
interval masses, lattice atoms, or densities (invert). The oracle module
holds closed-form reference cases; the cli module is the command-line
front end.
"""

from .charfn import (AtomMeasure, CharFn, CompoundMeasure, DensityMeasure,
                     LevyTriplet, PointJump, QuadSpec, TruncationFn,
                     TwoPointJump, UniformJump, catalog_cauchy,
                     catalog_compound_poisson, catalog_gamma,
                     catalog_hyperbolic_cosine, catalog_negative_binomial,
                     catalog_normal, charfn_from_spec, charfn_from_triplet,
                     default_truncation, validate_truncation)
from .distlog import UnwrappedLog, log_phi_at, psi2_numeric, unwrap_log
from .errors import (CharFnError, ConfigError, InvariantViolation,
                     LevyInvertError, QuadratureError, ToleranceError,
                     UnwrapError)
from .invert import (Damping, DensityEstimate, Interval, LatticeAtom,
                     MassResult, RegSpec, density_grid, interval_kernel,
                     invert_density_eq3, invert_density_eq4, invert_mass_eq1,
                     invert_mass_eq2, lattice_atoms, masses_to_csv_text,
                     weight, weight_inv)
from .oracle import OracleCase, brute_rho_hat, oracle_corpus
from .rho import RhoHatGrid, neg_psi2_grid, rho_hat, rho_hat_grid

__version__ = "0.1.0"

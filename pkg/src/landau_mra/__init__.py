"""Lowest-Landau-level wavefunctions generated by d-MRA filters."""
from .coulomb import MonteCarloConfig, delta_e, direct_energy, exchange_energy, wigner_energy
from .filters import FilterBank, builtin, haar, load_filter, parse_filter, validate_orthonormality
from .generator import from_filter, onc_matrix
from .landau import (
    KernelSpec,
    LLLState,
    haar2_square_closed_form,
    haar3_asymptotic,
    haar3_closed_form,
    kernel_eval,
    kernel_level,
    magnetic_translate,
    synthesize,
)
from .lattice import SQUARE, TRIANGULAR, SiteIndex, make_lattice, site_position
from .special import complex_erf
from .zak import j_d_flatness, t_d_zak_function, zak_transform

__version__ = "0.1.0"

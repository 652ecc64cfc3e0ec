"""Verification toolkit for the mean king's problem with mutually unbiased bases."""
from .designs import (
    StriationTable,
    build_striations,
    fourier_matrix,
    verify_equivalence,
    verify_mols,
    verify_strings,
)
from .gf import FieldSpec, field_create
from .king import (
    build_alice_basis,
    build_entangled,
    composite_build,
    composite_simulate,
    post_measurement,
    simulate,
    verify_solution,
)
from .mub import MubFamily, build_mub, load_mub, save_mub, verify_mub
from .report import ProtocolReport
from .search import PartialDesign, extend, max_striations

__version__ = "0.1.0"

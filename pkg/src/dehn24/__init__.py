"""Exact cellular topology of 24-cell quotients.

The package rebuilds a census side-pairing of the regular ideal 24-cell
into a compact quotient complex, computes homology and peripheral maps of
its cusps, and enumerates Dehn-filling slope tuples whose filled manifolds
are homology 4-spheres, with exact flat-geometry length checks.
"""

from .chains import (
    ChainComplex,
    ChainMap,
    HomologyBasis,
    InducedH1,
    euler_characteristic,
    first_invalid,
    homology,
    homology_basis,
    induced_h1,
    validate,
)
from .filling import (
    FillingError,
    FillingResult,
    FillingSlopes,
    adapted_slopes,
    alexander_complement_homology,
    h1_filled,
    is_homology_sphere,
)
from .flatgeom import (
    TWO_PI_SQUARED_HIGH,
    TWO_PI_SQUARED_LOW,
    FlatGeometryError,
    FlatLattice,
    PrecisionError,
    SlopeLength,
    closed_section,
    develop_lattice,
    enumerate_short,
    section_holonomy,
    slope_length,
    slope_lengths,
    two_pi_ok,
    weakly_balanced,
)
from .gluing import (
    GluingError,
    OrientationCharacter,
    Pairing,
    PairingError,
    Presentation,
    QuotientComplex,
    SidePairingSpec,
    census_pairing,
    double_cover,
    orientation_character,
    parse_pairing,
    presentation,
    quotient_complex,
    validate_spec,
    vertex_cycles,
    write_pairing,
)
from .intlinalg import (
    AbelianGroup,
    IntMatrix,
    SNFDecomposition,
    cokernel,
    complete_to_basis,
    generates,
    is_primitive,
    kernel_basis,
    snf,
)
from .peripheral import (
    CuspSection,
    PeripheralError,
    PeripheralSystem,
    adapted_basis,
    cusp_sections,
    peripheral_matrix,
    peripheral_system,
    report,
    slope,
)
from .polytope import FaceLattice, TruncatedLattice, build_24cell, truncate

__all__ = [
    "AbelianGroup",
    "ChainComplex",
    "ChainMap",
    "CuspSection",
    "FaceLattice",
    "FillingError",
    "FillingResult",
    "FillingSlopes",
    "FlatGeometryError",
    "FlatLattice",
    "GluingError",
    "HomologyBasis",
    "InducedH1",
    "IntMatrix",
    "OrientationCharacter",
    "Pairing",
    "PairingError",
    "PeripheralError",
    "PeripheralSystem",
    "PrecisionError",
    "Presentation",
    "QuotientComplex",
    "SNFDecomposition",
    "SidePairingSpec",
    "SlopeLength",
    "TWO_PI_SQUARED_HIGH",
    "TWO_PI_SQUARED_LOW",
    "TruncatedLattice",
    "adapted_basis",
    "adapted_slopes",
    "alexander_complement_homology",
    "build_24cell",
    "census_pairing",
    "closed_section",
    "cokernel",
    "complete_to_basis",
    "cusp_sections",
    "develop_lattice",
    "double_cover",
    "enumerate_short",
    "euler_characteristic",
    "first_invalid",
    "generates",
    "h1_filled",
    "homology",
    "homology_basis",
    "induced_h1",
    "is_homology_sphere",
    "is_primitive",
    "kernel_basis",
    "orientation_character",
    "parse_pairing",
    "peripheral_matrix",
    "peripheral_system",
    "presentation",
    "quotient_complex",
    "report",
    "section_holonomy",
    "slope",
    "slope_length",
    "slope_lengths",
    "snf",
    "truncate",
    "two_pi_ok",
    "validate",
    "validate_spec",
    "vertex_cycles",
    "weakly_balanced",
    "write_pairing",
]

__version__ = "0.1.0"

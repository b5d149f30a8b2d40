"""Exact computations with 2-term L-infinity algebras, their morphisms and butterflies."""

from .butterfly import (
    Butterfly,
    Butterfly2Cell,
    NotAnEquivalence,
    associator,
    butterfly_homology_maps,
    butterfly_to_morphism,
    compose_butterflies,
    compose_strict_left,
    compose_strict_right,
    find_butterfly_2cell,
    flip,
    horizontal_compose,
    identity_2cell,
    identity_butterfly,
    is_equivalence,
    left_unitor,
    morphism_to_butterfly,
    pentagon_sides,
    right_unitor,
    validate_butterfly,
    validate_butterfly_2cell,
    vertical_compose,
    zigzag,
)
from .corpus import (
    Extension,
    LieAlgebra,
    der_crossed_module,
    extension,
    butterfly_to_extension,
    extension_to_butterfly,
    lie_algebra,
    make_family,
    random_twist,
)
from .exactla import GF, QQ, current_field, set_field, use_field
from .hfib import (
    HomotopyFiber,
    hfib_homology,
    hfib_of_butterfly,
    hfib_of_morphism,
    long_exact_sequence,
    mapping_cone_check,
    validate_hfib_structure,
)
from .l2a import TwoTermL2A, homology, jacobi_defect_v1, validate_l2a
from .morph import (
    L2AMorphism,
    L2ATransformation,
    compose_morphisms,
    find_transformation,
    identity_morphism,
    induced_homology_maps,
    is_quasi_iso,
    validate_morphism,
    validate_transformation,
)
from .reports import SearchResult, ValidationReport
from .serialize import FormatError, parse, serialize

__version__ = "0.1.0"

__all__ = [
    "Butterfly",
    "Butterfly2Cell",
    "Extension",
    "FormatError",
    "GF",
    "HomotopyFiber",
    "L2AMorphism",
    "L2ATransformation",
    "LieAlgebra",
    "NotAnEquivalence",
    "QQ",
    "SearchResult",
    "TwoTermL2A",
    "ValidationReport",
    "associator",
    "butterfly_homology_maps",
    "butterfly_to_extension",
    "butterfly_to_morphism",
    "compose_butterflies",
    "compose_morphisms",
    "compose_strict_left",
    "compose_strict_right",
    "current_field",
    "der_crossed_module",
    "extension",
    "extension_to_butterfly",
    "find_butterfly_2cell",
    "find_transformation",
    "flip",
    "hfib_homology",
    "hfib_of_butterfly",
    "hfib_of_morphism",
    "homology",
    "horizontal_compose",
    "identity_2cell",
    "identity_butterfly",
    "identity_morphism",
    "induced_homology_maps",
    "is_equivalence",
    "is_quasi_iso",
    "jacobi_defect_v1",
    "left_unitor",
    "lie_algebra",
    "long_exact_sequence",
    "make_family",
    "mapping_cone_check",
    "morphism_to_butterfly",
    "parse",
    "pentagon_sides",
    "random_twist",
    "right_unitor",
    "serialize",
    "set_field",
    "use_field",
    "validate_butterfly",
    "validate_butterfly_2cell",
    "validate_hfib_structure",
    "validate_l2a",
    "validate_morphism",
    "validate_transformation",
    "vertical_compose",
    "zigzag",
]

"""Double Burnside rings of finite p-groups, fusion systems and characteristic idempotents."""
from ._accel import BACKEND
from .bideflation import bideflate, quotient_idempotent_check
from .burnside import (
    BurnsideElement,
    augmentation,
    basis,
    cartesian,
    compose,
    from_marks,
    identity_element,
    marks,
    opposite,
)
from .catalog import catalog_names, fusion_by_name, group_by_name
from .characteristic import (
    characteristic_biset_from_group,
    characteristic_idempotent,
    congruence_suite,
    frobenius_check,
    is_characteristic,
    saturated_from_element,
)
from .fusion import FusionSystem, closure, fusion_from_group, is_saturated, quotient_fusion
from .groups import FiniteGroup, GroupHom, Subgroup, enumerate_group, sylow_subgroup
from .induced import full_stabilizer, left_stabilizer, right_stabilizer
from .pairs import signature

__all__ = [
    "BACKEND", "BurnsideElement", "FiniteGroup", "FusionSystem", "GroupHom", "Subgroup",
    "augmentation", "basis", "bideflate", "cartesian", "catalog_names", "characteristic_biset_from_group",
    "characteristic_idempotent", "closure", "compose", "congruence_suite", "enumerate_group",
    "from_marks", "frobenius_check", "full_stabilizer", "fusion_by_name", "fusion_from_group",
    "group_by_name", "identity_element", "is_characteristic", "is_saturated", "left_stabilizer",
    "marks", "opposite", "quotient_fusion", "quotient_idempotent_check", "right_stabilizer",
    "saturated_from_element", "signature", "sylow_subgroup",
]

"""Number fields: maximal orders, primes, units, S-units and ℓ-parts of class groups."""
from .construct import SpecError, build_field, canonical_spec, cyclotomic_layer, field_from_spec, kummer_extension
from .field import FieldElement, FieldError, NumberField
from .primes import PrimeIdeal, decompose_prime
from .sunits import (ClassGroupData, EngineCapacityError, class_group, s_class_group, s_units,
                     sunit_lattice)
from .units import UnitGroupData, fundamental_unit_real_quadratic, roots_of_unity, roots_of_unity_order

__all__ = [
    "SpecError", "build_field", "canonical_spec", "cyclotomic_layer", "field_from_spec", "kummer_extension",
    "FieldElement", "FieldError", "NumberField", "PrimeIdeal", "decompose_prime",
    "ClassGroupData", "EngineCapacityError", "class_group", "s_class_group", "s_units", "sunit_lattice",
    "UnitGroupData", "fundamental_unit_real_quadratic", "roots_of_unity", "roots_of_unity_order",
]

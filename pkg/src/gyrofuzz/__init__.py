"""Gyrogroups, fuzzy gyronorms and fuzzy metrics, with executable law suites."""

from .gyro_core import (GroupAdapter, Gyrogroup, MobiusDisk, MobiusPoint, TableGyrogroup,
                        cyclic_group, parse_literal, rationals_additive, real_line,
                        verify_gyrogroup_axioms, verify_identities)
from .report import LawCheck, PropertyReport
from .tnorm import LUKASIEWICZ, MIN, PRODUCT, TNorm, get_tnorm, tnorm_check_axioms, tnorm_root

__version__ = "0.1.0"

__all__ = [
    "GroupAdapter", "Gyrogroup", "MobiusDisk", "MobiusPoint", "TableGyrogroup",
    "cyclic_group", "parse_literal", "rationals_additive", "real_line",
    "verify_gyrogroup_axioms", "verify_identities",
    "LawCheck", "PropertyReport",
    "LUKASIEWICZ", "MIN", "PRODUCT", "TNorm", "get_tnorm", "tnorm_check_axioms", "tnorm_root",
]

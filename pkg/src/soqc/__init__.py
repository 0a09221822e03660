"""Exact character theory, Bessel functions and gamma factors for quasi-split SO_{2l} over F_q."""

from .cyclotomic import CycArray, CycField, CycNum, cyc_arith, cyc_make
from .errors import InternalError, InvalidParameter, ReportIOError, ResourceLimit, SoqcError
from .field import FieldTable, FqElem, additive_char, fq_field
from .groups import GroupContext, build_group
from .reps import RepTheory
from .verify import CATALOG, Report, VerifyConfig, run_suite
from .weyl import BruhatData, WeylAtlas
from .zeta import HomPairing, InducedSpec, ZetaContext, hom_dimension

__all__ = [
    "CATALOG", "BruhatData", "CycArray", "CycField", "CycNum", "FieldTable", "FqElem", "GroupContext",
    "HomPairing", "InducedSpec", "InternalError", "InvalidParameter", "RepTheory", "Report",
    "ReportIOError", "ResourceLimit", "SoqcError", "VerifyConfig", "WeylAtlas", "ZetaContext",
    "additive_char", "build_group", "cyc_arith", "cyc_make", "fq_field", "hom_dimension", "run_suite",
]

"""Exact computations for one-generator n-ary operads.

Submodules: ``exactla`` (rational linear algebra), ``pseries`` (truncated
power series and reversion), ``opseries`` (Poincaré series and Koszulity
tests), ``trees`` (planar trees and associahedra), ``freeoperad`` (free
operads and quotients), ``koszuldual``, ``minimodel`` and ``cohomology``.
"""
__version__ = "0.1.0"

from .errors import DomainError, InconsistencyError  # noqa: E402
from .pseries import PSeries, revert  # noqa: E402
from .opseries import FamilyId, koszul_verdict, necessary_koszul_scan, poincare  # noqa: E402
from .freeoperad import Family  # noqa: E402

__all__ = [
    "__version__",
    "DomainError",
    "InconsistencyError",
    "PSeries",
    "revert",
    "FamilyId",
    "Family",
    "poincare",
    "koszul_verdict",
    "necessary_koszul_scan",
]

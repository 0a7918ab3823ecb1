"""Numerical criteria for differences of weighted differentiation composition operators.

For symbols phi_1, phi_2 (self-maps of the unit disk) and multipliers
u_1, u_2, the operator (D^m_{phi,u} f)(z) = u(z) f^(m)(phi(z)) is studied
from the Bloch-type space B^alpha to a weighted space H_v^inf.  The
package evaluates the sup-type quantities that decide boundedness of
D^m_{phi1,u1} - D^m_{phi2,u2}, their boundary (essential) versions, and a
set of property checks for the supporting inequalities.

>>> from wdcdiff import DiskGrid, analyze, presets
>>> p = presets.identical_pair()
>>> r = analyze(p.pair, p.params, DiskGrid(6, 4), oracle=False)
>>> max(r.Q_T, r.Q_test, r.Q_pow, r.E_T, r.E_test, r.E_pow)
0.0
"""

from . import presets
from .criteria import CriterionReport, analyze, quantity_pow, quantity_T, quantity_test
from .disk_metrics import bloch_norm, boundary_limsup, rho, sup_disk, weighted_norm
from .errors import (ConfigError, DomainError, NumericalError, SelfMapViolation,
                     TruncationError, WdcError)
from .grid import AGrid, DiskGrid
from .series import PowerSeries, fa_series, ga_series, monomial_bloch_norm
from .symbols import (SpaceParams, SymbolPair, parse_symbol, parse_weight, StandardPower,
                      ConstantOne, CustomRadial)

__all__ = [
    "AGrid", "ConfigError", "ConstantOne", "CriterionReport", "CustomRadial", "DiskGrid",
    "DomainError", "NumericalError", "PowerSeries", "SelfMapViolation", "SpaceParams",
    "StandardPower", "SymbolPair", "TruncationError", "WdcError", "analyze", "bloch_norm",
    "boundary_limsup", "fa_series", "ga_series", "monomial_bloch_norm", "parse_symbol",
    "parse_weight", "presets", "quantity_T", "quantity_pow", "quantity_test", "rho",
    "sup_disk", "weighted_norm",
]

__version__ = "0.1.0"

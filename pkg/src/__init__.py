"""theta-regulator - p-adic and complex regulators of K_2 symbols on Tate and nodal curves"""

from .config import get_settings
from .padic import FieldSpec, PAdicElement
from .tate import TateCurve, ThetaProduct

__all__ = ["get_settings", "FieldSpec", "PAdicElement", "TateCurve", "ThetaProduct"]

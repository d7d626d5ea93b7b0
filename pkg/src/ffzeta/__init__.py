"""Zeta and L-functions of elliptic curves over F_q(t) and their elliptic surfaces."""

from .fields import FieldDesc, FieldElem, make_field
from .places import Place, RatFunc
from .series import TruncatedSeries, ZRational

__all__ = ["FieldDesc", "FieldElem", "make_field", "Place", "RatFunc", "TruncatedSeries", "ZRational"]
__version__ = "0.1.0"

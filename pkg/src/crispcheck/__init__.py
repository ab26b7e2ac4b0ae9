"""crispcheck: decide, certify or refute crispness (purity / universal
injectivity) of ring homomorphisms between finitely presented algebras."""

__version__ = "0.1.0"

from .fields import GF, QQ
from .poly import PolyRing
from .ideals import Ideal, eliminate, saturate
from .algebras import FPAlgebra, RingMap
from .fpmodules import FPModule, ModuleMap
from .primes import PrimePoint
from .verdicts import CrispVerdict, SearchBudget

__all__ = ["GF", "QQ", "PolyRing", "Ideal", "eliminate", "saturate",
           "FPAlgebra", "RingMap", "FPModule", "ModuleMap", "PrimePoint",
           "CrispVerdict", "SearchBudget", "__version__"]

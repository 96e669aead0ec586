"""Root multiplicities, root strings and their growth for symmetrizable Kac-Moody algebras."""

from .cartan import CartanMatrix, Symmetrizer, TypeTag, classify_type, symmetrize, validate
from .errors import KMRootsError
from .lattice import GramTable, RootVector, form, norm
from .multiplicity import MultiplicityTable, load_or_build
from .strings import analyze, classify, extract
from .verify import run_verify
from .weyl import RootKind, classify_root

__version__ = "0.1.0"

__all__ = [
    "CartanMatrix",
    "GramTable",
    "KMRootsError",
    "MultiplicityTable",
    "RootKind",
    "RootVector",
    "Symmetrizer",
    "TypeTag",
    "analyze",
    "classify",
    "classify_root",
    "classify_type",
    "extract",
    "form",
    "load_or_build",
    "norm",
    "run_verify",
    "symmetrize",
    "validate",
]

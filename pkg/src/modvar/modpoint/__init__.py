"""Module points, their linear algebra, decomposition and defining equations."""

from .decompose import (
    WHOLE,
    DecompositionResult,
    Split,
    Summand,
    check_decomposition,
    decompose,
    fitting_split,
    is_isomorphic,
    split_once,
)
from .io import ModuleFormatError, format_module, load_module, parse_module, save_module
from .linear import (
    ConsistencyError,
    DerBasis,
    GradedDerBasis,
    HomBasis,
    der_basis,
    der_dim,
    der_system,
    end_dim,
    ext1_dim,
    extension_from_derivation,
    extension_from_graded,
    graded_der_basis,
    graded_der_dim,
    hom_basis,
    hom_dim,
    inner_der_dim,
    inner_derivation,
    is_derivation,
    is_homomorphism,
    normalize_derivation,
)
from .point import (
    MismatchError,
    ModulePoint,
    check_point,
    direct_sum,
    generator_form,
    require_same_space,
    simple_module,
    zero_module,
)
from .variety import PolySystem, jacobian, orbit_dim, tangent_dim, variety_equations

__all__ = [name for name in dir() if not name.startswith("_")]

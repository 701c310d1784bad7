"""Based rings, based modules and torsion-freeness."""

from ._core import (
    FusionError,
    InputError,
    Module,
    Ring,
    canonical_json,
    chebyshev_coeffs,
    dynkin_classify,
    enumerate_modules,
    free_product,
    is_torsion_free,
    isomorphic,
    load_module,
    load_ring,
    standard_module,
    tensor_product,
)

__all__ = [
    "FusionError",
    "InputError",
    "Module",
    "Ring",
    "canonical_json",
    "chebyshev_coeffs",
    "dynkin_classify",
    "enumerate_modules",
    "free_product",
    "is_torsion_free",
    "isomorphic",
    "load_module",
    "load_ring",
    "standard_module",
    "tensor_product",
]

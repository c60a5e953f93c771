"""
Abstract generator layer: Omega/W words, the spaces A_m, realizations and
the positive-mode action.
"""

from .families import (
    FAMILIES,
    BaseFamily,
    OrthogonalFamily,
    OrthosymplecticFamily,
    SymplecticFamily,
    get_family,
    list_families,
)
from .omega import (
    Omega,
    WPoly,
    a_component,
    am_basis,
    am_dimension,
    am_generators,
    derive_omega,
    derived_w,
    generator_coords,
    omega,
    omega_coords,
    pr,
    w_generator,
)
from .pplus import (
    express_weight_map,
    mw_matrix,
    pplus_act_indices,
    pplus_act_orth,
    pplus_lambda,
    raising_residual,
)
from .walgebra import WAlgebra, generator_product, walgebra


def realize(family: BaseFamily, p: WPoly, threads: int = 1):
    """Image of p in the family's free field algebra."""
    return family.realize(p, threads=threads)


def canonicalize(target, ordered) -> WPoly:
    """
    Canonical form of right-nested products written in any factor order.

    Args:
        target: A family or a central charge
        ordered: Map from Omega sequences to coefficients
    """
    charge = target.central_charge if isinstance(target, BaseFamily) else target
    return walgebra(charge).canonicalize(ordered)


__all__ = [
    "FAMILIES",
    "BaseFamily",
    "OrthogonalFamily",
    "OrthosymplecticFamily",
    "SymplecticFamily",
    "Omega",
    "WAlgebra",
    "WPoly",
    "a_component",
    "am_basis",
    "am_dimension",
    "am_generators",
    "canonicalize",
    "derive_omega",
    "derived_w",
    "express_weight_map",
    "generator_coords",
    "generator_product",
    "get_family",
    "list_families",
    "mw_matrix",
    "omega",
    "omega_coords",
    "pplus_act_indices",
    "pplus_act_orth",
    "pplus_lambda",
    "pr",
    "raising_residual",
    "realize",
    "w_generator",
    "walgebra",
]

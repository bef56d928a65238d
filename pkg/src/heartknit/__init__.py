"""Auslander-Reiten theory for extended hearts of proper connective dg path algebras."""
from .exactla import GF, QQ, Field
from .dgalgebra import Arrow, DGPathAlgebra, GradedQuiver, build_algebra, opposite_algebra
from .dgmodule import DGModule, DGMorphism, cone, cocone, shift, simple
from .semifree import SemifreeModule, d_term_resolution, derived_projective_cover, nakayama
from .heart import Heart, HeartObject, HeartMorphism
from .arquiver import (ARQuiver, almost_split_conflation, decompose, emit_dot, emit_json, iso_test,
                       knit, label_string, verify_almost_split, verify_quiver)
from .sigma import sigma_route
from .dsl import parse_algebra, parse_module, print_algebra, print_module

__all__ = [
    "GF", "QQ", "Field", "Arrow", "DGPathAlgebra", "GradedQuiver", "build_algebra",
    "opposite_algebra", "DGModule", "DGMorphism", "cone", "cocone", "shift", "simple",
    "SemifreeModule", "d_term_resolution", "derived_projective_cover", "nakayama", "Heart",
    "HeartObject", "HeartMorphism", "ARQuiver", "almost_split_conflation", "decompose",
    "emit_dot", "emit_json", "iso_test", "knit", "label_string", "verify_almost_split", "verify_quiver",
    "sigma_route", "parse_algebra", "parse_module", "print_algebra", "print_module",
]

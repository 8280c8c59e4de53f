from .constructions import (ball_action, complete_partial, extension_morphism, folner_epsilon,
                            folner_morphism, free_product_morphism, is_nice, nice_repair,
                            product_morphism, symmetric_closure, to_unitary)
from .models import (FreeProductModel, GroupModel, LatticeModel, PresentationModel, ProductModel,
                     TableModel, lattice_box)
from .morphism import ApproxMorphism, DefectReport, defect, format_morphism, parse_morphism

__all__ = [
    "ball_action", "complete_partial", "extension_morphism", "folner_epsilon", "folner_morphism",
    "free_product_morphism", "is_nice", "nice_repair", "product_morphism", "symmetric_closure",
    "to_unitary", "FreeProductModel", "GroupModel", "LatticeModel", "PresentationModel",
    "ProductModel", "TableModel", "lattice_box", "ApproxMorphism", "DefectReport", "defect",
    "format_morphism", "parse_morphism",
]

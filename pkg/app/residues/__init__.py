"""Foliations on P^n, their singular components and Baum-Bott residues."""

from app.residues.chern import (
    ChernMonomial,
    CohomologyClass,
    GlobalCheckReport,
    characteristic_coefficients,
    component_class,
    global_check,
    normal_class_value,
)
from app.residues.foliation import (
    AffinePoint,
    Chart,
    DiscSlice,
    FoliationSpec,
    OneForm,
    VectorFieldGerm,
    dehomogenize,
    det_normal_degree,
    dual_vector_field_2d,
    homogenize,
    restrict_to_disc,
)
from app.residues.residue import (
    ComponentResidue,
    PointResidue,
    ResidueValue,
    chern_eval,
    grothendieck_monomial,
    grothendieck_nondegenerate,
    grothendieck_transformation,
    residue_for_component,
)
from app.residues.singular import (
    GenericityReport,
    SingularComponent,
    SingularPoint2D,
    VerificationReport,
    check_genericity,
    isolated_points_2d,
    local_multiplicity,
    singular_ideal,
    verify_component,
)

__all__ = [
    "AffinePoint",
    "Chart",
    "ChernMonomial",
    "CohomologyClass",
    "ComponentResidue",
    "DiscSlice",
    "FoliationSpec",
    "GenericityReport",
    "GlobalCheckReport",
    "OneForm",
    "PointResidue",
    "ResidueValue",
    "SingularComponent",
    "SingularPoint2D",
    "VectorFieldGerm",
    "VerificationReport",
    "characteristic_coefficients",
    "check_genericity",
    "chern_eval",
    "component_class",
    "dehomogenize",
    "det_normal_degree",
    "dual_vector_field_2d",
    "global_check",
    "grothendieck_monomial",
    "grothendieck_nondegenerate",
    "grothendieck_transformation",
    "homogenize",
    "isolated_points_2d",
    "local_multiplicity",
    "normal_class_value",
    "residue_for_component",
    "restrict_to_disc",
    "singular_ideal",
    "verify_component",
]

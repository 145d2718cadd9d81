"""Exact exterior calculus for codimension-one foliations given by rational 1-forms."""

from .charp import (
    DualFrame,
    batch_integrating_factors,
    dual_frame,
    integrating_factor,
    invariant_hypersurface_candidates,
    vf_pth_power,
)
from .errors import (
    ChartMismatch,
    DecompositionFails,
    DegenerateFrame,
    GaugeBreaksRelations,
    GcdDegenerate,
    GvError,
    NotExpressible,
    NotIntegrable,
    NotNormalized,
    NotRadialCubicPart,
    PClosedCase,
    RadialFoliation,
    VanishingLeadCoefficient,
    ZeroDenominator,
    ZeroFunction,
)
from .exterior import (
    DiffForm,
    VectorField,
    d_of,
    ext_d,
    form_apply,
    form_str,
    interior,
    is_integrable,
    lie_derivative,
    pullback,
    same_foliation,
    wedge,
    wedge_all,
)
from .field import (
    Chart,
    MultiPoly,
    RatFn,
    as_ratfn,
    exact_div,
    poly_gcd,
    poly_str,
    rf_normalize,
    squarefree_decomposition,
)
from .gv import (
    AffineCertificate,
    ClosedKernelWitness,
    DefectReport,
    FiniteGVReport,
    FlagReport,
    GVSequence,
    Inconclusive,
    PullbackReport,
    finite_gv_classify,
    finite_gv_pullback,
    finite_gv_verify,
    flag_decompose,
    flag_forms,
    form_ratio,
    gv_from_field,
    gv_invariant,
    gv_rescale,
    gv_shift,
    gv_verify,
)
from .transverse import (
    Triple,
    TripleReport,
    classify_structure,
    riccati_triple,
    suspension_form,
    triple_gauge,
    triple_gauge_regular,
    triple_verify,
)
from .zseries import (
    FormalOmega,
    Substitution,
    structure_defect,
    structure_defects,
    substitute_series,
)

__all__ = [
    "Chart",
    "MultiPoly",
    "RatFn",
    "as_ratfn",
    "exact_div",
    "poly_gcd",
    "poly_str",
    "rf_normalize",
    "squarefree_decomposition",
    "DiffForm",
    "VectorField",
    "wedge",
    "wedge_all",
    "ext_d",
    "d_of",
    "interior",
    "form_apply",
    "lie_derivative",
    "is_integrable",
    "same_foliation",
    "pullback",
    "form_str",
    "FormalOmega",
    "Substitution",
    "structure_defect",
    "structure_defects",
    "substitute_series",
    "Triple",
    "TripleReport",
    "triple_verify",
    "classify_structure",
    "triple_gauge",
    "triple_gauge_regular",
    "riccati_triple",
    "suspension_form",
    "GVSequence",
    "DefectReport",
    "FlagReport",
    "FiniteGVReport",
    "AffineCertificate",
    "ClosedKernelWitness",
    "Inconclusive",
    "PullbackReport",
    "gv_from_field",
    "gv_verify",
    "gv_rescale",
    "gv_shift",
    "flag_forms",
    "flag_decompose",
    "gv_invariant",
    "finite_gv_verify",
    "finite_gv_classify",
    "finite_gv_pullback",
    "form_ratio",
    "DualFrame",
    "dual_frame",
    "vf_pth_power",
    "integrating_factor",
    "invariant_hypersurface_candidates",
    "batch_integrating_factors",
    "GvError",
    "ChartMismatch",
    "ZeroDenominator",
    "VanishingLeadCoefficient",
    "NotIntegrable",
    "NotNormalized",
    "ZeroFunction",
    "GaugeBreaksRelations",
    "DecompositionFails",
    "NotExpressible",
    "GcdDegenerate",
    "DegenerateFrame",
    "PClosedCase",
    "RadialFoliation",
    "NotRadialCubicPart",
]

"""hbargeo: effective Hamiltonians of mechanical systems, Maupertuis support
values, flat-set polygon geometry, and homoclinic orbit shooting."""

from hbargeo._core import (
    ConfigError,
    ConvexPolygon,
    CorrectorField,
    HomoclinicRecord,
    Orbit,
    PolyEdge,
    PotentialSpec,
    SolverError,
    SupportEntry,
    SupportTable,
    build_f0,
    build_support_table,
    eval_potential,
    hbar_separable_oracle,
    homology_fan,
    lambda_proof,
    lambda_statement,
    lp_demo,
    make_separable,
    make_template,
    near_origin_action,
    potential_from_json,
    potential_to_json,
    shoot_homoclinic,
    solve_cell,
    support_value,
    vertex_unimodular_check,
)

__all__ = [
    "ConfigError",
    "ConvexPolygon",
    "CorrectorField",
    "HomoclinicRecord",
    "Orbit",
    "PolyEdge",
    "PotentialSpec",
    "SolverError",
    "SupportEntry",
    "SupportTable",
    "build_f0",
    "build_support_table",
    "eval_potential",
    "hbar_separable_oracle",
    "homology_fan",
    "lambda_proof",
    "lambda_statement",
    "lp_demo",
    "make_separable",
    "make_template",
    "near_origin_action",
    "potential_from_json",
    "potential_to_json",
    "shoot_homoclinic",
    "solve_cell",
    "support_value",
    "vertex_unimodular_check",
]

"""Pseudo-Boolean polynomial dimensionality reduction and linear cluster analysis."""

from ._pbdr import (
    CostMatrix,
    DecisionRule,
    DegenerateInput,
    Hyperplane,
    InvalidInput,
    ParseError,
    Polynomial,
    Record,
    ReducedSample,
    Schema,
    accuracy,
    apply_mapping,
    argmin_subsets,
    assignment_for_subset,
    classify,
    confidence,
    degree_project,
    enumerate_subsets,
    equivalent,
    evaluate,
    evaluate_subset,
    formulate,
    group_equivalent,
    load_iris,
    load_wdbc,
    objective,
    parse_mapping,
    parse_rule,
    reduce,
    reduce_dataset,
    reduce_sample,
    run_cli,
    schema,
    search_separator_exact,
    search_separator_pocket,
    wdbc_features,
)

__all__ = [name for name in dir() if not name.startswith("_")]

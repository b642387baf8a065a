"""Weighted AND/OR attack-graph analysis.

Thin Python surface over the C++ core: parse ``.agf`` graph files, enumerate
and score admissible attack scenarios, rank critical nodes, compute minimal
cut sets, and evaluate what-if mitigations against the bundled
attack/mitigation catalog.
"""

from importlib import resources

from ._core import (  # noqa: F401
    AnalysisError,
    AttackGraph,
    Catalog,
    Column,
    GraphInvalid,
    MitigationAction,
    MitigationRecord,
    Recommendation,
    Scenario,
    ScenarioTable,
    Step,
    WhatIfResult,
    brute_force_oracle,
    bundled_catalog,
    chain_average_risk,
    derive_roles,
    enumerate_chains,
    enumerate_scenarios,
    goal_percentage,
    load,
    load_catalog,
    load_file,
    lookup,
    minimal_cut_sets,
    node_frequency,
    recommend,
    render_table,
    score_scenario,
    serialize_catalog,
    validate_text,
    what_if,
)


def fixture_path(name: str) -> str:
    """Absolute path of a bundled data file, e.g. ``figure2.agf``."""
    return str(resources.files(__package__).joinpath("data", name))

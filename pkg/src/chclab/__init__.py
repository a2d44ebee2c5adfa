"""Solver and verification workbench for constrained Horn clauses.

The package analyzes systems of Horn clauses whose constraints are linear
over the rationals.  It provides:

* an abstract solver over interval boxes with alternating forward/backward
  refinement (:mod:`chclab.solver`),
* query-answer program transformations that emulate the alternation
  (:mod:`chclab.qa`),
* exact reference semantics — finite-universe ground fixpoints
  (:mod:`chclab.concrete`) and derivation trees (:mod:`chclab.trees`) —
  used to cross-check the abstract results,
* a small text format for systems and models (:mod:`chclab.parser`).

The ``chclab`` console script exposes all of it; see ``chclab --help``.
"""

from .concrete import (
    GroundAtom,
    check_combined_closure,
    ground_relation,
    is_model,
    lfp_backward,
    lfp_combined,
    lfp_forward,
)
from .depgraph import Component, dependency_order
from .domain import AbstractElement, Bound, Box, Interval
from .linlogic import ResourceLimitError, is_sat, project_to_box, to_dnf
from .parser import ParseError, parse_model, parse_system
from .qa import QASystem, qa_iterated, qa_transform, qa_two_step
from .solver import (
    AlternationTrace,
    AnalysisConfig,
    RefinedModel,
    Verdict,
    alternate,
    analyze_backward,
    analyze_forward,
    certify_trace,
    check_model,
    coarse_backward,
    goal_disjoint,
    refined_model,
)
from .syntax import (
    Clause,
    GoalEntry,
    GoalSpec,
    LinConstraint,
    LinTerm,
    PredApp,
    PredDecl,
    System,
    format_model,
    format_system,
)
from .trees import (
    DerivTree,
    atoms_abstraction,
    backward_trees,
    check_tree_props,
    forward_trees,
    tree_post,
    tree_pre,
)

__all__ = [
    "AbstractElement",
    "AlternationTrace",
    "AnalysisConfig",
    "Bound",
    "Box",
    "Clause",
    "Component",
    "DerivTree",
    "GoalEntry",
    "GoalSpec",
    "GroundAtom",
    "Interval",
    "LinConstraint",
    "LinTerm",
    "ParseError",
    "PredApp",
    "PredDecl",
    "QASystem",
    "RefinedModel",
    "ResourceLimitError",
    "System",
    "Verdict",
    "alternate",
    "analyze_backward",
    "analyze_forward",
    "atoms_abstraction",
    "backward_trees",
    "certify_trace",
    "check_combined_closure",
    "check_model",
    "check_tree_props",
    "coarse_backward",
    "dependency_order",
    "forward_trees",
    "format_model",
    "format_system",
    "goal_disjoint",
    "ground_relation",
    "is_model",
    "is_sat",
    "lfp_backward",
    "lfp_combined",
    "lfp_forward",
    "parse_model",
    "parse_system",
    "project_to_box",
    "qa_iterated",
    "qa_transform",
    "qa_two_step",
    "refined_model",
    "to_dnf",
    "tree_post",
    "tree_pre",
]

__version__ = "0.1.0"

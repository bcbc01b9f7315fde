"""Labelled graph sequences with the C'(lambda) small cancellation property."""
from .bounds import (
    BoundParams,
    BoundResult,
    asymptotic_lower_bound,
    edge_growth_bound,
    eps_girth_bound,
    exact_lower_bound,
    main_bound,
    osajda_bound,
)
from .cancellation import Thresholds, ViolationReport, find_violations, thresholds, verify_sequence
from .graphs import DirectedPath, Graph, SequenceSpec, check_sequence, diameter, girth, read_graph, write_graph
from .overlap import analyze_overlap
from .solver import CountContext, SolverConfig, backtracking_label, claim_ratio, count_valid, label_sequence
from .words import Labelling, is_reduced, path_word, read_labelling, write_labelling

__version__ = "0.1.0"

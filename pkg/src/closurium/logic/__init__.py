"""Closure-logic syntax, path shapes and semantics."""

from __future__ import annotations

from .paths import PathShape
from .semantics import (
    Evaluator,
    UntilResult,
    boundary,
    check_until_leq_surrounded,
    eval_boundary,
    eval_reach,
    eval_surrounded,
    eval_surrounded_oracle,
    eval_until,
    eval_until_oracle,
    evaluate,
    is_connected,
    reach,
    reach_oracle,
    surrounded,
    surrounded_oracle,
    until,
    until_fast,
    until_oracle,
)
from .syntax import (
    And,
    Atom,
    Bottom,
    Boundary,
    Closure,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Not,
    Or,
    Reach,
    Surrounded,
    Top,
    Until,
    parse_formula,
    pretty,
)

"""Higher-order pi-calculus workbench with soft (polynomial-time) restrictions.

Parse, check, reduce and measure processes of HOpi, LHOpi, SHOpi and
eSHOpi(IC), and replay reductions against their resource bounds.
"""

from .embed import check_simulation, embed_process, embed_value
from .metrics import (
    MetricsSnapshot,
    box_depth,
    dup_factor,
    pgr,
    pgr_param,
    poly_bound,
    size,
    snapshot,
    webi,
    webi_param,
    weight,
    weight_param,
)
from .parser import (
    ParseError,
    load,
    parse_process,
    parse_value,
    print_process,
    print_value,
)
from .reduction import (
    CanonicalProcess,
    Redex,
    RedexKind,
    ReductionGraph,
    Trace,
    canonical_form,
    congruent,
    explore,
    redexes,
    run,
    step,
)
from .syntax import (
    NIL,
    UNIT,
    Abs,
    App,
    Box,
    Input,
    Kind,
    Nil,
    Output,
    Par,
    Restrict,
    Unit,
    Var,
    alpha_canonicalize,
    alpha_eq,
    free_channels,
    free_vars,
    nfo,
    node_count,
    occurrences,
    substitute,
)
from .verifier import VerificationReport, congruence_fuzz, fuzz_generate, verify_trace
from .wellformed import (
    CALCULI,
    VarClass,
    WfReport,
    check,
    check_eshopi,
    check_hopi,
    check_lhopi,
    check_shopi,
)

__version__ = "0.1.0"

__all__ = [
    "CALCULI",
    "NIL",
    "UNIT",
    "Abs",
    "App",
    "Box",
    "CanonicalProcess",
    "Input",
    "Kind",
    "MetricsSnapshot",
    "Nil",
    "Output",
    "Par",
    "ParseError",
    "Redex",
    "RedexKind",
    "ReductionGraph",
    "Restrict",
    "Trace",
    "Unit",
    "Var",
    "VarClass",
    "VerificationReport",
    "WfReport",
    "alpha_canonicalize",
    "alpha_eq",
    "box_depth",
    "canonical_form",
    "check",
    "check_eshopi",
    "check_hopi",
    "check_lhopi",
    "check_shopi",
    "check_simulation",
    "congruence_fuzz",
    "congruent",
    "dup_factor",
    "embed_process",
    "embed_value",
    "explore",
    "free_channels",
    "free_vars",
    "fuzz_generate",
    "load",
    "nfo",
    "node_count",
    "occurrences",
    "parse_process",
    "parse_value",
    "pgr",
    "pgr_param",
    "poly_bound",
    "print_process",
    "print_value",
    "redexes",
    "run",
    "size",
    "snapshot",
    "step",
    "substitute",
    "verify_trace",
    "webi",
    "webi_param",
    "weight",
    "weight_param",
]

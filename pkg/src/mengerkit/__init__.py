"""Workbench for finite algebras with one superassociative (n+1)-ary operation.

Build an algebra, close its unary polynomial terms, and study the partitions,
residues and strongness notions a subset of the carrier induces; enumerate
congruences and classify all subsets on desk-scale carriers.
"""

from .core import (
    MengerAlgebra,
    SELECTOR,
    SuperassocReport,
    build_algebra,
    verify_superassociativity,
)
from .errors import (
    ArityError,
    CapacityError,
    DuplicateEntryError,
    MengerError,
    MissingEntryError,
    MultipleVariablesError,
    NoVariableError,
    NotSuperassociativeError,
    TermSyntaxError,
    UnknownElementError,
)
from .terms import (
    Node,
    TranslationClosure,
    VARIABLE,
    associate_polynomial,
    compose,
    eval_term,
    format_term,
    parse_term,
    translation_closure,
)
from .relations import (
    Check,
    PartialPartition,
    Partition,
    check_partially_v_cancellative,
    check_partially_v_cancellative_translations,
    check_relation_property,
    check_subset_property,
    meet_partitions,
    relation_property_names,
    subset_property_names,
)
from .principal import (
    ClassTheoremReport,
    ClauseResult,
    FamilyMember,
    PrincipalAnalysis,
    check_strong_class_theorems,
    full_analysis,
    is_bistrong,
    is_l_strong,
    is_strong,
    l_analysis,
    v_analysis,
)
from .enumeration import (
    ClassificationRow,
    FunctionFamily,
    bell_number,
    classify_subsets,
    enumerate_congruences,
    enumerate_partitions,
    generate_function_algebra,
    semigroup_as_menger,
)
from .suite import SuiteItem, SuiteReport, run_paper_suite, suite_item_ids
from .cli import (
    AlgebraFileError,
    format_algebra_file,
    load_algebra,
    main,
    parse_algebra_text,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraFileError",
    "ArityError",
    "CapacityError",
    "Check",
    "ClassificationRow",
    "ClassTheoremReport",
    "ClauseResult",
    "DuplicateEntryError",
    "FamilyMember",
    "FunctionFamily",
    "MengerAlgebra",
    "MengerError",
    "MissingEntryError",
    "MultipleVariablesError",
    "NoVariableError",
    "Node",
    "NotSuperassociativeError",
    "PartialPartition",
    "Partition",
    "PrincipalAnalysis",
    "SELECTOR",
    "SuiteItem",
    "SuiteReport",
    "SuperassocReport",
    "TermSyntaxError",
    "TranslationClosure",
    "UnknownElementError",
    "VARIABLE",
    "associate_polynomial",
    "bell_number",
    "build_algebra",
    "check_partially_v_cancellative",
    "check_partially_v_cancellative_translations",
    "check_relation_property",
    "check_strong_class_theorems",
    "check_subset_property",
    "classify_subsets",
    "compose",
    "enumerate_congruences",
    "enumerate_partitions",
    "eval_term",
    "format_algebra_file",
    "format_term",
    "full_analysis",
    "generate_function_algebra",
    "is_bistrong",
    "is_l_strong",
    "is_strong",
    "l_analysis",
    "load_algebra",
    "main",
    "meet_partitions",
    "parse_algebra_text",
    "parse_term",
    "relation_property_names",
    "run_paper_suite",
    "semigroup_as_menger",
    "subset_property_names",
    "suite_item_ids",
    "translation_closure",
    "v_analysis",
    "verify_superassociativity",
]

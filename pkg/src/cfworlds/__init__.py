"""Verification workbench for two semantics of counterfactuals.

The package evaluates intervention formulas both on structural equation
models (a context plus equations, counterfactuals as solutions of mutilated
systems) and on ordered-world structures (counterfactuals as truth at the
nearest antecedent worlds).  On top of the two evaluators sit constructive
translations between the semantics, exhaustive and randomized soundness
checking for an axiom schema catalog, and a replayable Hilbert-style proof
checker.  The built-in reproduction suite (`cfworlds paper-suite`) reruns
every headline result from the shipped fixtures.
"""

from .batch import Pack, eval_block, pack_population, pack_structures
from .bridge import (
    EquivalenceReport,
    NotRecursiveStructure,
    WorldNaming,
    causal_to_structure,
    certify_equivalence,
    lprop_corpus,
    structure_to_causal,
)
from .catalog import branching, example_c5, forest_fire, tstar, tstar_formula
from .causal_eval import IllFormed, LanguageTooRich, eval_causal, sat, to_lprop
from .checklab import (
    CAUSAL_CLASSES,
    STRUCTURE_CLASSES,
    ClassDescriptor,
    Countermodel,
    MatrixCell,
    NotFound,
    ValidAtBound,
    check_many,
    check_schema,
    check_validity,
    find_countermodel,
    soundness_matrix,
)
from .derivations import impossibility_script, transitivity_script
from .enumeration import (
    causal_count,
    causal_models,
    causal_population,
    random_full_structure,
    random_recursive_model,
    structure_population,
    structures_mrec,
    three_var_signature,
    two_var_signature,
)
from .formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Cf,
    Falsity,
    Formula,
    FormulaSyntaxError,
    Iff,
    Implies,
    LangClass,
    Not,
    Or,
    Truth,
    UnknownOperator,
    atoms_of,
    classify,
    conj,
    disj,
    fmt,
    parse,
    prefix,
    random_formula,
    strict_equal,
    well_formed,
)
from .models import (
    CausalModel,
    Signature,
    class_of,
    dependence_graph,
    in_Tun,
    intervene,
    is_recursive,
    load_model,
    make_model,
    save_model,
    solutions,
    table_from_fn,
)
from .proofs import (
    AX,
    AX_PLUS,
    AxiomBase,
    AxiomInstance,
    BadSubstitution,
    FirstFailure,
    ForwardReference,
    MP,
    ProofError,
    ProofLine,
    ProofScript,
    RA1,
    RA2,
    RuleMismatch,
    SchemaDisabled,
    SideConditionViolated,
    TautologyInstance,
    Verified,
    check_line,
    check_proof,
    is_tautology,
    script_from_json,
    script_to_json,
)
from .schemas import SCHEMAS, Bounds, BoundsTooLarge, Schema, formula_pool, instantiate
from .structures import (
    CounterfactualStructure,
    StructureClass,
    StructureError,
    chain_order,
    classify_structure,
    closest,
    eval_cf,
    load_structure,
    make_structure,
    save_structure,
)
from .suite import ClaimResult, fixture_path, run_suite, write_fixtures

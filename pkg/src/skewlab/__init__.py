"""skewlab: exact analysis and synthesis of finite-fiber group extensions.

Computes ergodic decompositions of permutation-labeled Markov systems, the
subgroup conjugacy class that classifies them up to relative speedup, and
finite stages of the constructive speedup with pointwise verification.
"""

from .castle import (
    Castle,
    FinitePointSystem,
    Tower,
    build_exact_castle,
    build_tower,
    cocycle_signature,
    cocycle_value,
    column_castle,
    refine_check,
    trim_top,
)
from .ergodic import (
    GpResult,
    LiftedGraph,
    components,
    fiber_transitive,
    gp_invariant,
    gp_report,
    is_G_ergodic,
    lift,
    local_group_reach,
    local_group_voltage,
)
from .perm import (
    ConjClass,
    PairPartition,
    Perm,
    PermGroup,
    compose,
    conjugacy_class,
    contains_up_to_conjugacy,
    generate_subgroup,
    identity,
    inverse,
    is_transitive,
    partition_group,
    symmetric_group,
    trivial_group,
)
from .speeduprel import SpeedupVerdict, decide, verify_witness
from .symbolic import (
    Edge,
    LabeledSystem,
    VertexFunction,
    full_shift,
    system_from_json,
    system_to_json,
    twist,
    word_cocycle,
)
from .synth import (
    SpeedupMap,
    SpeedupStage,
    StageReport,
    TargetCastleSpec,
    TowerSpec,
    build_stage,
    label_group,
    lift_is_connected,
    little_push,
    push_forward,
    verify_stage,
)

__version__ = "0.1.0"

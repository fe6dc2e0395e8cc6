"""Deterministic batched 2D skirmish simulator."""
from .core import (
    ACTION_ATTACK,
    ACTION_MOVE_NEG_X,
    ACTION_MOVE_NEG_Y,
    ACTION_MOVE_POS_X,
    ACTION_MOVE_POS_Y,
    ACTION_NOOP,
    ACTION_ROTATE,
    CONTROLLERS,
    Composition,
    FieldConfig,
    HEURISTIC_TIERS,
    HeuristicParams,
    NUM_ACTIONS,
    Outcome,
    PhysicsParams,
    ScenarioConfig,
    ScenarioFormatError,
    ActionMaskError,
    TEAM_ALLY,
    TEAM_ENEMY,
    TeamConfig,
    UNIT_PRESETS,
    UnitPlacement,
    UnitSpec,
    UnitState,
    ValidationReport,
    Zone,
    ZONE_TYPES,
    format_composition_name,
    parse_composition_name,
    validate_scenario,
)
from .rng import TAG_EPISODE, derive_seed, hash_u64
from .environment import (
    BatchSim,
    EnvState,
    StepResult,
    action_mask,
    reset,
    reset_batch,
    step,
    step_batch,
    terminal_outcome,
)
from .physics import (
    Contact,
    apply_boundary,
    detect_contacts,
    integrate_kinematics,
    resolve_contacts,
)
from .combat import (
    attackable_matrix,
    hurtbox_hits,
    resolve_combat,
    select_target,
)
from .perception import (
    ObservationLayout,
    build_global_state,
    build_observation,
    in_fov,
    update_reveal_timers,
    visibility_matrix,
)
from .heuristics import (
    HeuristicMemory,
    classify_roles,
    desired_position,
    heuristic_step,
    select_heuristic_target,
)
from .scenario import (
    LevelGenSpec,
    MUTATION_OPS,
    catalog,
    compose_scenario,
    default_level_spec,
    levelgen_spec_from_dict,
    load_catalog_scenario,
    load_levelgen_spec,
    load_scenario,
    load_scenario_file,
    mutate_level,
    random_scenario,
    resolve_scenario,
    sample_level,
    save_scenario,
    save_scenario_file,
    validate_or_raise,
    zone_fragments,
)
from .rollout import (
    EpisodeStats,
    ReplayBook,
    benchmark_throughput,
    parse_policy,
    reconfiguration_latency,
    run_rollouts,
    summarize,
    summary_from_trace,
)
from .render_svg import render_frame

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

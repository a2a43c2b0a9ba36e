"""Dynamic simplex strategy: myopic forward switching, planned reverse switching,
and a seeded synthetic benchmark to evaluate both."""

from .core import (
    ACTIONS,
    Action,
    Belief,
    ControllerId,
    MonitorState,
    RewardWeights,
    RoadType,
    SceneFeatures,
    SystemState,
    Track,
    TrafficLevel,
    Weather,
    forward_reward,
    infraction_score,
    normalize_speed,
    reverse_reward,
    switch_cost,
)
from .envmodels import (
    AlarmCell,
    AlarmParams,
    IntermittentParams,
    MissingCell,
    WeibullParams,
    intermittent_failure_rate,
    sample_alarm,
    sample_permanent_failure,
    step_traffic,
    step_weather,
    weather_bucket,
    weather_severity,
)
from .monitors import (
    Frame,
    FrameSpec,
    MartingaleState,
    detect_occlusion,
    martingale_step,
    p_value,
    read_pgm,
    synth_frame,
    write_pgm,
)
from .oracle import BlowUp, MicroSmdp, expectimax, greedy_action, load_micro_smdp
from .planner import (
    MctsConfig,
    PlanningAborted,
    PlanningModels,
    SwitchPolicy,
    advance_time,
    mcts_plan,
    plan_with_tree,
    ucb,
)
from .sim import (
    CollisionOutcome,
    ConfigError,
    EpisodeMetrics,
    FailureSchedule,
    SimConfig,
    Strategy,
    collision_trial,
    default_controller_models,
    default_tracks,
    inject_failure,
    run_episode,
    strategy_from_id,
)
from .surrogate import (
    ControllerModel,
    EmptyPartition,
    GroundTruthConfig,
    LookupTable,
    LutRecord,
    MissingCluster,
    MissingSurfaceCell,
    build_lut,
    load_lut,
    query_belief,
    save_lut,
    synth_ground_truth,
)
from .switcher import (
    Decision,
    DecisionEvent,
    EventKind,
    LatencyModel,
    ReverseMode,
    SupersededTransition,
    SwitchConfig,
    Switcher,
)

__version__ = "0.1.0"

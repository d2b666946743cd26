"""Thinging-machine modeling with built-in process mining.

Layers: static model (.tm) -> event regions (.ev) -> behavioral chronology
(.bh) -> simulation, conformance checking, and additive enhancement.
"""

from .behavior import (
    BehavioralModel,
    BehaviorDiff,
    diff_behaviors,
    enumerate_streams,
    export_behavior_dot,
    load_behavior,
    render_behavior,
)
from .conformance import (
    Accepted,
    ActivityMapping,
    Incomplete,
    Rejected,
    Trace,
    check_log,
    check_trace,
    finalize_monitor,
    load_mapping,
    start_monitor,
    step_monitor,
)
from .events import DynamicModel, load_events, validate_regions
from .mining import (
    aggregate_deviations,
    apply_edits,
    import_external_log,
    propose_edits,
)
from .model import (
    ModelError,
    ModelSyntaxError,
    StaticModel,
    export_static_dot,
    parse_model,
    validate_static,
)
from .simulate import (
    EventLog,
    Fault,
    SimConfig,
    inject_faults,
    read_log,
    simulate_log,
    write_log,
)
from .workspace import LoadedWorkspace, Workspace

__version__ = "0.1.0"

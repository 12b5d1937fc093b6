from .config import (
    CHECKS,
    SUBCOMMANDS,
    TARGETS,
    DomainConfig,
    ExperimentConfig,
    FamilyConfig,
    SweepConfig,
    apply_overrides,
    load_config,
    parse_boundary_spec,
    parse_point,
    validate,
    write_config,
)
from .golden_check import (
    DEFAULT_RTOL,
    MANIFEST,
    CellMismatch,
    GoldenReport,
    golden_check,
    read_tolerances,
)
from .run import RUNNERS, Check, RunResult, run
from .svg import loglog_svg, write_loglog_svg

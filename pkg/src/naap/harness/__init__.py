from .report import emit_importance, emit_scatter, render_markdown, write_report
from .runs import (
    ConfigError,
    Report,
    ReportRow,
    RunConfig,
    derive_seed,
    run_ablation,
    run_baseline,
    run_cell,
    run_extrapolation,
    subset_evaluator,
)

__all__ = [
    "ConfigError", "Report", "ReportRow", "RunConfig", "derive_seed", "emit_importance", "emit_scatter",
    "render_markdown", "run_ablation", "run_baseline", "run_cell", "run_extrapolation", "subset_evaluator",
    "write_report",
]

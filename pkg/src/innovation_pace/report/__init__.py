from .runner import build_context, build_tables, run, run_specs
from .selfcheck import CheckResult, selfcheck
from .spec import ReportSpec, UsageError, all_specs, valid_combinations_table
from .table import Table, read_csv

__all__ = [
    "CheckResult",
    "ReportSpec",
    "Table",
    "UsageError",
    "all_specs",
    "build_context",
    "build_tables",
    "read_csv",
    "run",
    "run_specs",
    "selfcheck",
    "valid_combinations_table",
]

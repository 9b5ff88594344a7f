"""
Static analysis of behavior trees: checking documents against an action catalog and
repairing the defects that generated trees typically contain.

.. autosummary::
   :nosignatures:

   ~catalog.ActionCatalog
   ~catalog.PortSchema
   ~lint.lint
   ~lint.is_syntactically_correct
   ~repair.repair
   ~repair.render_diff
"""

from .catalog import ActionCatalog, PortSchema
from .lint import (
    Diagnostic,
    DiagnosticCode,
    Severity,
    count_errors,
    diagnostics_to_json,
    format_diagnostics,
    is_syntactically_correct,
    lint,
)
from .repair import (
    NonConvergence,
    RepairEdit,
    RepairKind,
    RepairOutcome,
    format_edits,
    render_diff,
    repair,
)

"""
Evaluating language models on behavior-tree planning tasks.

.. autosummary::
   :nosignatures:

   ~experiment.EvalConfig
   ~experiment.load_eval_config
   ~experiment.preset_config
   ~evaluation.run_eval
   ~report.Report
   ~report.render_report
"""

from .evaluation import run_eval
from .experiment import (
    ConfigError,
    EvalConfig,
    ModelConfig,
    load_eval_config,
    models_from_session,
    preset_config,
)
from .report import CellResult, Report, format_percentage, render_report

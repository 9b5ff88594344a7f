"""
Tasks with scripted environments and the validation of trees against them

.. autosummary::
   :nosignatures:

   ~spec.TaskSpec
   ~spec.load_task_spec
   ~spec.load_bundled_task
   ~spec.bundled_repair_corpus
   ~environment.EnvironmentHost
   ~matching.match_trace
   ~validation.validate
   ~validation.Verdict
"""

from .environment import EnvironmentHost, EnvironmentSession
from .matching import MismatchKind, TraceMismatch, find_mismatches, match_trace
from .spec import (
    EnvironmentScript,
    EventMatcher,
    PrecedenceConstraint,
    RepairCase,
    Rule,
    SchemaError,
    TaskSpec,
    Toggle,
    TracePattern,
    UnknownActionInRule,
    bundled_mutants,
    bundled_repair_corpus,
    bundled_task_ids,
    golden_tree_path,
    load_bundled_task,
    load_task_file,
    load_task_spec,
)
from .validation import FailureClass, Verdict, validate

"""
Running evaluations of models on planning tasks

Every cell of an evaluation passes through the same pipeline: the prompt is built and
sent to the model, the tree is extracted from the answer, parsed, checked by the
linter, optionally repaired, and finally validated against the task. All intermediate
results are stored, so reports can be checked without querying models again.

.. autosummary::
   :nosignatures:

   run_eval
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..analysis.lint import count_errors, diagnostics_to_json, lint
from ..analysis.repair import NonConvergence, format_edits, render_diff, repair
from ..models import FinishReason, GenParams, ModelIOError, ProviderBase, complete
from ..prompts import NoTreeFound, build_generation_prompt, extract_tree
from ..tasks.spec import TaskSpec
from ..tasks.validation import validate
from ..tools.misc import write_text_atomic
from ..tools.output import display_progress
from ..trees.model import TreeModel
from ..trees.parser import ParseError, parse
from ..trees.serializer import serialize
from .experiment import EvalConfig
from .report import CellResult, Report

ARTIFACTS = Path("artifacts")


@dataclass
class _Answer:
    """the kept answer of a model for a cell and the tree parsed from it"""

    cell: CellResult
    model: Optional[TreeModel] = None


class Evaluation:
    """carries out an evaluation run"""

    def __init__(self, config: EvalConfig):
        self.config = config
        self.output = Path(config.output)
        self.tasks: Dict[int, TaskSpec] = config.load_tasks()
        self._logger = logging.getLogger(self.__class__.__name__)

    def _store(self, folder: Path, name: str, text: str) -> str:
        path = folder / name
        write_text_atomic(self.output / path, text)
        return path.as_posix()

    def _store_json(self, folder: Path, name: str, data: Any) -> str:
        text = json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
        return self._store(folder, name, text)

    def _attempt(
        self,
        provider: ProviderBase,
        params: GenParams,
        label: str,
        spec: TaskSpec,
        mode: str,
        attempt: int,
    ) -> _Answer:
        """obtain and check a single answer"""
        folder = ARTIFACTS / label / f"task{spec.id}" / mode / f"attempt{attempt}"
        cell = CellResult(label, spec.id, mode, attempt=attempt, attempts=attempt)
        example = spec.example_pair if mode == "OS" else None
        messages = build_generation_prompt(spec.prompt, example)
        cell.artifacts["prompt"] = self._store_json(
            folder, "prompt.json", messages.to_list()
        )

        try:
            completion = complete(provider, messages, params)
        except ModelIOError as err:
            cell.error = f"{err.__class__.__name__}: {err}"
            cell.failure_class = "model_error"
            self._logger.warning(f"{label}, task {spec.id}, {mode}: {cell.error}")
            return _Answer(cell)
        cell.latency = completion.latency
        cell.finish_reason = completion.finish_reason.value
        cell.artifacts["response"] = self._store(
            folder, "response.txt", completion.text
        )
        cell.artifacts["completion"] = self._store_json(
            folder, "completion.json", completion.to_dict()
        )

        try:
            tree_xml = extract_tree(completion.text)
        except NoTreeFound as err:
            cell.failure_class = "no_tree"
            cell.reasons = [str(err)]
            return _Answer(cell)
        cell.artifacts["tree"] = self._store(folder, "tree.xml", tree_xml)

        try:
            model = parse(tree_xml)
        except ParseError as err:
            cell.failure_class = "parse"
            cell.reasons = [str(err)]
            return _Answer(cell)

        diagnostics = lint(model, spec.action_catalog, lenient=False)
        cell.artifacts["diagnostics"] = self._store(
            folder, "diagnostics.json", diagnostics_to_json(diagnostics) + "\n"
        )
        truncated = completion.finish_reason == FinishReason.LENGTH
        cell.syntactic = count_errors(diagnostics) == 0 and not truncated
        if truncated:
            limit = params.max_new_tokens
            cell.reasons = [f"Generation hit the limit of {limit} tokens"]
        return _Answer(cell, model)

    def _validate(self, answer: _Answer, spec: TaskSpec) -> None:
        cell = answer.cell
        if answer.model is None:
            return
        verdict = validate(answer.model, spec)
        folder = Path(cell.artifacts["tree"]).parent
        cell.artifacts["verdict"] = self._store_json(
            folder, "verdict.json", verdict.to_dict()
        )
        cell.passed = verdict.passed and cell.syntactic
        if not cell.passed:
            if cell.failure_class is None and verdict.failure_class is not None:
                cell.failure_class = verdict.failure_class.value
            cell.reasons = cell.reasons + verdict.reasons

    def _repaired(self, answer: _Answer, spec: TaskSpec) -> CellResult:
        """validate the repaired tree of an answer without prompting again"""
        base = answer.cell
        cell = CellResult(
            base.model,
            base.task,
            f"{base.mode}+SA",
            latency=base.latency,
            finish_reason=base.finish_reason,
            attempt=base.attempt,
            attempts=base.attempts,
            error=base.error,
            failure_class=base.failure_class,
            reasons=list(base.reasons),
            artifacts={k: v for k, v in base.artifacts.items() if k != "verdict"},
        )
        if answer.model is None or base.finish_reason == FinishReason.LENGTH.value:
            return cell

        try:
            outcome = repair(answer.model, spec.action_catalog)
        except NonConvergence as err:
            cell.failure_class = "repair"
            cell.reasons = [str(err)]
            return cell
        folder = ARTIFACTS / base.model / f"task{base.task}" / cell.mode
        cell.artifacts["repaired"] = self._store(
            folder, "tree.xml", serialize(outcome.repaired)
        )
        cell.artifacts["edits"] = self._store(
            folder, "edits.txt", format_edits(outcome.edits) + "\n"
        )
        cell.artifacts["diff"] = self._store(
            folder, "diff.patch", render_diff(answer.model, outcome.repaired)
        )
        diagnostics = lint(outcome.repaired, spec.action_catalog, lenient=False)
        cell.syntactic = count_errors(diagnostics) == 0
        verdict = validate(outcome.repaired, spec)
        cell.artifacts["verdict"] = self._store_json(
            folder, "verdict.json", verdict.to_dict()
        )
        cell.passed = verdict.passed
        cell.reasons = verdict.reasons
        cell.failure_class = (
            None if verdict.failure_class is None else verdict.failure_class.value
        )
        return cell

    def run_cell(
        self,
        provider: ProviderBase,
        params: GenParams,
        label: str,
        task: int,
        mode: str,
    ) -> List[CellResult]:
        """evaluate one model on one task with one prompt mode

        Up to `attempts` answers are requested; the first syntactically correct one is
        kept, otherwise the last one.

        Returns:
            list: the cell of the prompt mode and, if enabled, the repaired cell
        """
        spec = self.tasks[task]
        for attempt in range(1, self.config.num_attempts + 1):
            answer = self._attempt(provider, params, label, spec, mode, attempt)
            if answer.cell.syntactic:
                break
        answer.cell.attempts = attempt
        self._validate(answer, spec)

        cells = [answer.cell]
        if f"{mode}+SA" in self.config.columns:
            repaired = self._repaired(answer, spec)
            repaired.attempts = attempt
            cells.append(repaired)
        return cells

    def run(self) -> Report:
        config = self.config
        report = Report(
            models=[model.label for model in config.models],
            tasks=list(config.tasks),
            columns=config.columns,
        )
        work = [
            (model, task, mode)
            for model in config.models
            for task in config.tasks
            for mode in config.modes
        ]
        providers = {m.label: config.create_provider(m) for m in config.models}
        params = {model.label: model.gen_params() for model in config.models}
        report.params = {label: p.to_dict() for label, p in params.items()}

        progress = display_progress(work, total=len(work), unit="cell")
        for model, task, mode in progress:
            label = model.label
            if hasattr(progress, "set_description"):
                progress.set_description(f"{label} task{task} {mode}")
            self._logger.info(f"Evaluating {label} on task {task} with {mode} prompt")
            cells = self.run_cell(providers[label], params[label], label, task, mode)
            report.cells.extend(cells)

        report.write(self.output)
        return report


def run_eval(config: EvalConfig) -> Report:
    """evaluate models on planning tasks

    Failures of individual cells are recorded in the report and never abort the run.

    Args:
        config (:class:`~btplan.harness.experiment.EvalConfig`):
            The configuration of the run

    Returns:
        :class:`~btplan.harness.report.Report`: the results, which are also written to
        the output folder together with all artifacts

    Raises:
        :class:`~btplan.harness.experiment.ConfigError`: if tasks or providers cannot
        be set up
    """
    return Evaluation(config).run()

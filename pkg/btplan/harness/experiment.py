"""
Configuration of evaluation runs

An evaluation compares models on a set of tasks using zero-shot (ZS) and one-shot (OS)
prompts. Optionally, the one-shot answers are repaired by static analysis and
validated again (OS+SA). Two presets reproduce the phases of a typical study: a
preliminary selection on the first seven tasks and a validation on all nine tasks
including repair.

.. autosummary::
   :nosignatures:

   ModelConfig
   EvalConfig
   load_eval_config
   preset_config
   models_from_session
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional, Union

import yaml
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from ..models import GenParams, ProviderBase, ReplayProvider, record_session
from ..tasks.spec import TaskSpec, load_bundled_task, load_task_file

PromptMode = Literal["ZS", "OS"]

PHASE_PRESETS: Dict[int, Dict[str, Any]] = {
    1: {"tasks": list(range(1, 8)), "modes": ["ZS", "OS"], "repair": False},
    2: {"tasks": list(range(1, 10)), "modes": ["ZS", "OS"], "repair": True},
}


class ConfigError(ValueError):
    """an evaluation configuration is invalid"""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True, protected_namespaces=())


class ModelConfig(_Section):
    """a model taking part in an evaluation"""

    label: str = Field(min_length=1)
    provider: str = "chat"
    model: str = "default"
    """ str: identifier of the model sent to the endpoint """
    endpoint: Optional[str] = None
    max_new_tokens: Optional[int] = Field(None, ge=1)
    temperature: Optional[float] = Field(None, ge=0)
    options: Dict[str, Any] = Field(default_factory=dict)
    """ dict: additional arguments of the provider """

    def gen_params(self) -> GenParams:
        kwargs: Dict[str, Any] = {}
        if self.max_new_tokens is not None:
            kwargs["max_new_tokens"] = self.max_new_tokens
        if self.temperature is not None:
            kwargs["temperature"] = self.temperature
        return GenParams.from_config(self.model, **kwargs)

    def create_provider(self) -> ProviderBase:
        options = dict(self.options)
        if self.endpoint is not None:
            options["endpoint"] = self.endpoint
        return ProviderBase.from_name(self.provider, **options)


class EvalConfig(_Section):
    """everything that determines an evaluation run"""

    models: List[ModelConfig] = Field(min_length=1)
    tasks: List[int] = Field(default_factory=lambda: list(range(1, 10)), min_length=1)
    modes: List[PromptMode] = Field(default_factory=lambda: ["ZS", "OS"], min_length=1)
    repair: bool = False
    """ bool: whether repaired one-shot answers are validated (OS+SA) """
    zs_repair: bool = False
    """ bool: whether repaired zero-shot answers are reported, too (ZS+SA) """
    attempts: Optional[int] = Field(None, ge=1)
    """ int: generations per cell, by default `harness.attempts` """
    task_dir: Optional[str] = None
    """ str: folder with files `taskN.yaml` replacing the bundled tasks """
    output: str = "results"
    replay: Optional[str] = None
    """ str: folder with one recorded session per model label """
    record: Optional[str] = None
    """ str: folder in which the sessions of all models are recorded """

    @field_validator("tasks")
    @classmethod
    def check_tasks(cls, value: List[int]) -> List[int]:
        if len(set(value)) != len(value):
            raise ValueError("tasks must not repeat")
        if any(not 1 <= task <= 9 for task in value):
            raise ValueError("tasks are numbered from 1 to 9")
        return value

    @field_validator("modes")
    @classmethod
    def check_modes(cls, value: List[str]) -> List[str]:
        # modes are always evaluated in the canonical order
        return [mode for mode in ("ZS", "OS") if mode in value]

    @model_validator(mode="after")
    def check_labels(self) -> EvalConfig:
        labels = [model.label for model in self.models]
        if len(set(labels)) != len(labels):
            raise ValueError("model labels must be unique")
        if self.replay is not None and self.record is not None:
            raise ValueError("sessions cannot be replayed and recorded at once")
        return self

    @property
    def columns(self) -> List[str]:
        """list of str: the columns of result tables"""
        columns = []
        for mode in self.modes:
            columns.append(mode)
            if self.repair and (mode == "OS" or self.zs_repair):
                columns.append(f"{mode}+SA")
        return columns

    @property
    def num_attempts(self) -> int:
        if self.attempts is None:
            from .. import config

            return config["harness.attempts"]
        return self.attempts

    def load_tasks(self) -> Dict[int, TaskSpec]:
        """load the specifications of all tasks

        Raises:
            :class:`ConfigError`: if a task cannot be loaded
        """
        tasks = {}
        for task_id in self.tasks:
            try:
                if self.task_dir is None:
                    tasks[task_id] = load_bundled_task(task_id)
                else:
                    path = Path(self.task_dir) / f"task{task_id}.yaml"
                    tasks[task_id] = load_task_file(path)
            except (OSError, KeyError, ValueError) as err:
                raise ConfigError(f"cannot load task {task_id}: {err}", "tasks")
        return tasks

    def create_provider(self, model: ModelConfig) -> ProviderBase:
        """create the provider answering prompts for a model

        Replayed and recorded sessions are stored in a sub-folder named by the label.
        """
        if self.replay is not None:
            try:
                return ReplayProvider(Path(self.replay) / model.label)
            except OSError as err:
                raise ConfigError(str(err), "replay")
        try:
            provider = model.create_provider()
        except (TypeError, ValueError) as err:
            raise ConfigError(str(err), "models")
        if self.record is not None:
            provider = record_session(provider, Path(self.record) / model.label)
        return provider


def _error_path(err: ValidationError) -> ConfigError:
    error = err.errors()[0]
    return ConfigError(error["msg"], ".".join(str(p) for p in error["loc"]))


def preset_config(phase: int, models: List[Any], **kwargs) -> EvalConfig:
    """create the configuration of one of the two evaluation phases

    Args:
        phase (int): 1 for the preliminary selection and 2 for the validation
        models (list): The models as :class:`ModelConfig` or dictionaries
        **kwargs: Further fields overriding the preset

    Returns:
        :class:`EvalConfig`
    """
    if phase not in PHASE_PRESETS:
        raise ConfigError(f"unknown phase {phase}", "phase")
    data = dict(PHASE_PRESETS[phase])
    data.update({k: v for k, v in kwargs.items() if v is not None})
    data["models"] = models
    return load_eval_config(data)


def load_eval_config(
    source: Union[str, Path, Mapping[str, Any]], **overrides
) -> EvalConfig:
    """load an evaluation configuration

    Args:
        source (str, :class:`~pathlib.Path`, or dict):
            A YAML file or the data itself. Files may contain a field `phase`
            selecting a preset whose values are overridden by the other fields.
        **overrides: Fields replacing the values of the source

    Returns:
        :class:`EvalConfig`

    Raises:
        :class:`ConfigError`: if the configuration is invalid
    """
    if isinstance(source, Mapping):
        data = dict(source)
    else:
        try:
            with open(source, encoding="utf-8") as fp:
                data = yaml.safe_load(fp)
        except yaml.YAMLError as err:
            raise ConfigError(f"invalid YAML: {err}")
        if not isinstance(data, dict):
            raise ConfigError("the configuration must be a mapping")
    data.update({k: v for k, v in overrides.items() if v is not None})

    phase = data.pop("phase", None)
    if phase is not None:
        if phase not in PHASE_PRESETS:
            raise ConfigError(f"unknown phase {phase}", "phase")
        data = {**PHASE_PRESETS[phase], **data}

    try:
        return EvalConfig.model_validate(data)
    except ValidationError as err:
        raise _error_path(err) from None


def models_from_session(folder: Union[str, Path]) -> List[Dict[str, Any]]:
    """describe the models whose sessions are stored in a folder

    Every sub-folder holds the recorded session of one model, named by its label. The
    generation parameters are read from the first recording.

    Returns:
        list: data for :class:`ModelConfig`
    """
    models = []
    for path in sorted(Path(folder).iterdir()):
        records = sorted(path.glob("*.json")) if path.is_dir() else []
        if not records:
            continue
        try:
            request = json.loads(records[0].read_text(encoding="utf-8"))["request"]
            params = request["params"]
        except (json.JSONDecodeError, KeyError, TypeError) as err:
            raise ConfigError(f"malformed recording `{records[0]}`: {err}", "replay")
        models.append(
            {
                "label": path.name,
                "model": params["model"],
                "max_new_tokens": params["max_new_tokens"],
                "temperature": params["temperature"],
            }
        )
    return models

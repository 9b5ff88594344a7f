"""
Command line interface of the package

Every sub-command is a thin layer over a function of the package. The exit code is 0
on success, 1 if the input fails a check (lint errors, failed validation, missing
tree), and 2 for usage and configuration errors.

.. autosummary::
   :nosignatures:

   main
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np
import yaml

from .analysis import (
    ActionCatalog,
    NonConvergence,
    count_errors,
    diagnostics_to_json,
    format_diagnostics,
    format_edits,
    lint,
    render_diff,
    repair,
)
from .harness import (
    ConfigError,
    load_eval_config,
    models_from_session,
    preset_config,
    render_report,
    run_eval,
)
from .models import (
    ChatCompletionsProvider,
    GenParams,
    ModelIOError,
    ProviderBase,
    ReplayProvider,
    complete,
    record_session,
)
from .prompts import (
    NoTreeFound,
    UnparseableTree,
    build_description_prompt,
    build_generation_prompt,
    check_dataset,
    describe_trees,
    extract_tree,
    synthesize_dataset,
    write_dataset,
)
from .tasks import SchemaError, TaskSpec, load_bundled_task, load_task_file, validate
from .trees import ParseError, parse_file, serialize
from .version import __version__

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

_TASK_NAME = re.compile(r"^(task)?\d+$")


class UsageError(ValueError):
    """the command line refers to something that does not exist"""


def _load_task(value: str) -> TaskSpec:
    """a bundled task given as `3` or `task3`, or a task file"""
    try:
        if _TASK_NAME.match(value):
            return load_bundled_task(value)
        return load_task_file(value)
    except KeyError as err:
        raise UsageError(str(err.args[0]))


def _load_catalog(value: str) -> ActionCatalog:
    """the catalog of a task or a YAML file describing a catalog"""
    if _TASK_NAME.match(value):
        return _load_task(value).action_catalog
    with open(value, encoding="utf-8") as fp:
        try:
            data = yaml.safe_load(fp)
        except yaml.YAMLError as err:
            raise UsageError(f"`{value}` is not valid YAML: {err}") from None
    if not isinstance(data, dict):
        raise UsageError(f"`{value}` does not describe an action catalog")
    if "catalog" in data:
        return _load_task(value).action_catalog
    try:
        return ActionCatalog.from_dict(data)
    except (TypeError, ValueError) as err:
        raise UsageError(f"Invalid action catalog `{value}`: {err}") from None


def _write_output(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        print(text)


def _provider(args) -> ProviderBase:
    if args.replay:
        return ReplayProvider(args.replay)
    provider: ProviderBase = ChatCompletionsProvider(args.endpoint)
    if args.record:
        provider = record_session(provider, args.record)
    return provider


def _gen_params(args) -> GenParams:
    kwargs = {}
    if args.max_new_tokens is not None:
        kwargs["max_new_tokens"] = args.max_new_tokens
    if args.temperature is not None:
        kwargs["temperature"] = args.temperature
    return GenParams.from_config(args.model, **kwargs)


def cmd_parse(args) -> int:
    model = parse_file(args.file)
    _write_output(serialize(model), args.output)
    return EXIT_OK


def cmd_lint(args) -> int:
    model = parse_file(args.file)
    diagnostics = lint(model, _load_catalog(args.catalog), lenient=args.lenient)
    if args.json:
        print(diagnostics_to_json(diagnostics))
    elif diagnostics:
        print(format_diagnostics(diagnostics))
    return EXIT_FAILED if count_errors(diagnostics) else EXIT_OK


def cmd_repair(args) -> int:
    model = parse_file(args.file)
    catalog = _load_catalog(args.catalog)
    try:
        outcome = repair(model, catalog, promote_child=not args.no_promote)
    except NonConvergence as err:
        print(err, file=sys.stderr)
        return EXIT_FAILED
    if outcome.edits:
        print(format_edits(outcome.edits), file=sys.stderr)
    for diagnostic in outcome.diagnostics:
        print(diagnostic, file=sys.stderr)
    if args.diff:
        _write_output(render_diff(model, outcome.repaired), args.output)
    else:
        _write_output(serialize(outcome.repaired), args.output)
    return EXIT_OK


def cmd_validate(args) -> int:
    model = parse_file(args.file)
    spec = _load_task(args.task)
    if args.repair:
        try:
            model = repair(model, spec.action_catalog).repaired
        except NonConvergence as err:
            print(err, file=sys.stderr)
            return EXIT_FAILED
    verdict = validate(model, spec)
    if args.json:
        print(json.dumps(verdict.to_dict(), indent=2))
    else:
        if verdict.passed:
            print(f"Task {spec.id}: passed")
        else:
            print(f"Task {spec.id}: failed ({verdict.failure_class.value})")
            for reason in verdict.reasons:
                print(f"  {reason}")
        if args.trace:
            print(verdict.trace.format())
    return EXIT_OK if verdict.passed else EXIT_FAILED


def cmd_prompt(args) -> int:
    if args.describe:
        tree_xml = Path(args.describe).read_text(encoding="utf-8")
        try:
            messages = build_description_prompt(tree_xml)
        except UnparseableTree as err:
            print(f"Cannot describe tree: {err}", file=sys.stderr)
            return EXIT_FAILED
    elif args.task:
        spec = _load_task(args.task)
        example = None if args.zero_shot else spec.example_pair
        messages = build_generation_prompt(spec.prompt, example)
    else:
        raise UsageError("Either --task or --describe is required")
    print(json.dumps(messages.to_list(), indent=2, ensure_ascii=False))
    return EXIT_OK


def cmd_gen(args) -> int:
    spec = _load_task(args.task)
    example = None if args.zero_shot else spec.example_pair
    messages = build_generation_prompt(spec.prompt, example)
    try:
        completion = complete(_provider(args), messages, _gen_params(args))
    except ModelIOError as err:
        print(f"{err.__class__.__name__}: {err}", file=sys.stderr)
        return EXIT_FAILED
    logging.getLogger(__name__).info(
        f"Generation took {completion.latency:.2f} seconds and finished with "
        f"`{completion.finish_reason.value}`"
    )
    try:
        tree_xml = extract_tree(completion.text)
    except NoTreeFound as err:
        print(err, file=sys.stderr)
        print(completion.text, file=sys.stderr)
        return EXIT_FAILED
    _write_output(tree_xml, args.output)
    return EXIT_OK


def cmd_dataset(args) -> int:
    if args.action == "synthesize":
        if not args.output:
            raise UsageError("synthesize requires --output")
        rng = np.random.default_rng(args.seed)
        count = write_dataset(synthesize_dataset(args.count, rng), args.output)
        print(f"Wrote {count} entries")
        return EXIT_OK

    elif args.action == "check":
        if len(args.files) != 1:
            raise UsageError("check requires exactly one dataset file")
        result = check_dataset(args.files[0])
        print(result)
        return EXIT_OK if result.ok else EXIT_FAILED

    elif args.action == "describe":
        if not args.output:
            raise UsageError("describe requires --output")
        trees = [Path(path).read_text(encoding="utf-8") for path in args.files]
        entries = describe_trees(trees, _provider(args), _gen_params(args))
        count = write_dataset(entries, args.output)
        print(f"Wrote {count} entries")
        return EXIT_OK if count == len(trees) else EXIT_FAILED

    raise UsageError(f"Unknown dataset action `{args.action}`")


def _parse_models(values: List[str], endpoint: Optional[str]) -> List[Dict[str, str]]:
    """models given as `LABEL=MODEL` or just `MODEL`"""
    models = []
    for value in values:
        label, _, model = value.partition("=")
        entry = {"label": label, "model": model or label}
        if endpoint:
            entry["endpoint"] = endpoint
        models.append(entry)
    return models


def cmd_eval(args) -> int:
    overrides = {
        "output": args.output,
        "replay": args.replay,
        "record": args.record,
        "attempts": args.attempts,
        "zs_repair": True if args.zs_repair else None,
    }
    models = _parse_models(args.models or [], args.endpoint)
    if args.config:
        if models:
            overrides["models"] = models
        config = load_eval_config(args.config, **overrides)
    else:
        if not models and args.replay:
            models = models_from_session(args.replay)
        config = preset_config(args.phase, models, **overrides)

    report = run_eval(config)
    print(render_report(report, "markdown"))
    return EXIT_OK


def _add_provider_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("Model")
    group.add_argument("--endpoint", help="Base URL of the chat-completions endpoint")
    group.add_argument("--model", default="default", help="Identifier of the model")
    group.add_argument("--max-new-tokens", type=int, help="Limit of generated tokens")
    group.add_argument("--temperature", type=float, help="Sampling temperature")
    group.add_argument("--replay", metavar="DIR", help="Replay a recorded session")
    group.add_argument("--record", metavar="DIR", help="Record the session")


def create_parser() -> argparse.ArgumentParser:
    """the argument parser of all sub-commands"""
    parser = argparse.ArgumentParser(
        prog="btplan",
        description="Check, repair, and validate behavior trees written by language "
        "models, and evaluate models on planning tasks.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Show more log messages; repeat for debug output",
    )
    parser.add_argument(
        "-q", "--quiet", action="store_true", help="Only show error messages"
    )
    commands = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    sub = commands.add_parser("parse", help="Print the canonical form of a tree")
    sub.add_argument("file")
    sub.add_argument("-o", "--output", help="File to write instead of printing")
    sub.set_defaults(func=cmd_parse)

    sub = commands.add_parser("lint", help="Check a tree against an action catalog")
    sub.add_argument("file")
    sub.add_argument(
        "--catalog", required=True, help="Task number or YAML file of a catalog"
    )
    sub.add_argument(
        "--lenient",
        action="store_true",
        default=None,
        help="Report unknown leaves as warnings",
    )
    sub.add_argument("--json", action="store_true", help="Print a JSON report")
    sub.set_defaults(func=cmd_lint)

    sub = commands.add_parser("repair", help="Remove what the linter rejects")
    sub.add_argument("file")
    sub.add_argument(
        "--catalog", required=True, help="Task number or YAML file of a catalog"
    )
    sub.add_argument(
        "--no-promote", action="store_true", help="Keep unknown single-child wrappers"
    )
    sub.add_argument("--diff", action="store_true", help="Print a unified diff")
    sub.add_argument("-o", "--output", help="File to write instead of printing")
    sub.set_defaults(func=cmd_repair)

    sub = commands.add_parser("validate", help="Execute a tree and check its trace")
    sub.add_argument("file")
    sub.add_argument("--task", required=True, help="Task number or task file")
    sub.add_argument("--repair", action="store_true", help="Repair before validating")
    sub.add_argument("--trace", action="store_true", help="Print the action trace")
    sub.add_argument("--json", action="store_true", help="Print the verdict as JSON")
    sub.set_defaults(func=cmd_validate)

    sub = commands.add_parser("prompt", help="Print a prompt as JSON messages")
    sub.add_argument("--task", help="Task number or task file")
    sub.add_argument("--zero-shot", action="store_true", help="Omit the example")
    sub.add_argument("--describe", metavar="FILE", help="Ask for a tree description")
    sub.set_defaults(func=cmd_prompt)

    sub = commands.add_parser("gen", help="Ask a model to write a tree for a task")
    sub.add_argument("--task", required=True, help="Task number or task file")
    sub.add_argument("--zero-shot", action="store_true", help="Omit the example")
    sub.add_argument("-o", "--output", help="File to write instead of printing")
    _add_provider_arguments(sub)
    sub.set_defaults(func=cmd_gen)

    sub = commands.add_parser("dataset", help="Build and check instruction datasets")
    sub.add_argument("action", choices=["synthesize", "check", "describe"])
    sub.add_argument("files", nargs="*", help="Dataset file or trees to describe")
    sub.add_argument("-n", "--count", type=int, default=600, help="Number of entries")
    sub.add_argument("--seed", type=int, help="Seed of synthetic datasets")
    sub.add_argument("-o", "--output", help="Dataset file to write")
    _add_provider_arguments(sub)
    sub.set_defaults(func=cmd_dataset)

    sub = commands.add_parser("eval", help="Evaluate models on the planning tasks")
    sub.add_argument("--config", help="YAML file describing the evaluation")
    sub.add_argument("--phase", type=int, choices=[1, 2], default=2)
    sub.add_argument(
        "--models",
        nargs="+",
        metavar="LABEL=MODEL",
        help="Models served by the endpoint",
    )
    sub.add_argument("--endpoint", help="Base URL of the chat-completions endpoint")
    sub.add_argument("--replay", metavar="DIR", help="Replay recorded sessions")
    sub.add_argument("--record", metavar="DIR", help="Record the sessions")
    sub.add_argument("--attempts", type=int, help="Generations per cell")
    sub.add_argument("--zs-repair", action="store_true", help="Also report ZS+SA")
    sub.add_argument("-o", "--output", help="Folder for the report and artifacts")
    sub.set_defaults(func=cmd_eval)

    return parser


def _setup_logging(verbose: int, quiet: bool) -> None:
    if quiet:
        level = logging.ERROR
    elif verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Optional[List[str]] = None) -> int:
    """run the command line interface

    Args:
        argv (list, optional): The arguments, by default taken from `sys.argv`

    Returns:
        int: The exit code
    """
    parser = create_parser()
    args = parser.parse_args(argv)
    _setup_logging(args.verbose, args.quiet)

    func: Callable[[argparse.Namespace], int] = args.func
    try:
        return func(args)
    except ParseError as err:
        print(f"Cannot parse tree: {err}", file=sys.stderr)
        return EXIT_FAILED
    except (UsageError, ConfigError, SchemaError, OSError) as err:
        print(f"Error: {err}", file=sys.stderr)
        return EXIT_USAGE

import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from modules.config import DEFAULT_DELTAS
from modules.handlers.core.commands import EXIT_FAILED, EXIT_OK, command_handler
from modules.pipeline.batch import BatchStats, batch_explain
from modules.pipeline.dataset import binarize_frame, ingest_csv, read_frame
from modules.pipeline.learner import accuracy, tree_predicates
from modules.reasoning.abductive import parse_delta
from modules.reasoning.contrastive import write_importance_csv
from modules.reasoning.errors import InputError, UsageError
from modules.reasoning.explainer import ALL_KINDS, ReasonReport, parse_kinds
from modules.reasoning.literals import Instance, as_instance
from modules.reasoning.tree import DecisionTree, load_tree
from modules.utils.formatters import format_delta, format_terms
from modules.utils.presets import KIND_PRESETS, get_delta_preset

logger = logging.getLogger(__name__)


def resolve_kinds(value: str) -> Tuple[str, ...]:
    """A kind list or a preset name; plain kind names win over presets"""
    if value not in ALL_KINDS and value in KIND_PRESETS:
        return parse_kinds(KIND_PRESETS[value])
    return parse_kinds(value)


def resolve_deltas(args) -> list:
    if args.delta and args.delta_preset:
        raise UsageError("give either --delta or --delta-preset, not both")
    if args.delta:
        return [parse_delta(d) for d in args.delta]
    if args.delta_preset:
        return get_delta_preset(args.delta_preset)
    return list(DEFAULT_DELTAS)


def read_instances(path: str, n: int) -> List[Instance]:
    """One bit vector per line; blank lines and lines starting with # are skipped"""
    instances = []
    with open(path, encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                instances.append(as_instance(text, n))
            except InputError as e:
                raise InputError(f"{path}, line {number}: {e}") from None
    if not instances:
        raise InputError(f"{path} contains no instances")
    return instances


def write_reports(reports: Sequence[ReasonReport], out: Optional[str]):
    lines = "".join(report.to_json() + "\n" for report in reports)
    if out:
        Path(out).write_text(lines, encoding="utf-8")
        logger.info(f"Wrote {len(reports)} reports to {out}")
    else:
        sys.stdout.write(lines)
        sys.stdout.flush()


def log_reports(reports: Sequence[ReasonReport]):
    for report in reports:
        if report.error:
            logger.warning(f"Instance {report.index}: {report.error}")
            continue
        for reason in report.reasons:
            logger.info(
                f"Instance {report.index} {reason.kind} (δ={format_delta(reason.delta)}): {format_terms([reason.term])}"
            )
        if report.contrastive is not None:
            logger.info(f"Instance {report.index} contrastive: {format_terms(report.contrastive)}")


def write_stats(stats: BatchStats, path: str):
    Path(path).write_text(json.dumps(stats.to_dict(), indent=1, sort_keys=True) + "\n", encoding="utf-8")
    logger.info(f"Wrote batch statistics to {path}")


def write_importance(reports: Sequence[ReasonReport], directory: str, prefix: str = "instance"):
    target = Path(directory)
    target.mkdir(parents=True, exist_ok=True)
    for report in reports:
        if report.importance is not None:
            write_importance_csv(target / f"{prefix}_{report.index:04d}.csv", report.importance)


def _dataset_instances(args, tree: DecisionTree) -> Tuple[List[Instance], Optional[float]]:
    predicates = tree_predicates(tree)
    if args.label:
        data = ingest_csv(args.data, args.label, args.target_class)
        matrix = data.binarize(predicates)
        return [tuple(int(b) for b in row) for row in matrix], accuracy(tree, data)
    frame, _ = read_frame(args.data)
    matrix = binarize_frame(frame, predicates)
    return [tuple(int(b) for b in row) for row in matrix], None


@command_handler
def handle_explain(args) -> int:
    kinds = resolve_kinds(args.kinds)
    deltas = resolve_deltas(args)
    tree = load_tree(args.tree)

    score = None
    if args.instance is not None:
        instances = [as_instance(args.instance, tree.n)]
    elif args.instances is not None:
        instances = read_instances(args.instances, tree.n)
    else:
        instances, score = _dataset_instances(args, tree)
    # explicit instances are all explained; dataset rows are sampled
    limit = args.sample if args.data else len(instances)

    reports, stats = batch_explain(
        tree,
        instances,
        kinds=kinds,
        deltas=deltas,
        cap=args.cap,
        order=args.order,
        sample_limit=limit,
        seed=args.seed,
        jobs=args.jobs,
        accuracy=score,
    )
    write_reports(reports, args.out)
    log_reports(reports)
    if args.stats:
        write_stats(stats, args.stats)
    if args.importance_dir:
        write_importance(reports, args.importance_dir)

    if stats.errors:
        logger.error(f"{stats.errors} of {stats.instances} instances could not be explained")
        return EXIT_FAILED
    return EXIT_OK

import json
import logging
from pathlib import Path

import numpy as np

from modules.handlers.core.commands import EXIT_FAILED, EXIT_OK, command_handler
from modules.handlers.explain.handlers import (
    resolve_deltas,
    resolve_kinds,
    write_importance,
    write_reports,
    write_stats,
)
from modules.pipeline.batch import batch_explain
from modules.pipeline.dataset import ingest_csv
from modules.pipeline.learner import tree_predicates
from modules.pipeline.validation import cross_validate
from modules.reasoning.tree import save_tree
from modules.utils.formatters import format_fold_table

logger = logging.getLogger(__name__)


def fold_name(fold: int) -> str:
    return f"fold_{fold + 1:02d}"


@command_handler
def handle_learn(args) -> int:
    if args.explain:
        kinds = resolve_kinds(args.kinds)
        deltas = resolve_deltas(args)

    data = ingest_csv(args.data, args.label, args.target_class)
    results = cross_validate(data, args.folds, args.seed)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for result in results:
        save_tree(out_dir / f"{fold_name(result.fold)}.json", result.tree)

    summaries = [result.summary() for result in results]
    summary = {
        "dataset": data.source,
        "label": args.label,
        "target_class": args.target_class,
        "rows": len(data),
        "folds": args.folds,
        "seed": args.seed,
        "mean_accuracy": round(float(np.mean([r.accuracy for r in results])), 6),
        "fold_results": summaries,
    }
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    logger.info(f"Wrote {len(results)} trees and summary.json to {out_dir}")
    print(format_fold_table(summaries))
    print(f"mean accuracy {summary['mean_accuracy']:.3f}")

    if not args.explain:
        return EXIT_OK

    errors = 0
    for result in results:
        name = fold_name(result.fold)
        test = data.subset(result.test_rows)
        matrix = test.binarize(tree_predicates(result.tree))
        instances = [tuple(int(b) for b in row) for row in matrix]
        reports, stats = batch_explain(
            result.tree,
            instances,
            kinds=kinds,
            deltas=deltas,
            cap=args.cap,
            order=args.order,
            sample_limit=args.sample,
            seed=args.seed + result.fold,
            jobs=args.jobs,
            accuracy=result.accuracy,
        )
        write_reports(reports, str(out_dir / f"{name}.reports.jsonl"))
        write_stats(stats, str(out_dir / f"{name}.stats.json"))
        if "importance" in kinds:
            write_importance(reports, str(out_dir / f"{name}.importance"))
        errors += stats.errors

    if errors:
        logger.error(f"{errors} instances could not be explained")
        return EXIT_FAILED
    return EXIT_OK

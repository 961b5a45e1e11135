"""Batch worker: runs the heuristic over instances, permutations and configs"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Union

from fixprop.config import HeuristicConfig
from fixprop.errors import InstanceError
from fixprop.heuristic import FixPropHeuristic
from fixprop.models.report import RunReport
from fixprop.services.mps import instance_name, read_mps

from .aggregate import aggregate_file
from .config import AGGREGATE_FILENAME, DEFAULT_THREADS, INSTANCE_SUFFIXES, REPORT_FILENAME, SOLU_SUFFIX
from .models import BatchMatrix
from .permute import permute_instance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunTask:
    path: Path
    name: str
    permutation: int
    config: HeuristicConfig
    reference: Optional[float] = None


def discover_instances(directory: Union[str, Path]) -> List[Path]:
    """MPS files (plain or gzipped) directly inside ``directory``, sorted by name"""
    directory = Path(directory)
    if not directory.is_dir():
        raise NotADirectoryError(f"{directory} is not a directory")
    return sorted(
        p for p in directory.iterdir()
        if p.is_file() and p.name.lower().endswith(INSTANCE_SUFFIXES)
    )


def load_references(directory: Union[str, Path]) -> Dict[str, float]:
    """
    Known optima from MIPLIB-style .solu files

    Lines look like ``=opt= name value`` or ``=best= name value``; ``=inf=``
    and ``=unkn=`` entries carry no value and are skipped.
    """
    references: Dict[str, float] = {}
    for path in sorted(Path(directory).glob(f"*{SOLU_SUFFIX}")):
        with open(path, "r", encoding="utf-8") as fh:
            for line_number, line in enumerate(fh, 1):
                tokens = line.split()
                if len(tokens) < 3 or tokens[0] not in ("=opt=", "=best="):
                    continue
                try:
                    references[tokens[1]] = float(tokens[2])
                except ValueError:
                    logger.warning("%s:%d: unreadable objective %r", path.name, line_number, tokens[2])
    return references


class BatchWorker:
    """
    Runs every (instance, permutation, config) triple on a thread pool

    Reports are written by the calling thread only, one JSON line per run as
    soon as the run finishes.
    """

    def __init__(self, threads: int = DEFAULT_THREADS, include_timings: bool = True):
        self.threads = max(1, threads)
        self.include_timings = include_timings

    def build_tasks(self, directory: Union[str, Path], matrix: BatchMatrix) -> List[RunTask]:
        references = load_references(directory)
        references.update(matrix.references)
        configs = matrix.configs()
        tasks = []
        for path in discover_instances(directory):
            name = instance_name(path)
            for permutation in matrix.permutations:
                for config in configs:
                    tasks.append(RunTask(path, name, permutation, config, references.get(name)))
        return tasks

    def run(self, directory: Union[str, Path], matrix: BatchMatrix, output_dir: Union[str, Path]) -> Dict:
        """
        Run the batch and aggregate it

        Returns:
            Dictionary with run statistics and the output paths
        """
        tasks = self.build_tasks(directory, matrix)

        output_dir = Path(output_dir)
        output_dir.mkdir(parents=True, exist_ok=True)
        report_path = output_dir / REPORT_FILENAME
        aggregate_path = output_dir / AGGREGATE_FILENAME
        logger.info("Running %d tasks on %d threads", len(tasks), self.threads)
        stats = {"total": len(tasks), "found": 0, "failed": 0, "errors": 0}

        with open(report_path, "w", encoding="utf-8") as out, ThreadPoolExecutor(max_workers=self.threads) as executor:
            future_to_task = {executor.submit(self._run_task, task): task for task in tasks}
            for future in as_completed(future_to_task):
                task = future_to_task[future]
                try:
                    report = future.result()
                except Exception as e:
                    logger.error("[%s] run failed: %s", task.name, e)
                    report = self._failed_report(task, "error", str(e))
                    stats["errors"] += 1

                if report.found:
                    stats["found"] += 1
                else:
                    stats["failed"] += 1
                out.write(report.to_json(include_timings=self.include_timings) + "\n")
                out.flush()

        aggregate_file(report_path, aggregate_path)
        stats["report_path"] = str(report_path)
        stats["aggregate_path"] = str(aggregate_path)
        logger.info("Completed: %d found, %d not found", stats["found"], stats["failed"])
        return stats

    def _failed_report(self, task: RunTask, status: str, message: str) -> RunReport:
        cfg = task.config
        return RunReport(
            instance=task.name,
            permutation=task.permutation,
            strategy=cfg.strategy.value,
            tiebreaker=cfg.tiebreaker.value,
            initial_tolerance=cfg.initial_tolerance,
            final_tolerance=cfg.final_tolerance,
            seed=cfg.seed,
            initial_lp_method=cfg.initial_lp_method.value,
            status=status,
            reference=task.reference,
            message=message,
        )

    def _run_task(self, task: RunTask) -> RunReport:
        logger.info("[%s] permutation %d, %s", task.name, task.permutation, task.config.strategy.value)
        t0 = time.perf_counter()
        try:
            instance = read_mps(task.path, name=task.name)
        except (InstanceError, OSError, EOFError) as e:
            logger.warning("[%s] unreadable instance: %s", task.name, e)
            return self._failed_report(task, "read_error", str(e))
        reading_time = time.perf_counter() - t0

        instance = permute_instance(instance, task.permutation)
        heuristic = FixPropHeuristic(task.config)
        return heuristic.run(
            instance, reference=task.reference, reading_time=reading_time, permutation=task.permutation
        )


def run_batch(
    directory: Union[str, Path],
    matrix: BatchMatrix,
    threads: int = DEFAULT_THREADS,
    output_dir: Union[str, Path] = "results",
    include_timings: bool = True,
) -> Dict:
    """Run a config matrix over every instance in ``directory``"""
    return BatchWorker(threads=threads, include_timings=include_timings).run(directory, matrix, output_dir)

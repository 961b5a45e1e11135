"""Benchmark harness for the fix-and-propagate heuristic"""
from .aggregate import aggregate_file, aggregate_reports, best_per_instance, load_reports, shifted_geomean
from .batch_worker import BatchWorker, discover_instances, load_references, run_batch
from .models import AggregateRow, BatchMatrix
from .permute import permute_instance

__all__ = [
    'aggregate_file',
    'aggregate_reports',
    'best_per_instance',
    'load_reports',
    'shifted_geomean',
    'BatchWorker',
    'discover_instances',
    'load_references',
    'run_batch',
    'AggregateRow',
    'BatchMatrix',
    'permute_instance',
]

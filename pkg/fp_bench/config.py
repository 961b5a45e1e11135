"""Configuration for the benchmark harness"""
import os

# Parallelism (runs, never inside a run)
DEFAULT_THREADS = int(os.getenv("FP_BENCH_THREADS", str(min(4, os.cpu_count() or 1))))

# Output files
REPORT_FILENAME = os.getenv("FP_BENCH_REPORT_FILENAME", "runs.jsonl")
AGGREGATE_FILENAME = os.getenv("FP_BENCH_AGGREGATE_FILENAME", "aggregate.csv")

# Aggregation
GAP_SHIFT = float(os.getenv("FP_BENCH_GAP_SHIFT", "1.0"))  # percentage points
TIME_SHIFT = float(os.getenv("FP_BENCH_TIME_SHIFT", "1.0"))  # seconds
GAP_CAP_PERCENT = float(os.getenv("FP_BENCH_GAP_CAP_PERCENT", "1e6"))
BEST_LABEL = "Best"

# Instance discovery
INSTANCE_SUFFIXES = (".mps", ".mps.gz")
SOLU_SUFFIX = ".solu"

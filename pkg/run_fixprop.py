"""
Run the fix-and-propagate heuristic on one MPS file
Settings come from FIXPROP_* environment variables (or .env)
"""

import sys
sys.path.insert(0, '.')

from fixprop import FixPropHeuristic


def main():
    if len(sys.argv) < 2:
        print("usage: python run_fixprop.py INSTANCE.mps[.gz] [REFERENCE]")
        return 2

    path = sys.argv[1]
    reference = float(sys.argv[2]) if len(sys.argv) > 2 else None

    heuristic = FixPropHeuristic.from_env()
    cfg = heuristic.config
    print("=" * 80)
    print(f"RUNNING: {path}")
    print(f"  Strategy: {cfg.strategy.value} / {cfg.tiebreaker.value}")
    print(f"  LP tolerances: {cfg.initial_tolerance:g} / {cfg.final_tolerance:g}")
    print("=" * 80)

    report = heuristic.run_file(path, reference=reference)

    print(f"Status: {report.status}")
    if report.found:
        print(f"  Objective: {report.objective:.10g}")
        print(f"  Gap: {report.gap:.4f}%")
    print(f"  Nodes: {report.nodes}  Backtracks: {report.backtracks}")
    t = report.timings
    print(f"  Time: total {t.total:.3f}s (read {t.reading:.3f}, initial LP {t.initial_lp:.3f}, "
          f"dive {t.fix_and_propagate:.3f}, final LP {t.final_lp:.3f})")
    return 0 if report.found else 1


if __name__ == "__main__":
    sys.exit(main())

"""Race the five placement heuristics on a generated scenario.

Builds a mid-size scenario, runs every heuristic on growing prefixes of
the request stream, prints a summary table, and leaves one CSV per metric
in ./out/compare.
"""

from cranplace.experiments import compare_heuristics
from cranplace.heuristics import ALL_KINDS, HeuristicConfig
from cranplace.workload import make_scenario


def main():
    scenario = make_scenario(20, 4, 2000, seed=42)
    configs = [HeuristicConfig(kind, seed=42) for kind in ALL_KINDS]
    axis = [500, 1000, 2000]
    report = compare_heuristics(scenario, axis, configs,
                                out_dir="out/compare")

    print(f"{'heuristic':>16} {'satisfied':>9} {'dropped':>7} "
          f"{'migrations':>10} {'resources':>10} {'cost':>9}")
    for kind in ALL_KINDS:
        r = report.results[kind][-1]
        print(f"{kind:>16} {r.satisfied:>9} {r.dropped:>7} "
              f"{r.migrations:>10} {r.total_resources_used:>10.0f} "
              f"{r.total_cost:>9.1f}")
    print(f"\nwrote {len(report.files)} CSV files to out/compare")


if __name__ == "__main__":
    main()

"""Find the delay-optimal number of clouds for a fixed fleet.

Sweeps the cloud count for one base-station fleet at two target loads and
prints how the link and migration delay aggregates trade off.
"""

from cranplace.experiments import optimal_cloud_count, run_sweep
from cranplace.heuristics import HeuristicConfig
from cranplace.workload import make_scenario


def main():
    base = make_scenario(24, 4, 1500, seed=0, resource_cap_total=1e9,
                         cost_threshold=1e9)
    config = HeuristicConfig("bnb_sorted_asc", seed=0)
    for load in (0.6, 0.8):
        points = run_sweep(base, range(2, 7), load, config)
        print(f"\nload {load:.0%}")
        print(f"{'clouds':>6} {'hops':>5} {'link_delay':>12} "
              f"{'migration':>12} {'total':>12}")
        for p in points:
            print(f"{p.n_clouds:>6} {p.avg_hops:>5} {p.link_delay:>12.5f} "
                  f"{p.migration_delay:>12.5f} {p.total_delay:>12.5f}")
        print(f"optimal cloud count: {optimal_cloud_count(points)}")


if __name__ == "__main__":
    main()

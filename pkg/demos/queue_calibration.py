"""Check the event simulator against the closed-form queue delays.

Runs the M/M/1 and M/D/1 simulators at a few utilizations and prints the
simulated mean sojourn time next to the analytic value.
"""

from cranplace.des import MD1, MM1, simulate_queue
from cranplace.queueing import QueueLoad, md1_delay, mm1_delay


def main():
    print(f"{'disc':>5} {'rho':>4} {'simulated':>12} {'analytic':>12} "
          f"{'ci95':>10}")
    for discipline, analytic in ((MM1, mm1_delay), (MD1, md1_delay)):
        for rho in (0.3, 0.5, 0.8):
            load = QueueLoad(rho, 1.0)
            r = simulate_queue(discipline, load, 200_000, seed=0)
            print(f"{discipline:>5} {rho:>4.1f} {r.mean_sojourn:>12.5f} "
                  f"{analytic(load):>12.5f} {r.ci95_halfwidth:>10.5f}")


if __name__ == "__main__":
    main()

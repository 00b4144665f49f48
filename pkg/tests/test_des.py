import numpy as np
import pytest

from cranplace.des import MD1, MM1, simulate_queue, simulate_tandem
from cranplace.errors import StabilityViolation
from cranplace.queueing import QueueLoad, md1_delay, mm1_delay

N = 200_000


class TestSingleQueue:
    @pytest.mark.parametrize("rho", [0.3, 0.5, 0.8])
    def test_md1_matches_closed_form(self, rho):
        load = QueueLoad(rho, 1.0)
        r = simulate_queue(MD1, load, N, seed=1)
        assert r.mean_sojourn == pytest.approx(md1_delay(load), rel=0.05)
        assert r.drops == 0

    @pytest.mark.parametrize("rho", [0.3, 0.5, 0.8])
    def test_mm1_matches_closed_form(self, rho):
        load = QueueLoad(rho, 1.0)
        r = simulate_queue(MM1, load, N, seed=1)
        assert r.mean_sojourn == pytest.approx(mm1_delay(load), rel=0.05)

    def test_littles_law(self):
        load = QueueLoad(0.5, 1.0)
        r = simulate_queue(MM1, load, N, seed=3)
        # L = lambda * W over the whole run (no warmup trim on L)
        assert r.time_avg_in_system == pytest.approx(
            load.arrival_rate * mm1_delay(load), rel=0.08)

    def test_seed_determinism(self):
        load = QueueLoad(0.5, 1.0)
        a = simulate_queue(MD1, load, 50_000, seed=9)
        b = simulate_queue(MD1, load, 50_000, seed=9)
        c = simulate_queue(MD1, load, 50_000, seed=10)
        assert a == b
        assert a.mean_sojourn != c.mean_sojourn

    def test_confidence_interval_brackets_truth(self):
        load = QueueLoad(0.5, 1.0)
        r = simulate_queue(MD1, load, N, seed=2)
        assert abs(r.mean_sojourn - md1_delay(load)) < 3 * r.ci95_halfwidth

    def test_tiny_buffer_drops(self):
        load = QueueLoad(0.8, 1.0)
        r = simulate_queue(MM1, load, 20_000, buffer_bytes=2 * 500.0, seed=0)
        assert r.drops > 0
        assert r.packets_served + r.drops == 20_000
        # with only two buffer slots the survivors wait less
        assert r.mean_sojourn < mm1_delay(load)

    def test_validation(self):
        with pytest.raises(StabilityViolation):
            simulate_queue(MM1, QueueLoad(1.0, 1.0), 1000)
        with pytest.raises(ValueError):
            simulate_queue(MM1, QueueLoad(0.5, 1.0), 5)
        with pytest.raises(ValueError):
            simulate_queue("GG1", QueueLoad(0.5, 1.0), 1000)


class TestTandem:
    def test_single_stage_equals_queue(self):
        load = QueueLoad(0.5, 1.0)
        t = simulate_tandem([load], MD1, 50_000, seed=4)
        q = simulate_queue(MD1, load, 50_000, seed=4)
        assert t.mean_sojourn == pytest.approx(q.mean_sojourn)

    def test_two_stages_cost_more_than_one(self):
        load = QueueLoad(0.5, 1.0)
        one = simulate_tandem([load], MD1, 50_000, seed=5)
        two = simulate_tandem([load, QueueLoad(0.5, 2.0)], MD1, 50_000,
                              seed=5)
        assert two.mean_sojourn > one.mean_sojourn

    def test_validation(self):
        with pytest.raises(ValueError):
            simulate_tandem([], MD1, 1000)
        with pytest.raises(StabilityViolation):
            simulate_tandem([QueueLoad(2.0, 1.0)], MD1, 1000)


class TestNumericalHygiene:
    def test_sojourns_positive(self):
        r = simulate_queue(MD1, QueueLoad(0.9, 1.0), 50_000, seed=6)
        assert r.mean_sojourn >= 1.0  # at least one service time
        assert np.isfinite(r.ci95_halfwidth)

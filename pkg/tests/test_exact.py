import dataclasses

import pytest

from cranplace.errors import BudgetExceeded, InfeasibleError
from cranplace.exact import (CONSTRAINTS, ExactBudget, evaluate_constraints,
                             objective, request_delay, solve_exact)
from cranplace.heuristics import HeuristicConfig, place
from cranplace.model import CapacityVector, ServiceRequest, with_requests
from cranplace.paths import build_sorted_lists
from cranplace.state import PlacementState

from conftest import micro_scenario


def _admitted_state(scenario):
    state = PlacementState(scenario)
    lists = build_sorted_lists(scenario.topology, scenario.k_paths)
    for req in scenario.requests:
        entry = lists.list_for_bs(req.origin)[0]
        inst = state.launch_instance(entry.cloud, scenario.vm_catalog[0])
        state.admit(req, inst.id, entry.id, entry.link_keys)
    return state


class TestConstraintCheckers:
    def test_clean_state_passes_all_seven(self, tiny_scenario):
        report = evaluate_constraints(_admitted_state(tiny_scenario),
                                      tiny_scenario)
        assert list(report.results) == list(CONSTRAINTS)
        assert report.feasible and not report.failures()

    def test_cloud_capacity(self, tiny_scenario):
        state = PlacementState(tiny_scenario)
        cloud = tiny_scenario.topology.clouds()[0].id
        vm = tiny_scenario.vm_catalog[1]
        # grant the state more room than the cloud actually has
        state.residual_cloud[cloud] = vm.capacity.scale(100.0)
        for _ in range(8):
            state.launch_instance(cloud, vm)
        report = evaluate_constraints(state, tiny_scenario)
        assert "cloud_capacity" in report.failures()

    def test_vm_capacity_overcommit(self, tiny_scenario):
        state = _admitted_state(tiny_scenario)
        inst = next(iter(state.instances.values()))
        rid = next(iter(inst.assigned))
        inst.assigned[rid] = inst.vm_type.capacity.scale(2.0)
        report = evaluate_constraints(state, tiny_scenario)
        assert "vm_capacity" in report.failures()

    def test_vm_capacity_underserved_demand(self, tiny_scenario):
        state = _admitted_state(tiny_scenario)
        inst = next(iter(state.instances.values()))
        rid = next(iter(inst.assigned))
        inst.assigned[rid] = CapacityVector(0.0, 0.0, 0.0)
        report = evaluate_constraints(state, tiny_scenario)
        assert "vm_capacity" in report.failures()

    def test_link_load_consistency(self, tiny_scenario):
        state = _admitted_state(tiny_scenario)
        key = next(iter(state.link_load))
        state.link_load[key] *= 2.0
        report = evaluate_constraints(state, tiny_scenario)
        assert "link_load_consistency" in report.failures()

    def test_stability(self, tiny_scenario):
        state = _admitted_state(tiny_scenario)
        key, link = next(iter(tiny_scenario.topology.links.items()))
        state.link_load[key] = link.service_rate_mu
        report = evaluate_constraints(state, tiny_scenario)
        assert "stability" in report.failures()

    def test_cost_threshold(self, tiny_scenario):
        cheap = dataclasses.replace(tiny_scenario, cost_threshold=1e-6)
        state = _admitted_state(cheap)
        report = evaluate_constraints(state, cheap)
        assert "cost_threshold" in report.failures()

    def test_sla(self, tiny_scenario):
        state = _admitted_state(tiny_scenario)
        alloc = next(iter(state.allocations.values()))
        key = alloc.links[0]
        mu = tiny_scenario.topology.links[key].service_rate_mu
        state.link_load[key] = mu * (1.0 - 1e-12)  # stable but glacial
        report = evaluate_constraints(state, tiny_scenario)
        assert "sla" in report.failures()

    def test_integrity(self, tiny_scenario):
        state = _admitted_state(tiny_scenario)
        alloc = next(iter(state.allocations.values()))
        del state.instances[alloc.instance_id]
        report = evaluate_constraints(state, tiny_scenario)
        assert "integrity" in report.failures()


class TestObjective:
    def test_sums_per_request_delays(self, tiny_scenario):
        state = _admitted_state(tiny_scenario)
        want = sum(sum(request_delay(state, tiny_scenario, rid))
                   for rid in state.allocations)
        assert objective(state, tiny_scenario) == pytest.approx(want)

    def test_refuses_infeasible_state(self, tiny_scenario):
        state = _admitted_state(tiny_scenario)
        key = next(iter(state.link_load))
        state.link_load[key] *= 2.0
        with pytest.raises(InfeasibleError):
            objective(state, tiny_scenario)
        # explicit opt-out still evaluates
        assert objective(state, tiny_scenario, check_feasible=False) > 0.0


class TestSolveExact:
    def test_places_every_request_feasibly(self, tiny_scenario):
        state = solve_exact(tiny_scenario)
        assert len(state.allocations) == len(tiny_scenario.requests)
        assert evaluate_constraints(state, tiny_scenario).feasible

    def test_single_request_picks_min_delay_entry(self):
        scenario = micro_scenario(3)
        scenario = with_requests(scenario, scenario.requests[:1])
        state = solve_exact(scenario)
        got = objective(state, scenario)
        # brute-force the one-request optimum over all (path, VM) choices
        lists = build_sorted_lists(scenario.topology, scenario.k_paths)
        req = scenario.requests[0]
        best = None
        for entry in lists.list_for_bs(req.origin):
            for vm in scenario.vm_catalog:
                trial = PlacementState(scenario)
                inst = trial.launch_instance(entry.cloud, vm)
                trial.admit(req, inst.id, entry.id, entry.link_keys)
                cand = objective(trial, scenario)
                best = cand if best is None else min(best, cand)
        assert got == pytest.approx(best)

    def test_not_worse_than_any_heuristic(self):
        for seed in (0, 11, 23):
            scenario = micro_scenario(seed)
            opt = objective(solve_exact(scenario), scenario)
            for kind in ("bnb_plain", "sa_short"):
                res = place(scenario, HeuristicConfig(kind, seed=seed,
                                                      mode="static"))
                assert objective(res.state, scenario) >= opt - 1e-12

    def test_deterministic(self, tiny_scenario):
        a = solve_exact(tiny_scenario)
        b = solve_exact(tiny_scenario)
        assert a.signature() == b.signature()

    def test_budget_enforced(self, tiny_scenario):
        reqs = [ServiceRequest(i, tiny_scenario.requests[0].origin,
                               "physical", 1000.0, 500.0,
                               holding_time=0.008) for i in range(5)]
        with pytest.raises(BudgetExceeded):
            solve_exact(with_requests(tiny_scenario, reqs))

    def test_infeasible_raises(self, tiny_scenario):
        broke = dataclasses.replace(tiny_scenario, cost_threshold=1e-9)
        with pytest.raises(InfeasibleError):
            solve_exact(broke)

    def test_budget_is_configurable(self, tiny_scenario):
        tight = ExactBudget(max_requests=1)
        with pytest.raises(BudgetExceeded):
            solve_exact(tiny_scenario, tight)

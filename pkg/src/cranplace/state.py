"""Mutable placement state: allocations, live VM instances, residual
capacities, queue loads and run counters."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import CranplaceError
from .model import CapacityVector, Scenario, ServiceRequest, VmType, demand_of


@dataclass
class DelayBreakdown:
    link_delay: float = 0.0
    compute_delay: float = 0.0
    migration_delay: float = 0.0

    @property
    def total(self) -> float:
        return self.link_delay + self.compute_delay + self.migration_delay


@dataclass
class VmInstance:
    id: int
    cloud: str
    vm_type: VmType
    residual: CapacityVector
    assigned: dict[int, CapacityVector] = field(default_factory=dict)

    def clone(self) -> "VmInstance":
        return VmInstance(self.id, self.cloud, self.vm_type, self.residual,
                          dict(self.assigned))


@dataclass(frozen=True)
class Allocation:
    request_id: int
    cloud: str
    instance_id: int
    path_id: str
    links: tuple[tuple[str, str], ...]  # non-ignored links of the path
    consumed: CapacityVector
    rate_pps: float


class PlacementState:
    """Single-writer state mutated by one placement run at a time."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.allocations: dict[int, Allocation] = {}
        self.instances: dict[int, VmInstance] = {}
        self.residual_cloud: dict[str, CapacityVector] = {
            c.id: c.capacity for c in scenario.topology.clouds()}
        self.link_load: dict[tuple[str, str], float] = {}
        self.cloud_load: dict[str, float] = {}
        self.path_load: dict[str, float] = {}
        self.dropped: list[int] = []
        self.migrations: int = 0
        self.instances_launched: int = 0
        self.resources_used: float = 0.0   # cumulative normalized units
        self.cost_accrued: float = 0.0     # cumulative $/h of launches
        self._next_instance_id: int = 0
        self._live_cost: float = 0.0

    # -- instance lifecycle ------------------------------------------------

    def launch_instance(self, cloud: str, vm_type: VmType) -> VmInstance:
        residual = self.residual_cloud[cloud]
        if not residual.covers(vm_type.capacity):
            raise CranplaceError(f"cloud {cloud} cannot host {vm_type.name}")
        inst = VmInstance(self._next_instance_id, cloud, vm_type,
                          vm_type.capacity)
        self._next_instance_id += 1
        self.instances[inst.id] = inst
        self.residual_cloud[cloud] = residual - vm_type.capacity
        self.instances_launched += 1
        self.resources_used += vm_type.resource_units
        self.cost_accrued += vm_type.hourly_cost
        self._live_cost += vm_type.hourly_cost
        return inst

    def retire_instance(self, instance_id: int) -> None:
        inst = self.instances.pop(instance_id)
        if inst.assigned:
            raise CranplaceError(f"instance {instance_id} still has "
                                 "assignments")
        self.residual_cloud[inst.cloud] = (self.residual_cloud[inst.cloud]
                                           + inst.vm_type.capacity)
        self._live_cost -= inst.vm_type.hourly_cost

    # -- request lifecycle -------------------------------------------------

    def consumed_for(self, request: ServiceRequest,
                     instance: VmInstance) -> CapacityVector:
        """Capacity actually subtracted on admission: storage in full,
        CPU/network clipped to what is left (degraded admission)."""
        demand = demand_of(request, self.scenario)
        r = instance.residual
        return CapacityVector(min(demand.cpu, r.cpu), demand.storage,
                              min(demand.network, r.network))

    def admit(self, request: ServiceRequest, instance_id: int, path_id: str,
              links: tuple[tuple[str, str], ...]) -> Allocation:
        if request.id in self.allocations:
            raise CranplaceError(f"request {request.id} already admitted")
        inst = self.instances[instance_id]
        consumed = self.consumed_for(request, inst)
        new_residual = inst.residual - consumed
        if not new_residual.nonnegative():
            raise CranplaceError(f"instance {instance_id} over-committed")
        inst.residual = new_residual
        inst.assigned[request.id] = consumed
        alloc = Allocation(request.id, inst.cloud, instance_id, path_id,
                           links, consumed, request.rate_pps)
        self.allocations[request.id] = alloc
        rate = request.rate_pps
        for key in links:
            self.link_load[key] = self.link_load.get(key, 0.0) + rate
        self.cloud_load[inst.cloud] = (self.cloud_load.get(inst.cloud, 0.0)
                                       + rate)
        self.path_load[path_id] = self.path_load.get(path_id, 0.0) + rate
        return alloc

    def release(self, request_id: int) -> Allocation:
        """Undo an admission; retires the instance if it becomes empty."""
        try:
            alloc = self.allocations.pop(request_id)
        except KeyError:
            raise CranplaceError(f"request {request_id} is not admitted") \
                from None
        inst = self.instances[alloc.instance_id]
        del inst.assigned[request_id]
        inst.residual = inst.residual + alloc.consumed
        for key in alloc.links:
            left = self.link_load[key] - alloc.rate_pps
            if left <= 1e-12:
                del self.link_load[key]
            else:
                self.link_load[key] = left
        cloud_left = self.cloud_load[alloc.cloud] - alloc.rate_pps
        if cloud_left <= 1e-12:
            del self.cloud_load[alloc.cloud]
        else:
            self.cloud_load[alloc.cloud] = cloud_left
        path_left = self.path_load[alloc.path_id] - alloc.rate_pps
        if path_left <= 1e-12:
            del self.path_load[alloc.path_id]
        else:
            self.path_load[alloc.path_id] = path_left
        if not inst.assigned:
            self.retire_instance(alloc.instance_id)
        return alloc

    def drop(self, request_id: int) -> None:
        self.dropped.append(request_id)

    # -- bookkeeping -------------------------------------------------------

    def live_cost(self) -> float:
        """Hourly cost of currently running instances."""
        return self._live_cost

    def instances_at(self, cloud: str) -> list[VmInstance]:
        return [i for i in self.instances.values() if i.cloud == cloud]

    def clone(self) -> "PlacementState":
        other = PlacementState.__new__(PlacementState)
        other.scenario = self.scenario
        other.allocations = dict(self.allocations)
        other.instances = {k: v.clone() for k, v in self.instances.items()}
        other.residual_cloud = dict(self.residual_cloud)
        other.link_load = dict(self.link_load)
        other.cloud_load = dict(self.cloud_load)
        other.path_load = dict(self.path_load)
        other.dropped = list(self.dropped)
        other.migrations = self.migrations
        other.instances_launched = self.instances_launched
        other.resources_used = self.resources_used
        other.cost_accrued = self.cost_accrued
        other._next_instance_id = self._next_instance_id
        other._live_cost = self._live_cost
        return other

    def signature(self):
        """Hashable snapshot used by atomicity tests."""
        return (
            tuple(sorted((k, v.cloud, v.instance_id, v.path_id)
                         for k, v in self.allocations.items())),
            tuple(sorted((i, inst.residual) for i, inst in
                         self.instances.items())),
            tuple(sorted(self.link_load.items())),
            tuple(sorted(self.cloud_load.items())),
            tuple(self.dropped),
            self.migrations,
            self.instances_launched,
            round(self.resources_used, 9),
        )

"""Service migration: transfer-time model and the relocation procedure
that frees capacity for otherwise-droppable requests."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NoPath
from .model import demand_of
from .paths import k_shortest_paths

GIB = 2 ** 30


@dataclass(frozen=True)
class MigrationParams:
    overhead: float = 0.5            # seconds
    page_size: float = 4096.0        # bytes
    link_speed: float = 10e9         # bits/s fallback when no residual known
    image_bytes: float = 65536.0     # live service state transferred per move

    def __post_init__(self):
        if self.overhead < 0 or self.page_size <= 0 or self.link_speed <= 0 \
                or self.image_bytes <= 0:
            raise ValueError("migration parameters must be positive")


def migration_time(vm_size: float, params: MigrationParams,
                   link_speed: float | None = None) -> float:
    """Modeled relocation time for a service running on a VM of `vm_size`
    bytes: overhead + (5 * size - one page) / link speed."""
    if vm_size < params.page_size:
        raise ValueError("vm_size smaller than one page")
    speed = link_speed if link_speed else params.link_speed
    return params.overhead + (5.0 * vm_size - params.page_size) * 8.0 / speed


def intercloud_link_speed(state, src_cloud: str, dst_cloud: str,
                          params: MigrationParams,
                          packet_size_bytes: float) -> float:
    """Residual bandwidth (bits/s) of the best inter-cloud path; falls back
    to the configured default when saturated or disconnected."""
    if src_cloud == dst_cloud:
        return params.link_speed
    try:
        entries = k_shortest_paths(state.scenario.topology, src_cloud,
                                   dst_cloud, 1)
    except NoPath:
        return params.link_speed
    to_gbps = packet_size_bytes * 8.0 / 1e9
    residual = min(
        l.capacity_bw - state.link_load.get(l.key, 0.0) * to_gbps
        for l in entries[0].links)
    if residual <= 0:
        return params.link_speed
    return residual * 1e9


def try_migrate_for_fit(state, request, lists, admitter, params=None,
                        packet_size_bytes: float = 500.0,
                        eviction_limit: int | None = None,
                        events: list | None = None,
                        target_limit: int | None = None):
    """Free capacity for `request` by relocating already-placed services.

    Tries the request's clouds in current delay order (at most
    `target_limit` of them when given): evict the target
    cloud's allocations in ascending consumed-demand order, re-admitting
    each evictee at its next-best feasible cloud via `admitter`; after each
    relocation retry the new request. Atomic: on failure the caller's
    state is untouched and the returned count is 0.

    `admitter(state, request, exclude_clouds)` is the run's placement
    policy; it commits the admission on that state and returns the
    Allocation, or returns None leaving the state untouched.

    Returns (migration_count, success, state).  When `events` is given it
    receives one (request_id, migration_delay) pair per relocation of the
    returned state; it is left empty on failure.
    """
    if params is None:
        params = MigrationParams()
    entries = lists.list_for_bs(request.origin)
    target_clouds: list[str] = []
    for e in entries:
        if e.cloud not in target_clouds:
            target_clouds.append(e.cloud)
    if target_limit is not None:
        target_clouds = target_clouds[:target_limit]
    by_id = {r.id: r for r in state.scenario.requests}
    demand = demand_of(request, state.scenario)

    for target in target_clouds:
        evictee_ids = [a.request_id for a in sorted(
            (a for a in state.allocations.values() if a.cloud == target),
            key=lambda a: (a.consumed.cpu + a.consumed.storage
                           + a.consumed.network, a.request_id))]
        if eviction_limit is not None:
            evictee_ids = evictee_ids[:eviction_limit]
        # cheap necessary condition before any cloning: even after the whole
        # eviction budget, the target must have enough total storage to hold
        # the request (storage is never degraded on admission)
        avail = state.residual_cloud[target].storage + sum(
            i.residual.storage for i in state.instances.values()
            if i.cloud == target) + sum(
            state.allocations[r].consumed.storage for r in evictee_ids)
        if demand.storage > avail:
            continue
        work = state.clone()
        moved = 0
        moves: list[tuple[int, float]] = []
        for rid in evictee_ids:
            if rid not in work.allocations:
                continue
            victim = by_id[rid]
            trial = work.clone()
            old_alloc = trial.release(rid)
            relocated = admitter(trial, victim, exclude_clouds={target})
            if relocated is None:
                continue
            speed = intercloud_link_speed(trial, target, relocated.cloud,
                                          params, packet_size_bytes)
            # what moves is the service's live state, not its disk footprint
            vm_bytes = max(params.page_size, params.image_bytes)
            trial.migrations += 1
            moved += 1
            moves.append((rid, migration_time(vm_bytes, params, speed)))
            work = trial
            accepted = admitter(work, request, exclude_clouds=set())
            if accepted is not None:
                if events is not None:
                    events.extend(moves)
                return moved, True, work
        # this target did not work out; try the next-best cloud

    return 0, False, state

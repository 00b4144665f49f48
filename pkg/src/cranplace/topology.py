"""Three-tier topology generator: base stations -> aggregation routers ->
core ring with per-cloud backhaul chains -> clouds."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .errors import ScenarioError
from .model import (BASE_STATION, CLOUD, ROUTER, CapacityVector, Link, Node,
                    Topology)


@dataclass(frozen=True)
class LinkParams:
    """Rates and capacities used when generating a topology."""

    backhaul_gbps: float = 20.0       # aggregator uplink bandwidth
    bs_link_gbps: float = 100.0       # BS access links (ignored for load)
    chain_gbps: float = 320.0         # core ring and cloud backhaul chains
    packet_size_bytes: float = 500.0  # converts Gbps to packets/s
    cloud_capacity_total: CapacityVector = field(
        default_factory=lambda: CapacityVector(20000.0, 200000.0, 20000.0))
    cloud_service_rate_total: float = 4.0e7  # packets/s across all clouds
    max_core_routers: int | None = None

    def mu_for(self, gbps: float) -> float:
        return gbps * 1e9 / (self.packet_size_bytes * 8.0)


def bs_node_id(index: int, n_bs: int) -> str:
    """Zero-padded base-station node id, stable for a given fleet size."""
    width = len(str(max(n_bs - 1, 0)))
    return f"bs{index:0{width}d}"


def chain_depth(group_size: int) -> int:
    """Number of backhaul routers between a core router and its cloud.

    Grows roughly logarithmically with the number of base stations a cloud
    serves; small groups attach their cloud straight to the core router.
    """
    d = 0
    threshold = 8.0
    while group_size >= threshold - 1e-9:
        d += 1
        threshold *= 1.5
    return d


def group_size(n_bs: int, n_clouds: int) -> int:
    """Base stations served per cloud, rounded half-up."""
    return int(math.floor(n_bs / n_clouds + 0.5))


def build_topology(n_bs: int, n_clouds: int, bs_per_aggregator: int,
                   link_params: LinkParams | None = None) -> Topology:
    """Deterministic generator.

    Each cloud owns one core router ("head") plus a chain of backhaul
    routers whose depth scales with the per-cloud base-station group size.
    Aggregation routers attach round-robin to heads; heads form a ring.
    BS access links are flagged ignore_load: only the aggregation and core
    segments are modeled as M/D/1 queues.
    """
    if n_bs < 1 or n_clouds < 1 or bs_per_aggregator < 1:
        raise ScenarioError("n_bs, n_clouds and bs_per_aggregator must be "
                            ">= 1")
    p = link_params or LinkParams()
    if p.max_core_routers is not None and n_clouds > p.max_core_routers:
        raise ScenarioError(f"{n_clouds} clouds exceed the core-router "
                            f"budget of {p.max_core_routers}")

    n_agg = math.ceil(n_bs / bs_per_aggregator)
    g = group_size(n_bs, n_clouds)
    depth = chain_depth(g)

    bs_id = lambda b: bs_node_id(b, n_bs)

    nodes: list[Node] = []
    links: list[Link] = []

    for b in range(n_bs):
        nodes.append(Node(bs_id(b), BASE_STATION, traffic=0.0))
    for a in range(n_agg):
        nodes.append(Node(f"agg{a}", ROUTER))
    for k in range(n_clouds):
        nodes.append(Node(f"head{k}", ROUTER))
        for r in range(depth):
            nodes.append(Node(f"bh{k}_{r}", ROUTER))
        nodes.append(Node(
            f"cloud{k}", CLOUD,
            capacity=p.cloud_capacity_total.scale(1.0 / n_clouds),
            service_rate=p.cloud_service_rate_total / n_clouds))

    def both_ways(src, dst, gbps, ignore=False):
        mu = p.mu_for(gbps)
        links.append(Link(src, dst, mu, gbps, ignore_load=ignore))
        links.append(Link(dst, src, mu, gbps, ignore_load=ignore))

    # access and aggregation
    for b in range(n_bs):
        both_ways(bs_id(b), f"agg{b // bs_per_aggregator}", p.bs_link_gbps,
                  ignore=True)
    for a in range(n_agg):
        both_ways(f"agg{a}", f"head{a % n_clouds}", p.backhaul_gbps)

    # per-cloud backhaul chain; fat shared segment so that adding clouds
    # thins the per-chain load
    chain_gbps = p.chain_gbps
    for k in range(n_clouds):
        hops = [f"head{k}"] + [f"bh{k}_{r}" for r in range(depth)] \
            + [f"cloud{k}"]
        for u, v in zip(hops, hops[1:]):
            both_ways(u, v, chain_gbps)

    # core ring
    if n_clouds == 2:
        both_ways("head0", "head1", chain_gbps)
    elif n_clouds > 2:
        for k in range(n_clouds):
            both_ways(f"head{k}", f"head{(k + 1) % n_clouds}", chain_gbps)

    return Topology(nodes, links)


def core_attachment(topology: Topology, bs: str) -> str:
    """Core router behind a base station's aggregator."""
    agg = topology.first_hop(bs)
    for nbr in topology.neighbors(agg):
        if topology.nodes[nbr].kind == ROUTER:
            return nbr
    raise ScenarioError(f"aggregator {agg} has no core attachment")


def hops_to_nearest_cloud(topology: Topology, start: str) -> int:
    """BFS link count from a router to the closest cloud node."""
    seen = {start}
    queue = deque([(start, 0)])
    while queue:
        node, dist = queue.popleft()
        if topology.nodes[node].kind == CLOUD:
            return dist
        for nbr in topology.neighbors(node):
            if nbr not in seen and topology.nodes[nbr].kind != BASE_STATION:
                seen.add(nbr)
                queue.append((nbr, dist + 1))
    raise ScenarioError(f"no cloud reachable from {start}")


def average_bs_cloud_hops(topology: Topology) -> float:
    """Mean hop count over the inter-cloud segment: from each base
    station's core router to its nearest cloud."""
    stations = topology.base_stations()
    total = sum(hops_to_nearest_cloud(topology, core_attachment(topology, n.id))
                for n in stations)
    return total / len(stations)

"""Workload generation: seeded Poisson request streams whose aggregate
traffic targets a chosen fraction of the backhaul link capacity."""

from __future__ import annotations

import math
import random

from . import defaults
from .errors import ScenarioError
from .model import CapacityVector, Scenario, ServiceRequest
from .topology import LinkParams, bs_node_id, build_topology


def generate_workload(n_bs: int, n_requests: int, seed: int = 0,
                      class_mix=None, load_fraction: float = 0.6,
                      bs_per_aggregator: int = defaults.DEFAULT_BS_PER_AGGREGATOR,
                      backhaul_gbps: float = defaults.DEFAULT_BACKHAUL_GBPS,
                      packet_size_bytes: float = defaults.DEFAULT_PACKET_SIZE_BYTES,
                      volume_packets: float = defaults.DEFAULT_VOLUME_PACKETS,
                      holding_time: float = defaults.DEFAULT_HOLDING_TIME_S,
                      class_names=None) -> list[ServiceRequest]:
    """Exponential inter-arrivals, origins uniform over base stations,
    classes drawn from `class_mix` (uniform by default).

    The arrival rate is chosen so that the long-run mean offered traffic on
    each aggregation link equals `load_fraction` of its capacity: each
    request carries volume * packet_size bits, so the per-link request rate
    must be load * capacity / that payload.
    """
    if n_bs < 1 or n_requests < 1:
        raise ScenarioError("n_bs and n_requests must be >= 1")
    if not 0.0 < load_fraction < 1.0:
        raise ScenarioError("load_fraction must be in (0, 1)")
    names = list(class_names) if class_names is not None \
        else list(defaults.DEFAULT_CLASS_NAMES)
    if class_mix is None:
        weights = [1.0] * len(names)
    else:
        weights = [float(class_mix[name]) for name in names]

    bits_per_request = volume_packets * packet_size_bytes * 8.0
    rate_per_link = load_fraction * backhaul_gbps * 1e9 / bits_per_request
    n_agg = math.ceil(n_bs / bs_per_aggregator)
    total_rate = rate_per_link * n_agg

    rng = random.Random(seed)
    requests = []
    t = 0.0
    for i in range(n_requests):
        t += rng.expovariate(total_rate)
        origin = bs_node_id(rng.randrange(n_bs), n_bs)
        cls = rng.choices(names, weights=weights, k=1)[0]
        requests.append(ServiceRequest(
            id=i, origin=origin, class_name=cls,
            volume_packets=volume_packets,
            packet_size_bytes=packet_size_bytes,
            arrival_time=t, holding_time=holding_time))
    return requests


def link_params_from(params: dict) -> LinkParams:
    """Topology link/capacity settings out of a scenario's params block."""
    cap = params.get("cloud_capacity_total")
    if cap is None:
        cap = defaults.DEFAULT_CLOUD_CAPACITY_TOTAL
    elif not isinstance(cap, CapacityVector):
        cap = CapacityVector(*cap)
    return LinkParams(
        backhaul_gbps=params.get("backhaul_gbps",
                                 defaults.DEFAULT_BACKHAUL_GBPS),
        bs_link_gbps=params.get("bs_link_gbps", 100.0),
        chain_gbps=params.get("chain_gbps", 320.0),
        packet_size_bytes=params.get("packet_size_bytes",
                                     defaults.DEFAULT_PACKET_SIZE_BYTES),
        cloud_capacity_total=cap,
        cloud_service_rate_total=params.get(
            "cloud_service_rate_total", defaults.DEFAULT_CLOUD_RATE_TOTAL),
    )


def make_scenario(n_bs: int, n_clouds: int, n_requests: int,
                  load_fraction: float = 0.6, seed: int = 0,
                  cost_threshold: float = defaults.DEFAULT_COST_THRESHOLD,
                  resource_cap_total: float = defaults.DEFAULT_RESOURCE_CAP,
                  params: dict | None = None) -> Scenario:
    """Stock scenario: generated topology, stock VM catalog and
    service classes, and a load-targeted workload. Everything needed to
    rebuild the topology for a different cloud count is kept in params."""
    merged = dict(defaults.DEFAULT_PARAMS)
    if params:
        merged.update(params)
    merged.setdefault("n_bs", n_bs)
    merged.setdefault("bs_per_aggregator", defaults.DEFAULT_BS_PER_AGGREGATOR)
    merged.setdefault("load_fraction", load_fraction)
    merged.setdefault("seed", seed)
    merged.setdefault("volume_packets", defaults.DEFAULT_VOLUME_PACKETS)
    merged.setdefault("holding_time", defaults.DEFAULT_HOLDING_TIME_S)
    merged.setdefault("backhaul_gbps", defaults.DEFAULT_BACKHAUL_GBPS)

    lp = link_params_from(merged)
    topology = build_topology(n_bs, n_clouds, merged["bs_per_aggregator"], lp)
    requests = generate_workload(
        n_bs, n_requests, seed=seed, load_fraction=load_fraction,
        bs_per_aggregator=merged["bs_per_aggregator"],
        backhaul_gbps=merged["backhaul_gbps"],
        packet_size_bytes=merged["packet_size_bytes"],
        volume_packets=merged["volume_packets"],
        holding_time=merged["holding_time"])
    return Scenario(
        topology=topology,
        vm_catalog=list(defaults.DEFAULT_VM_CATALOG),
        classes=list(defaults.DEFAULT_CLASSES),
        requests=requests,
        cost_threshold=cost_threshold,
        degradation_fraction=0.2,
        k_paths=defaults.DEFAULT_K_PATHS,
        resource_cap_total=resource_cap_total,
        params=merged,
    )

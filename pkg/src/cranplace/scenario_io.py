"""Scenario (de)serialization to YAML files."""

from __future__ import annotations

import yaml

from .errors import ScenarioError
from .model import (CapacityVector, Link, Node, Scenario, ServiceClass,
                    ServiceRequest, Topology, VmType)

try:
    _Loader = yaml.CSafeLoader
    _Dumper = yaml.CSafeDumper
except AttributeError:  # libyaml not available
    _Loader = yaml.SafeLoader
    _Dumper = yaml.SafeDumper


def _cap_to_list(cap: CapacityVector):
    return [cap.cpu, cap.storage, cap.network]


def scenario_to_dict(scenario: Scenario) -> dict:
    topo = scenario.topology
    params = {k: (_cap_to_list(v) if isinstance(v, CapacityVector) else v)
              for k, v in sorted(scenario.params.items())}
    return {
        "topology": {
            "nodes": [
                {"id": n.id, "kind": n.kind,
                 "capacity": _cap_to_list(n.capacity),
                 "traffic": n.traffic, "service_rate": n.service_rate}
                for n in (topo.nodes[k] for k in sorted(topo.nodes))],
            "links": [
                {"src": l.src, "dst": l.dst,
                 "service_rate_mu": l.service_rate_mu,
                 "capacity_bw": l.capacity_bw,
                 "ignore_load": l.ignore_load}
                for l in (topo.links[k] for k in sorted(topo.links))],
        },
        "vm_catalog": [
            {"name": v.name, "capacity": _cap_to_list(v.capacity),
             "hourly_cost": v.hourly_cost} for v in scenario.vm_catalog],
        "classes": [
            {"name": c.name,
             "demand_per_10gbps": _cap_to_list(c.demand_per_10gbps),
             "sla_delay_bound": c.sla_delay_bound}
            for c in scenario.classes],
        "requests": [
            {"id": r.id, "origin": r.origin, "class_name": r.class_name,
             "volume_packets": r.volume_packets,
             "packet_size_bytes": r.packet_size_bytes,
             "arrival_time": r.arrival_time,
             "holding_time": r.holding_time}
            for r in scenario.requests],
        "cost_threshold": scenario.cost_threshold,
        "degradation_fraction": scenario.degradation_fraction,
        "k_paths": scenario.k_paths,
        "resource_cap_total": scenario.resource_cap_total,
        "params": params,
    }


def scenario_from_dict(data: dict) -> Scenario:
    try:
        topo_data = data["topology"]
        nodes = [Node(d["id"], d["kind"],
                      CapacityVector(*d.get("capacity", (0, 0, 0))),
                      d.get("traffic", 0.0), d.get("service_rate", 0.0))
                 for d in topo_data["nodes"]]
        links = [Link(d["src"], d["dst"], d["service_rate_mu"],
                      d["capacity_bw"], d.get("ignore_load", False))
                 for d in topo_data["links"]]
        vm_catalog = [VmType(d["name"], CapacityVector(*d["capacity"]),
                             d["hourly_cost"]) for d in data["vm_catalog"]]
        classes = [ServiceClass(d["name"],
                                CapacityVector(*d["demand_per_10gbps"]),
                                d["sla_delay_bound"])
                   for d in data["classes"]]
        requests = [ServiceRequest(d["id"], d["origin"], d["class_name"],
                                   d["volume_packets"],
                                   d["packet_size_bytes"],
                                   d.get("arrival_time", 0.0),
                                   d.get("holding_time", 1.0))
                    for d in data["requests"]]
        return Scenario(
            topology=Topology(nodes, links),
            vm_catalog=vm_catalog,
            classes=classes,
            requests=requests,
            cost_threshold=data["cost_threshold"],
            degradation_fraction=data.get("degradation_fraction", 0.2),
            k_paths=data.get("k_paths", 3),
            resource_cap_total=data.get("resource_cap_total", 50000.0),
            params=dict(data.get("params", {})),
        )
    except (KeyError, TypeError) as exc:
        raise ScenarioError(f"malformed scenario data: {exc}") from exc


def save_scenario(scenario: Scenario, path) -> None:
    with open(path, "w") as fh:
        yaml.dump(scenario_to_dict(scenario), fh, Dumper=_Dumper,
                  sort_keys=False, default_flow_style=None)


def load_scenario(path) -> Scenario:
    with open(path) as fh:
        data = yaml.load(fh, Loader=_Loader)
    if not isinstance(data, dict):
        raise ScenarioError(f"{path}: not a scenario file")
    return scenario_from_dict(data)

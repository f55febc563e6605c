"""Planar distance, SDCC-DPC collapse and route coverage."""

import math
from dataclasses import replace
from typing import Sequence

import numpy as np

from dmcis.core.models import GeoPoint, MapUnit, MobilityMode, Topology


def distance(p: GeoPoint, q: GeoPoint) -> float:
    """Euclidean distance in meters."""
    return math.hypot(q.x - p.x, q.y - p.y)


def _collapses(sdcc_pos: GeoPoint, dpc_pos: GeoPoint, delta: float) -> bool:
    # Identical position always collapses, even with delta = 0.
    return sdcc_pos == dpc_pos or distance(sdcc_pos, dpc_pos) < delta


def collapse_pairs(topology: Topology) -> list[tuple[int, int]]:
    """All (sdcc_id, dpc_id) pairs of a region closer than delta.

    The comparison is strict, so a pair exactly delta apart does not
    collapse. Pairs are returned sorted by SDCC id, then DPC id.
    """
    pairs: list[tuple[int, int]] = []
    for region in topology.regions:
        for sdcc in region.sdccs:
            for dpc in region.dpcs:
                if _collapses(sdcc.position, dpc.position, topology.delta):
                    pairs.append((sdcc.sdcc_id, dpc.dpc_id))
    return sorted(pairs)


def apply_collapse(topology: Topology) -> Topology:
    """Return a topology whose SDCCs carry ``collapsed_with``.

    Each collapsed SDCC is bound to its nearest collapsed DPC, lower id on
    ties. Re-applying is idempotent.
    """
    partners: dict[int, list[int]] = {}
    for sdcc_id, dpc_id in collapse_pairs(topology):
        partners.setdefault(sdcc_id, []).append(dpc_id)

    regions = []
    for region in topology.regions:
        dpcs = {d.dpc_id: d for d in region.dpcs}
        sdccs = []
        for sdcc in region.sdccs:
            candidates = partners.get(sdcc.sdcc_id, [])
            chosen = None
            if candidates:
                chosen = min(
                    candidates,
                    key=lambda d: (distance(sdcc.position, dpcs[d].position), d),
                )
            sdccs.append(replace(sdcc, collapsed_with=chosen))
        regions.append(replace(region, sdccs=tuple(sdccs)))
    return replace(topology, regions=tuple(regions))


def point_to_segment(p: GeoPoint, a: GeoPoint, b: GeoPoint) -> float:
    """Shortest distance from p to segment ab."""
    ap = np.array([p.x - a.x, p.y - a.y])
    ab = np.array([b.x - a.x, b.y - a.y])
    length_sq = float(ab @ ab)
    if length_sq == 0.0:
        return float(np.linalg.norm(ap))
    t = float(np.clip((ap @ ab) / length_sq, 0.0, 1.0))
    return float(np.linalg.norm(ap - t * ab))


def route_distance(route: Sequence[GeoPoint], target: GeoPoint) -> float:
    """Closest approach of a closed waypoint loop to a target."""
    if len(route) == 1:
        return distance(route[0], target)
    legs = zip(route, list(route[1:]) + [route[0]])
    return min(point_to_segment(target, a, b) for a, b in legs)


def route_visits(map_unit: MapUnit, target: GeoPoint) -> bool:
    """Whether the MAP's movement ever brings the target into contact range."""
    if map_unit.mobility is MobilityMode.RANDOM_WAYPOINT and map_unit.bounds:
        xmin, ymin, xmax, ymax = map_unit.bounds
        return xmin <= target.x <= xmax and ymin <= target.y <= ymax
    return route_distance(map_unit.route, target) <= map_unit.contact_range

#!/usr/bin/env python3
"""Generates the synthetic benchmark corpus.

Roads are built from a curvature profile along a center line; lanes are
parallel offsets split into lanelets. Obstacles move at constant speed along
their lane. Files whose name starts with ``basic_`` form the basic subset.

Usage: gen_corpus.py OUT_DIR
"""

import json
import math
import sys
from pathlib import Path

import numpy as np

LANE_WIDTH = 3.5
DT = 0.1
VERTEX_SPACING = 2.0


class Road:
    """Center line sampled every ds metres from straight and clothoid-like pieces."""

    def __init__(self, pieces, ds=0.25):
        kappa = []
        for piece in pieces:
            n = int(round(piece[1] / ds))
            if piece[0] == "straight":
                kappa += [0.0] * n
            else:
                _, _, k0, k1 = piece
                kappa += list(np.linspace(k0, k1, n, endpoint=False))
        x, y, h = [0.0], [0.0], [0.0]
        for k in kappa:
            hm = h[-1] + 0.5 * k * ds
            x.append(x[-1] + ds * math.cos(hm))
            y.append(y[-1] + ds * math.sin(hm))
            h.append(h[-1] + k * ds)
        self.s = np.arange(len(x)) * ds
        self.x = np.array(x)
        self.y = np.array(y)
        self.h = np.array(h)
        self.length = float(self.s[-1])

    def pose(self, s, d=0.0):
        x = np.interp(s, self.s, self.x)
        y = np.interp(s, self.s, self.y)
        h = np.interp(s, self.s, self.h)
        return x - d * math.sin(h), y + d * math.cos(h), h

    def line(self, d, s0, s1):
        n = max(1, int(math.ceil((s1 - s0) / VERTEX_SPACING)))
        pts = []
        for i in range(n + 1):
            x, y, _ = self.pose(s0 + (s1 - s0) * i / n, d)
            pts.append([round(float(x), 6), round(float(y), 6)])
        return pts


def lanelet_id(lane, seg):
    return 100 * (lane + 1) + seg


def build_lanelets(road, lanes, breaks, present=None, speed_limits=None):
    """lanes: number of parallel lanes (lane 0 rightmost). breaks: segment boundaries in s.

    present(lane, seg) decides whether a lanelet exists.
    """
    present = present or (lambda lane, seg: True)
    speed_limits = speed_limits or {}
    out = []
    nseg = len(breaks) - 1
    for lane in range(lanes):
        for seg in range(nseg):
            if not present(lane, seg):
                continue
            s0, s1 = breaks[seg], breaks[seg + 1]
            d = lane * LANE_WIDTH
            entry = {
                "id": lanelet_id(lane, seg),
                "left": road.line(d + 0.5 * LANE_WIDTH, s0, s1),
                "right": road.line(d - 0.5 * LANE_WIDTH, s0, s1),
                "successors": [lanelet_id(lane, seg + 1)] if seg + 1 < nseg and present(lane, seg + 1) else [],
            }
            if lane + 1 < lanes and present(lane + 1, seg):
                entry["adj_left"] = lanelet_id(lane + 1, seg)
            if lane > 0 and present(lane - 1, seg):
                entry["adj_right"] = lanelet_id(lane - 1, seg)
            lim = speed_limits.get((lane, seg))
            if lim is not None:
                entry["speed_limit"] = lim
            out.append(entry)
    return out


def obstacle(oid, road, lane, s0, v, horizon, length=4.5, width=1.8, lane_to=None, change_at=None, change_dur=3.0):
    states = []
    for t in range(horizon + 1):
        s = min(s0 + v * t * DT, road.length - 0.5 * length - 0.1)
        d = lane * LANE_WIDTH
        if lane_to is not None and t * DT >= change_at:
            u = min(1.0, (t * DT - change_at) / change_dur)
            w = u * u * (3 - 2 * u)
            d = (1 - w) * lane * LANE_WIDTH + w * lane_to * LANE_WIDTH
        x, y, h = road.pose(s, d)
        states.append({"t": t, "x": round(float(x), 6), "y": round(float(y), 6), "psi": round(float(h), 6),
                       "v": round(float(v if s < road.length - 0.5 * length - 0.1 else 0.0), 6)})
    return {"id": oid, "length": length, "width": width, "states": states}


def scenario(road, lanelets, start_s, start_lane, v0, goal, horizon, obstacles=()):
    x, y, h = road.pose(start_s, start_lane * LANE_WIDTH)
    return {
        "dt": DT,
        "horizon": horizon,
        "lanelets": lanelets,
        "obstacles": list(obstacles),
        "problem": {
            "initial": {"x": round(float(x), 6), "y": round(float(y), 6), "delta": 0.0, "v": v0,
                        "psi": round(float(h), 6)},
            "goal": goal,
        },
    }


def goal_lanelets(ids, t, v=(0.0, 30.0)):
    return {"lanelets": ids, "v": list(v), "t": list(t)}


def goal_box(road, s0, s1, d0, d1, t, v=(0.0, 30.0)):
    pts = []
    for s, d in ((s0, d0), (s1, d0), (s1, d1), (s0, d1)):
        x, y, _ = road.pose(s, d)
        pts.append([round(float(x), 6), round(float(y), 6)])
    return {"polygon": pts, "v": list(v), "t": list(t)}


def corpus():
    out = {}
    straight = Road([("straight", 300.0)])
    H = 200

    # Basic subset: straight roads, curves, one lane change.
    out["basic_straight_empty"] = scenario(
        straight, build_lanelets(straight, 1, [0, 100, 200, 300]), 10.0, 0, 10.0,
        goal_lanelets([lanelet_id(0, 1)], (0, H)), H)
    out["basic_straight_two_lanes"] = scenario(
        straight, build_lanelets(straight, 2, [0, 100, 200, 300]), 10.0, 0, 12.0,
        goal_lanelets([lanelet_id(0, 1)], (0, H)), H)
    out["basic_straight_polygon_goal"] = scenario(
        straight, build_lanelets(straight, 1, [0, 150, 300]), 10.0, 0, 8.0,
        goal_box(straight, 120.0, 150.0, -1.75, 1.75, (0, H)), H)
    out["basic_straight_speed_limit"] = scenario(
        straight, build_lanelets(straight, 1, [0, 100, 200, 300], speed_limits={(0, 0): 9.0, (0, 1): 9.0}),
        10.0, 0, 8.0, goal_lanelets([lanelet_id(0, 1)], (0, H), (0.0, 9.5)), H)

    left_curve = Road([("straight", 40.0), ("arc", 40.0, 0.0, 0.02), ("arc", 60.0, 0.02, 0.02),
                       ("arc", 40.0, 0.02, 0.0), ("straight", 120.0)])
    out["basic_curve_left"] = scenario(
        left_curve, build_lanelets(left_curve, 1, [0, 100, 200, left_curve.length]), 10.0, 0, 10.0,
        goal_lanelets([lanelet_id(0, 2)], (0, H)), H)
    right_curve = Road([("straight", 40.0), ("arc", 40.0, 0.0, -0.025), ("arc", 40.0, -0.025, -0.025),
                        ("arc", 40.0, -0.025, 0.0), ("straight", 140.0)])
    out["basic_curve_right"] = scenario(
        right_curve, build_lanelets(right_curve, 1, [0, 100, 200, right_curve.length]), 10.0, 0, 10.0,
        goal_lanelets([lanelet_id(0, 2)], (0, H)), H)
    out["basic_curve_two_lanes"] = scenario(
        left_curve, build_lanelets(left_curve, 2, [0, 100, 200, left_curve.length]), 10.0, 0, 10.0,
        goal_lanelets([lanelet_id(0, 2)], (0, H)), H)
    s_curve = Road([("straight", 30.0), ("arc", 40.0, 0.0, 0.015), ("arc", 80.0, 0.015, -0.015),
                    ("arc", 40.0, -0.015, 0.0), ("straight", 110.0)])
    out["basic_curve_s_shape"] = scenario(
        s_curve, build_lanelets(s_curve, 1, [0, 150, s_curve.length]), 10.0, 0, 10.0,
        goal_lanelets([lanelet_id(0, 1)], (0, H)), H)
    out["basic_lane_change_left"] = scenario(
        straight, build_lanelets(straight, 2, [0, 100, 200, 300]), 10.0, 0, 10.0,
        goal_lanelets([lanelet_id(1, 1)], (0, H)), H)
    out["basic_lane_change_right"] = scenario(
        straight, build_lanelets(straight, 2, [0, 100, 200, 300]), 10.0, 1, 10.0,
        goal_lanelets([lanelet_id(0, 1)], (0, H)), H)
    out["basic_lane_change_polygon_goal"] = scenario(
        straight, build_lanelets(straight, 2, [0, 150, 300]), 10.0, 0, 10.0,
        goal_box(straight, 110.0, 140.0, 1.75, 5.25, (0, H)), H)

    # Traffic.
    two = build_lanelets(straight, 2, [0, 100, 200, 300])
    both_far = [lanelet_id(0, 2), lanelet_id(1, 2)]
    out["stopped_leader_two_lanes"] = scenario(
        straight, two, 10.0, 0, 10.0, goal_lanelets(both_far, (0, H)), H,
        [obstacle(1, straight, 0, 80.0, 0.0, H)])
    out["slow_leader_overtake"] = scenario(
        straight, two, 10.0, 0, 10.0, goal_lanelets(both_far, (0, 180)), H,
        [obstacle(1, straight, 0, 40.0, 4.0, H)])
    out["slow_leader_follow_single_lane"] = scenario(
        straight, build_lanelets(straight, 1, [0, 100, 200, 300]), 10.0, 0, 8.0,
        goal_lanelets([lanelet_id(0, 1)], (0, H)), H,
        [obstacle(1, straight, 0, 40.0, 6.0, H)])
    out["parked_cars_slalom"] = scenario(
        straight, two, 10.0, 0, 10.0, goal_lanelets(both_far, (0, H)), H,
        [obstacle(1, straight, 0, 70.0, 0.0, H), obstacle(2, straight, 1, 150.0, 0.0, H)])
    out["leader_in_target_lane"] = scenario(
        straight, two, 10.0, 0, 10.0, goal_lanelets([lanelet_id(1, 2)], (0, H)), H,
        [obstacle(1, straight, 1, 35.0, 10.0, H)])

    merge_lanes = build_lanelets(straight, 2, [0, 80, 160, 300], present=lambda lane, seg: lane == 1 or seg < 2)
    out["merge_lane_end"] = scenario(
        straight, merge_lanes, 10.0, 0, 10.0, goal_lanelets([lanelet_id(1, 2)], (0, H)), H)
    out["merge_with_traffic"] = scenario(
        straight, merge_lanes, 10.0, 0, 10.0, goal_lanelets([lanelet_id(1, 2)], (0, H)), H,
        [obstacle(1, straight, 1, 0.0, 10.0, H)])
    out["cut_in_ahead"] = scenario(
        straight, two, 10.0, 0, 10.0, goal_lanelets(both_far, (0, H)), H,
        [obstacle(1, straight, 1, 30.0, 8.0, H, lane_to=0, change_at=1.0)])
    out["curve_stopped_leader"] = scenario(
        left_curve, build_lanelets(left_curve, 2, [0, 100, 200, left_curve.length]), 10.0, 0, 10.0,
        goal_lanelets([lanelet_id(0, 2), lanelet_id(1, 2)], (0, H)), H,
        [obstacle(1, left_curve, 0, 90.0, 0.0, H)])
    out["s_curve_slow_leader"] = scenario(
        s_curve, build_lanelets(s_curve, 1, [0, 150, s_curve.length]), 10.0, 0, 8.0,
        goal_lanelets([lanelet_id(0, 1)], (0, H)), H,
        [obstacle(1, s_curve, 0, 45.0, 7.0, H)])
    out["dense_following"] = scenario(
        straight, build_lanelets(straight, 1, [0, 100, 200, 300]), 10.0, 0, 9.0,
        goal_lanelets([lanelet_id(0, 1)], (0, H)), H,
        [obstacle(1, straight, 0, 35.0, 9.0, H), obstacle(2, straight, 0, 60.0, 9.0, H)])
    out["blocked_dead_end"] = scenario(
        straight, build_lanelets(straight, 1, [0, 100, 200, 300]), 10.0, 0, 10.0,
        goal_lanelets([lanelet_id(0, 2)], (0, H)), H,
        [obstacle(1, straight, 0, 70.0, 0.0, H, length=4.0, width=3.6)])
    return out


def main():
    if len(sys.argv) != 2:
        print(__doc__.strip().splitlines()[-1], file=sys.stderr)
        return 1
    out_dir = Path(sys.argv[1])
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, doc in sorted(corpus().items()):
        (out_dir / f"{name}.json").write_text(json.dumps(doc, indent=1) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())

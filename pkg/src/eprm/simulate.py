"""Seeded aircraft-and-sensor scenario simulation.

Everything is a pure function of a generation config and an integer seed.
Randomness comes from numpy's PCG64 generator; per-case seeds mix a global
seed with the case index through SHA-256 (:func:`case_seed`), so corpora
reproduce across platforms and runs.

The map is the unit square.  Aircraft fly along a fixed unit heading with
per-step component speeds drawn from a normal whose variance follows
``sigma2 * |sin(2*pi*t)| / period``; positions accumulate forward from the
start point.  Sensors are discs that record, for every sampling interval
spent entirely inside the disc, the displacement divided by the interval.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

_COORD_TOL = 1e-9


@dataclass(frozen=True)
class AircraftConfig:
    start: tuple[float, float]
    direction: tuple[float, float]
    base_speed: float
    sigma2: float
    period: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "start", (float(self.start[0]), float(self.start[1])))
        object.__setattr__(
            self, "direction", (float(self.direction[0]), float(self.direction[1]))
        )
        norm = math.hypot(*self.direction)
        if abs(norm - 1.0) > _COORD_TOL:
            raise ValueError(f"direction must have unit norm, got {norm!r}")
        if self.base_speed <= 0:
            raise ValueError("base_speed must be positive")
        if self.sigma2 < 0:
            raise ValueError("sigma2 must be non-negative")
        if self.period <= 0:
            raise ValueError("period must be positive")


@dataclass(frozen=True)
class SensorConfig:
    center: tuple[float, float]
    radius: float
    interval: float

    def __post_init__(self):
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        if not 0.0 < self.radius < 0.5:
            raise ValueError("radius must lie in (0, 0.5)")
        for c in self.center:
            if not self.radius - _COORD_TOL <= c <= 1.0 - self.radius + _COORD_TOL:
                raise ValueError("sensor disc must lie inside the unit map")
        if self.interval <= 0:
            raise ValueError("interval must be positive")


@dataclass
class Trajectory:
    """Time-ordered positions, sampled on a uniform grid."""

    times: np.ndarray
    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=np.float64)
        self.xs = np.asarray(self.xs, dtype=np.float64)
        self.ys = np.asarray(self.ys, dtype=np.float64)
        if not (len(self.times) == len(self.xs) == len(self.ys)) or len(self.times) == 0:
            raise ValueError("times, xs and ys must have equal, non-zero length")
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("timestamps must be strictly increasing")
        if not (np.isfinite(self.xs).all() and np.isfinite(self.ys).all()):
            raise ValueError("positions must be finite")
        for arr in (self.times, self.xs, self.ys):
            arr.flags.writeable = False

    def step(self):
        return float(self.times[1] - self.times[0]) if len(self.times) > 1 else None


@dataclass(frozen=True)
class GenerationConfig:
    """Scenario generation defaults; every field is a declared choice and
    overridable from the CLI."""

    n_aircraft: int = 3
    n_sensors: int = 4
    dt: float = 0.01
    horizon: float = 1.0
    sensor_radius: float = 0.3
    speed_min: float = 0.42
    speed_max: float = 0.48
    min_speed_gap: float = 0.005
    sigma2: float = 0.1
    period: float = 1.0
    start_box: float = 0.3

    def __post_init__(self):
        if not 2 <= self.n_aircraft <= 8:
            raise ValueError("n_aircraft must be between 2 and 8 (subset counting is exponential)")
        if self.n_sensors < 1:
            raise ValueError("need at least one sensor")
        if self.dt <= 0 or self.horizon <= 0:
            raise ValueError("dt and horizon must be positive")
        steps = round(self.horizon / self.dt)
        if steps < 1 or abs(steps * self.dt - self.horizon) > _COORD_TOL:
            raise ValueError("horizon must be a positive multiple of dt")
        if not 0.0 < self.sensor_radius < 0.5:
            raise ValueError("sensor_radius must lie in (0, 0.5)")
        if not 0.0 < self.speed_min < self.speed_max:
            raise ValueError("need 0 < speed_min < speed_max")
        if self.min_speed_gap < 0:
            raise ValueError("min_speed_gap must be non-negative")
        if (self.n_aircraft - 1) * self.min_speed_gap >= self.speed_max - self.speed_min:
            raise ValueError("min_speed_gap is infeasible for the speed range")
        if self.sigma2 < 0 or self.period <= 0:
            raise ValueError("sigma2 must be non-negative and period positive")
        if not 0.0 <= self.start_box <= 1.0:
            raise ValueError("start_box must lie in [0, 1]")


@dataclass
class Case:
    """One simulated scenario, including everything the decisions consume."""

    id: int
    seed: int
    params: GenerationConfig
    aircraft: list[AircraftConfig]
    sensors: list[SensorConfig]
    truth: tuple[int, ...]
    readings: dict[int, dict[int, list[tuple[float, float]]]]
    trajectories: list[Trajectory] | None = None


def simulate_trajectory(cfg, dt, horizon, rng):
    """Simulate one aircraft: draw per-step component speeds, accumulate.

    At step time ``t`` both axis speeds are drawn from
    ``Normal(base_speed, sigma2 * |sin(2*pi*t)| / period)`` (so the first
    draw is exactly ``base_speed``), negatives are clamped to zero, and the
    axis components are the draws scaled by the unit heading.  Positions
    start at ``cfg.start`` and are not clamped to the map.  Draw order is
    the x-axis array, then the y-axis array.
    """
    steps = round(horizon / dt)
    if steps < 1 or abs(steps * dt - horizon) > _COORD_TOL:
        raise ValueError("horizon must be a positive multiple of dt")
    step_times = np.arange(steps) * dt
    std = np.sqrt(cfg.sigma2 * np.abs(np.sin(2.0 * np.pi * step_times)) / cfg.period)
    vxr = np.clip(rng.normal(cfg.base_speed, std), 0.0, None)
    vyr = np.clip(rng.normal(cfg.base_speed, std), 0.0, None)
    vx = cfg.direction[0] * vxr
    vy = cfg.direction[1] * vyr
    times = np.arange(steps + 1) * dt
    xs = cfg.start[0] + np.concatenate([[0.0], np.cumsum(vx * dt)])
    ys = cfg.start[1] + np.concatenate([[0.0], np.cumsum(vy * dt)])
    return Trajectory(times, xs, ys)


def place_sensors(count, radius, rng, interval=0.01):
    """Uniform sensor centers with the whole disc inside the unit map."""
    if not 0.0 < radius < 0.5:
        raise ValueError("radius must lie in (0, 0.5)")
    sensors = []
    for _ in range(count):
        x = rng.uniform(radius, 1.0 - radius)
        y = rng.uniform(radius, 1.0 - radius)
        sensors.append(SensorConfig((x, y), radius, interval))
    return sensors


def sense(traj, sensor):
    """Per-interval speeds for the stretches of trajectory inside the disc.

    An interval counts only when both endpoint positions are inside the
    sensor's circle (boundary inclusive); its speed is the Euclidean
    displacement divided by the interval, stamped with the interval's
    start time.  Returns an empty list when the aircraft never qualifies.
    """
    step = traj.step()
    if step is None:
        return []
    if abs(step - sensor.interval) > _COORD_TOL:
        raise ValueError("trajectory sampling step differs from the sensor interval")
    dx = traj.xs - sensor.center[0]
    dy = traj.ys - sensor.center[1]
    inside = dx * dx + dy * dy <= sensor.radius * sensor.radius
    both = inside[:-1] & inside[1:]
    if not both.any():
        return []
    speeds = np.hypot(np.diff(traj.xs), np.diff(traj.ys)) / sensor.interval
    return [
        (float(t), float(v)) for t, v in zip(traj.times[:-1][both], speeds[both])
    ]


def case_seed(global_seed, index):
    """Per-case seed: first 8 bytes of SHA-256 over ``"<seed>:<index>"``."""
    digest = hashlib.sha256(f"{global_seed}:{index}".encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


def generate_case(params, seed, case_id=0, include_trajectories=True):
    """Generate one scenario, fully determined by ``(params, seed)``.

    Draw order: per aircraft its start point and heading angle (uniform on
    the first-quadrant arc), then the base speeds as one batch (redrawn
    until every pairwise gap reaches ``min_speed_gap``), then the sensor
    centers, then per-aircraft trajectory noise.  Ground truth is the
    aircraft indices sorted by base speed ascending.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    starts = []
    directions = []
    for _ in range(params.n_aircraft):
        x = rng.uniform(0.0, params.start_box)
        y = rng.uniform(0.0, params.start_box)
        theta = rng.uniform(0.0, math.pi / 2.0)
        starts.append((x, y))
        directions.append((math.cos(theta), math.sin(theta)))
    while True:
        speeds = rng.uniform(params.speed_min, params.speed_max, params.n_aircraft)
        if params.n_aircraft < 2 or np.diff(np.sort(speeds)).min() >= params.min_speed_gap:
            break
    sensors = place_sensors(
        params.n_sensors, params.sensor_radius, rng, interval=params.dt
    )
    aircraft = [
        AircraftConfig(starts[i], directions[i], float(speeds[i]), params.sigma2, params.period)
        for i in range(params.n_aircraft)
    ]
    trajectories = [
        simulate_trajectory(cfg, params.dt, params.horizon, rng) for cfg in aircraft
    ]
    readings = {}
    for j, sensor in enumerate(sensors):
        per_sensor = {}
        for i, traj in enumerate(trajectories):
            obs = sense(traj, sensor)
            if obs:
                per_sensor[i] = obs
        readings[j] = per_sensor
    truth = tuple(sorted(range(params.n_aircraft), key=lambda i: aircraft[i].base_speed))
    return Case(
        id=case_id,
        seed=seed,
        params=params,
        aircraft=aircraft,
        sensors=sensors,
        truth=truth,
        readings=readings,
        trajectories=trajectories if include_trajectories else None,
    )


def case_to_json(case, full=False):
    doc = {
        "id": case.id,
        "seed": case.seed,
        "params": asdict(case.params),
        "aircraft": [
            {
                "start": list(a.start),
                "direction": list(a.direction),
                "base_speed": a.base_speed,
                "sigma2": a.sigma2,
                "period": a.period,
            }
            for a in case.aircraft
        ],
        "sensors": [
            {"center": list(s.center), "radius": s.radius, "interval": s.interval}
            for s in case.sensors
        ],
        "truth": list(case.truth),
        "readings": {
            str(j): {str(i): [[t, v] for t, v in obs] for i, obs in per_sensor.items()}
            for j, per_sensor in case.readings.items()
        },
    }
    if full and case.trajectories is not None:
        doc["trajectories"] = [
            {"times": t.times.tolist(), "xs": t.xs.tolist(), "ys": t.ys.tolist()}
            for t in case.trajectories
        ]
    return doc


def case_from_json(doc):
    trajectories = None
    if "trajectories" in doc:
        trajectories = [
            Trajectory(t["times"], t["xs"], t["ys"]) for t in doc["trajectories"]
        ]
    return Case(
        id=doc["id"],
        seed=doc["seed"],
        params=GenerationConfig(**doc["params"]),
        aircraft=[
            AircraftConfig(
                tuple(a["start"]), tuple(a["direction"]), a["base_speed"],
                a["sigma2"], a["period"],
            )
            for a in doc["aircraft"]
        ],
        sensors=[
            SensorConfig(tuple(s["center"]), s["radius"], s["interval"])
            for s in doc["sensors"]
        ],
        truth=tuple(doc["truth"]),
        readings={
            int(j): {int(i): [(t, v) for t, v in obs] for i, obs in per_sensor.items()}
            for j, per_sensor in doc["readings"].items()
        },
        trajectories=trajectories,
    )


def save_case(case, path, full=False):
    Path(path).write_text(
        json.dumps(case_to_json(case, full=full), sort_keys=True) + "\n",
        encoding="utf-8",
    )


def load_case(path):
    return case_from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def case_filename(case_id):
    return f"case_{case_id:05d}.json"


def write_corpus(out_dir, params, global_seed, count, full=False):
    """Generate ``count`` cases seeded from ``global_seed`` and write one
    JSON file per case; returns the file paths in case order."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for idx in range(count):
        case = generate_case(
            params, case_seed(global_seed, idx), case_id=idx,
            include_trajectories=full,
        )
        path = out_dir / case_filename(idx)
        save_case(case, path, full=full)
        paths.append(path)
    return paths

"""Constellation geometry: propagation, frames, look angles, handover.

Orbits are circular two-body tracks around a spherical Earth.  The
inertial frame (ECI) and the rotating Earth-fixed frame (ECEF) share
the z axis; the frames coincide at t = 0 (sidereal angle zero at the
epoch, which is simply the start of the simulated flight).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .constants import EARTH_RADIUS, EARTH_ROTATION_RATE, MU_EARTH, SPEED_OF_LIGHT
from .scenarios import ConstellationSpec, FlightRoute, ScenarioSpec


# === two-body basics ===

def mean_motion(semi_major_axis_km: float) -> float:
    """Angular rate of a circular orbit, rad/s."""
    if semi_major_axis_km <= 0:
        raise ValueError("semi_major_axis_km must be > 0")
    return math.sqrt(MU_EARTH / semi_major_axis_km ** 3)


def orbital_period(semi_major_axis_km: float) -> float:
    """Period of a circular orbit, seconds."""
    return 2.0 * math.pi / mean_motion(semi_major_axis_km)


def circular_speed(semi_major_axis_km: float) -> float:
    """Inertial speed on a circular orbit, km/s."""
    if semi_major_axis_km <= 0:
        raise ValueError("semi_major_axis_km must be > 0")
    return math.sqrt(MU_EARTH / semi_major_axis_km)


@dataclass(frozen=True)
class KeplerianElements:
    """Circular-orbit elements: size, orientation and along-track phase."""

    semi_major_axis_km: float
    inclination_deg: float
    raan_deg: float
    arg_latitude_deg: float   # angle from the ascending node at the epoch


def propagate(elements: KeplerianElements, t: float) -> tuple[np.ndarray, np.ndarray]:
    """ECI position (km) and velocity (km/s) of one satellite at time t."""
    a = elements.semi_major_axis_km
    n = mean_motion(a)
    u = math.radians(elements.arg_latitude_deg) + n * t
    inc = math.radians(elements.inclination_deg)
    raan = math.radians(elements.raan_deg)
    # orbit-plane basis: p toward the ascending node, q 90 deg ahead
    p = np.array([math.cos(raan), math.sin(raan), 0.0])
    q = np.array([-math.sin(raan) * math.cos(inc),
                  math.cos(raan) * math.cos(inc),
                  math.sin(inc)])
    position = a * (math.cos(u) * p + math.sin(u) * q)
    velocity = a * n * (-math.sin(u) * p + math.cos(u) * q)
    return position, velocity


def eci_to_ecef(
    position: np.ndarray,
    velocity: np.ndarray,
    t: float,
    sidereal_angle0_rad: float = 0.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Rotate inertial state into the Earth-fixed frame at time t.

    The returned velocity is as seen by an Earth-fixed observer, i.e.
    it includes the frame-rotation (transport) term.  Works on single
    vectors or (..., 3) stacks.
    """
    theta = sidereal_angle0_rad + EARTH_ROTATION_RATE * t
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    position = np.asarray(position, dtype=float)
    velocity = np.asarray(velocity, dtype=float)
    x, y, z = position[..., 0], position[..., 1], position[..., 2]
    vx, vy, vz = velocity[..., 0], velocity[..., 1], velocity[..., 2]
    r_ecef = np.stack([x * cos_t + y * sin_t, -x * sin_t + y * cos_t, z], axis=-1)
    v_rot = np.stack([vx * cos_t + vy * sin_t, -vx * sin_t + vy * cos_t, vz], axis=-1)
    # transport term: subtract omega x r
    omega = EARTH_ROTATION_RATE
    v_ecef = v_rot - np.stack(
        [-omega * r_ecef[..., 1], omega * r_ecef[..., 0], np.zeros_like(z)], axis=-1)
    return r_ecef, v_ecef


def geodetic_to_ecef(lat_deg: float, lon_deg: float, alt_m: float) -> np.ndarray:
    """ECEF position (km) of a point on/above the spherical Earth."""
    lat, lon = math.radians(lat_deg), math.radians(lon_deg)
    r = EARTH_RADIUS + alt_m / 1000.0
    return r * np.array([math.cos(lat) * math.cos(lon),
                         math.cos(lat) * math.sin(lon),
                         math.sin(lat)])


# === topocentric view ===

@dataclass(frozen=True)
class SatView:
    """A satellite as seen from the aircraft at one instant."""

    elevation_deg: float
    azimuth_deg: float        # clockwise from north
    slant_range_km: float
    range_rate_kms: float     # positive receding


def _enu_matrix(lat_deg: float, lon_deg: float) -> np.ndarray:
    lat, lon = math.radians(lat_deg), math.radians(lon_deg)
    east = np.array([-math.sin(lon), math.cos(lon), 0.0])
    north = np.array([-math.sin(lat) * math.cos(lon),
                      -math.sin(lat) * math.sin(lon),
                      math.cos(lat)])
    up = np.array([math.cos(lat) * math.cos(lon),
                   math.cos(lat) * math.sin(lon),
                   math.sin(lat)])
    return np.stack([east, north, up])


def look_angles(
    observer_ecef: np.ndarray,
    observer_lat_deg: float,
    observer_lon_deg: float,
    sat_ecef: np.ndarray,
    sat_vel_ecef: np.ndarray,
    observer_vel_ecef: np.ndarray | None = None,
) -> SatView:
    """Topocentric elevation/azimuth/range/range-rate of one satellite.

    The range rate is the line-of-sight projection of the relative
    velocity; pass the observer's Earth-fixed velocity for a moving
    aircraft (defaults to a fixed observer).
    """
    rel = np.asarray(sat_ecef, dtype=float) - np.asarray(observer_ecef, dtype=float)
    dist = float(np.linalg.norm(rel))
    if dist == 0.0:
        raise ValueError("satellite and observer positions coincide")
    enu = _enu_matrix(observer_lat_deg, observer_lon_deg) @ rel
    elevation = math.degrees(math.asin(enu[2] / dist))
    azimuth = math.degrees(math.atan2(enu[0], enu[1])) % 360.0
    v_rel = np.asarray(sat_vel_ecef, dtype=float)
    if observer_vel_ecef is not None:
        v_rel = v_rel - np.asarray(observer_vel_ecef, dtype=float)
    range_rate = float(rel @ v_rel) / dist
    return SatView(elevation, azimuth, dist, range_rate)


def doppler_khz(range_rate_kms: float, carrier_ghz: float) -> float:
    """Doppler shift in kHz; approaching satellites shift positive."""
    if carrier_ghz <= 0:
        raise ValueError("carrier_ghz must be > 0")
    return -(range_rate_kms / SPEED_OF_LIGHT) * carrier_ghz * 1e6


# === constellation expansion ===

def expand_constellation(spec: ConstellationSpec) -> list[KeplerianElements]:
    """Element sets for every satellite, plane-major order.

    Satellites are evenly phased within each plane; the Walker phasing
    factor shifts consecutive planes by ``F * 360 / total`` degrees of
    along-track phase.
    """
    a = spec.orbit_radius_km
    out: list[KeplerianElements] = []
    per_plane = 360.0 / spec.sats_per_plane
    inter_plane = spec.phasing_factor * 360.0 / spec.total_sats
    for p in range(spec.planes):
        for k in range(spec.sats_per_plane):
            out.append(KeplerianElements(
                semi_major_axis_km=a,
                inclination_deg=spec.inclinations_deg[p],
                raan_deg=spec.raans_deg[p] % 360.0,
                arg_latitude_deg=(spec.anomaly_offset_deg + k * per_plane
                                  + p * inter_plane) % 360.0,
            ))
    return out


# === handover ===

def select_serving(
    elevations_deg: np.ndarray,
    current: int | None,
    threshold_deg: float,
    hysteresis_deg: float = 0.5,
) -> int | None:
    """Choose the serving satellite for one time step.

    The current satellite is kept while it stays above the handover
    threshold.  When it drops below (or there is none), the link hands
    over to the visible satellite with maximum elevation; acquiring
    from an outage additionally requires clearing the threshold by the
    hysteresis margin so a satellite hovering at the mask edge does not
    toggle access on and off.  Returns None during an outage.
    """
    if current is not None and elevations_deg[current] >= threshold_deg:
        return current
    best = int(np.argmax(elevations_deg))
    needed = threshold_deg + (hysteresis_deg if current is None else 0.0)
    if elevations_deg[best] >= needed:
        return best
    return None


# === access timeline ===

@dataclass(frozen=True)
class AccessSample:
    """Serving-satellite geometry at one time step (sat_id -1 = outage)."""

    time_s: float
    sat_id: int
    elevation_deg: float
    azimuth_deg: float
    slant_range_km: float
    range_rate_kms: float
    doppler_khz: float


@dataclass
class AccessTimeline:
    """Column-oriented access history for one flight."""

    times_s: np.ndarray
    sat_id: np.ndarray           # int, -1 during outages
    elevation_deg: np.ndarray
    azimuth_deg: np.ndarray
    slant_range_km: np.ndarray
    range_rate_kms: np.ndarray
    doppler_khz: np.ndarray
    threshold_deg: float
    carrier_ghz: float

    def __len__(self) -> int:
        return len(self.times_s)

    @property
    def served(self) -> np.ndarray:
        return self.sat_id >= 0

    def access_percent(self) -> float:
        if len(self.times_s) == 0:
            return 0.0
        return 100.0 * float(np.count_nonzero(self.served)) / len(self.times_s)

    def handover_count(self) -> int:
        ids = self.sat_id[self.served]
        if len(ids) == 0:
            return 0
        return int(np.count_nonzero(ids[1:] != ids[:-1]))

    def samples(self) -> Iterator[AccessSample]:
        for i in range(len(self.times_s)):
            yield AccessSample(
                float(self.times_s[i]), int(self.sat_id[i]),
                float(self.elevation_deg[i]), float(self.azimuth_deg[i]),
                float(self.slant_range_km[i]), float(self.range_rate_kms[i]),
                float(self.doppler_khz[i]),
            )


def _route_state(route: FlightRoute, t: float) -> tuple[np.ndarray, float, float, np.ndarray]:
    """Aircraft ECEF position, geodetic lat/lon and ECEF velocity at t."""
    lat, lon, alt = route.position(t)
    pos = geodetic_to_ecef(lat, lon, alt)
    eps = 0.05
    before = geodetic_to_ecef(*route.position(max(t - eps, 0.0)))
    after = geodetic_to_ecef(*route.position(min(t + eps, route.duration_s)))
    dt = min(t + eps, route.duration_s) - max(t - eps, 0.0)
    vel = (after - before) / dt if dt > 0 else np.zeros(3)
    return pos, lat, lon, vel


def build_access_timeline(scenario: ScenarioSpec, step_s: float = 1.0) -> AccessTimeline:
    """Propagate the constellation over the flight and pick the server.

    One sample per ``step_s`` over the scenario duration (end
    exclusive); a zero-duration flight yields an empty timeline.
    """
    if step_s <= 0:
        raise ValueError("step_s must be > 0")
    n_steps = int(math.floor(scenario.duration_s / step_s + 1e-9))
    carrier = scenario.phy.carrier_ghz

    elements = expand_constellation(scenario.constellation)
    a = scenario.constellation.orbit_radius_km
    n_rate = mean_motion(a)
    inc = np.radians([e.inclination_deg for e in elements])
    raan = np.radians([e.raan_deg for e in elements])
    u0 = np.radians([e.arg_latitude_deg for e in elements])
    # orbit-plane bases for all satellites at once
    p_vec = np.stack([np.cos(raan), np.sin(raan), np.zeros_like(raan)], axis=1)
    q_vec = np.stack([-np.sin(raan) * np.cos(inc),
                      np.cos(raan) * np.cos(inc),
                      np.sin(inc)], axis=1)

    times = np.arange(n_steps, dtype=float) * step_s
    cols = {name: np.zeros(n_steps) for name in
            ("elevation", "azimuth", "slant_range", "range_rate", "doppler")}
    sat_id = np.full(n_steps, -1, dtype=int)

    current: int | None = None
    for i, t in enumerate(times):
        u = u0 + n_rate * t
        r_eci = a * (np.cos(u)[:, None] * p_vec + np.sin(u)[:, None] * q_vec)
        v_eci = a * n_rate * (-np.sin(u)[:, None] * p_vec + np.cos(u)[:, None] * q_vec)
        r_ecef, v_ecef = eci_to_ecef(r_eci, v_eci, t)

        obs_pos, obs_lat, obs_lon, obs_vel = _route_state(scenario.route, t)
        rel = r_ecef - obs_pos
        dist = np.linalg.norm(rel, axis=1)
        enu = _enu_matrix(obs_lat, obs_lon)
        elevation = np.degrees(np.arcsin(np.clip(rel @ enu[2] / dist, -1.0, 1.0)))

        current = select_serving(elevation, current,
                                 scenario.handover_threshold_deg,
                                 scenario.handover_hysteresis_deg)
        if current is None:
            cols["elevation"][i] = np.nan
            cols["azimuth"][i] = np.nan
            cols["slant_range"][i] = np.nan
            cols["range_rate"][i] = np.nan
            cols["doppler"][i] = np.nan
            continue
        sat_id[i] = current
        view = look_angles(obs_pos, obs_lat, obs_lon,
                           r_ecef[current], v_ecef[current], obs_vel)
        cols["elevation"][i] = view.elevation_deg
        cols["azimuth"][i] = view.azimuth_deg
        cols["slant_range"][i] = view.slant_range_km
        cols["range_rate"][i] = view.range_rate_kms
        cols["doppler"][i] = doppler_khz(view.range_rate_kms, carrier)

    return AccessTimeline(
        times_s=times,
        sat_id=sat_id,
        elevation_deg=cols["elevation"],
        azimuth_deg=cols["azimuth"],
        slant_range_km=cols["slant_range"],
        range_rate_kms=cols["range_rate"],
        doppler_khz=cols["doppler"],
        threshold_deg=scenario.handover_threshold_deg,
        carrier_ghz=carrier,
    )

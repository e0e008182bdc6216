"""Rotor-blade blockage model for antennas mounted under the rotor disk.

A blade sweeping over the antenna interrupts the satellite link for a
short arc of every rotation.  The model reduces the rotor to a timing
pattern: each of the ``n_blades`` blades blocks the link for a fixed
interval once per rotation, and the link is clear in between.  The arc
blocked by one blade depends on where the antenna boresight crosses the
rotor disk, which in turn depends on the satellite elevation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class RotorSpec:
    """Physical description of a main rotor above a fixed antenna."""

    n_blades: int
    blade_width_m: float      # blade chord where the boresight crosses
    rpm: float                # rotor speed, rev/min
    shaft_offset_m: float     # horizontal antenna-to-shaft distance
    rotor_height_m: float     # vertical antenna-to-rotor-plane distance
    tip_radius_m: float       # blade tip radius; beyond it nothing blocks

    def __post_init__(self) -> None:
        if self.n_blades < 1:
            raise ValueError("n_blades must be >= 1")
        if self.blade_width_m <= 0:
            raise ValueError("blade_width_m must be > 0")
        if self.rpm <= 0:
            raise ValueError("rpm must be > 0")
        if self.rotor_height_m <= 0:
            raise ValueError("rotor_height_m must be > 0")
        if self.tip_radius_m <= 0:
            raise ValueError("tip_radius_m must be > 0")
        if self.shaft_offset_m < 0:
            raise ValueError("shaft_offset_m must be >= 0")

    @property
    def rate_deg_per_ms(self) -> float:
        """Rotation rate in degrees per millisecond (0.006 * rpm)."""
        return 0.006 * self.rpm

    @property
    def rotation_ms(self) -> float:
        """Time for one full rotation in milliseconds."""
        return 360.0 / self.rate_deg_per_ms


@dataclass(frozen=True)
class BladeGeometry:
    """Where the antenna boresight crosses the rotor disk."""

    radius_m: float   # distance of the crossing point from the shaft
    arc_deg: float    # rotor arc blocked by one blade at that radius


@dataclass(frozen=True)
class BladeSchedule:
    """Periodic blockage timing produced by one rotor at one elevation.

    Every ``rotation_ms / n_blades`` milliseconds a blade blocks the
    link for ``blocked_ms``; the remaining ``clear_ms`` of each blade
    period is usable.
    """

    n_blades: int
    rate_deg_per_ms: float
    blocked_ms: float       # per-blade blockage duration
    clear_ms: float         # per-gap clear duration
    rotation_ms: float      # full rotation
    total_clear_ms: float   # clear time per rotation

    @property
    def period_ms(self) -> float:
        """Blade-to-blade period (blocked + clear)."""
        return self.rotation_ms / self.n_blades

    @property
    def duty_cycle(self) -> float:
        """Fraction of time the link is blocked."""
        return self.n_blades * self.blocked_ms / self.rotation_ms


def interference_point(rotor: RotorSpec, elevation_deg: float) -> float | None:
    """Distance from the rotor shaft to the boresight/disk crossing.

    The antenna sits ``rotor_height_m`` below the rotor plane and
    ``shaft_offset_m`` from the shaft axis.  Looking up at elevation
    ``elevation_deg`` the boresight pierces the rotor plane at a
    horizontal distance ``rotor_height / tan(el)`` from the antenna,
    which may fall on either side of the shaft.

    Returns ``None`` when the crossing lies beyond the blade tip, i.e.
    the blades never cut the boresight at this elevation.
    """
    if not 0.0 < elevation_deg <= 90.0:
        raise ValueError("elevation_deg must be in (0, 90]")
    reach = rotor.rotor_height_m / math.tan(math.radians(elevation_deg))
    radius = abs(rotor.shaft_offset_m - reach)
    if radius > rotor.tip_radius_m:
        return None
    return radius


def blockage_arc(blade_width_m: float, radius_m: float) -> float:
    """Rotor arc (degrees) hidden by a blade of the given chord.

    The blade is treated as a rectangle of width ``blade_width_m``
    crossing the boresight at ``radius_m`` from the shaft; the blocked
    arc is the chord width expressed as an angle at that radius, capped
    at a full circle.
    """
    if radius_m <= 0:
        return 360.0
    arc = 360.0 * blade_width_m / (2.0 * math.pi * radius_m)
    return min(arc, 360.0)


def blade_geometry(rotor: RotorSpec, elevation_deg: float) -> BladeGeometry | None:
    """Crossing geometry for a rotor at one elevation; None when clear."""
    radius = interference_point(rotor, elevation_deg)
    if radius is None:
        return None
    return BladeGeometry(radius_m=radius, arc_deg=blockage_arc(rotor.blade_width_m, radius))


def build_schedule(rotor: RotorSpec, geometry: BladeGeometry) -> BladeSchedule:
    """Turn a crossing geometry into a periodic blockage schedule.

    Raises ``ValueError`` if the blocked arcs of the individual blades
    overlap (``n_blades * arc > 360``), which would leave no clear time.
    Use :func:`schedule_for_elevation` for the clamped variant.
    """
    rate = rotor.rate_deg_per_ms
    blocked = geometry.arc_deg / rate
    rotation = rotor.rotation_ms
    total_clear = rotation - rotor.n_blades * blocked
    if total_clear < 0:
        raise ValueError("blade arcs overlap: n_blades * blocked exceeds one rotation")
    return BladeSchedule(
        n_blades=rotor.n_blades,
        rate_deg_per_ms=rate,
        blocked_ms=blocked,
        clear_ms=total_clear / rotor.n_blades,
        rotation_ms=rotation,
        total_clear_ms=total_clear,
    )


def schedule_for_elevation(rotor: RotorSpec, elevation_deg: float) -> BladeSchedule:
    """Blockage schedule at one elevation, degenerate cases included.

    When the boresight misses the blades entirely the schedule has zero
    blocked time; when the blade arcs overlap it is clamped to fully
    blocked (zero clear time).
    """
    geometry = blade_geometry(rotor, elevation_deg)
    if geometry is None:
        geometry = BladeGeometry(radius_m=math.inf, arc_deg=0.0)
    arc = min(geometry.arc_deg, 360.0 / rotor.n_blades)
    return build_schedule(rotor, BladeGeometry(geometry.radius_m, arc))


def blocked_intervals(
    schedule: BladeSchedule,
    span_ms: float,
    phase_ms: float = 0.0,
) -> list[tuple[float, float]]:
    """Blocked [start, stop) intervals covering ``[0, span_ms)``.

    ``phase_ms`` is the time already elapsed in the blade period at
    t = 0, so a rotor that has been spinning since an earlier origin can
    be windowed consistently.  Intervals are clipped to the span and an
    interference-free schedule yields an empty list.
    """
    if schedule.blocked_ms <= 0.0 or span_ms <= 0.0:
        return []
    period = schedule.period_ms
    # first blade arrival at or before the window start
    k = math.floor((-phase_ms - schedule.blocked_ms) / period)
    out: list[tuple[float, float]] = []
    while True:
        start = k * period - phase_ms
        stop = start + schedule.blocked_ms
        k += 1
        if stop <= 0.0:
            continue
        if start >= span_ms:
            break
        out.append((max(start, 0.0), min(stop, span_ms)))
    return out


def speed_ratios(
    rotor_a: RotorSpec,
    rotor_b: RotorSpec,
    geometry: BladeGeometry,
) -> tuple[float, float]:
    """(blocked-time ratio, rotation-time ratio) of two rotors.

    Both rotors are evaluated against the same crossing geometry so the
    ratios isolate the effect of rotor speed: a rotor spinning k times
    faster blocks for 1/k the time and completes rotations in 1/k the
    time.
    """
    sched_a = build_schedule(rotor_a, geometry)
    sched_b = build_schedule(rotor_b, geometry)
    return (
        sched_a.blocked_ms / sched_b.blocked_ms,
        sched_a.rotation_ms / sched_b.rotation_ms,
    )


def schedule_timeline(
    rotor: RotorSpec,
    elevations_deg: list[float],
    regen_fraction: float = 0.05,
) -> list[BladeSchedule]:
    """Per-sample schedules, regenerated only on meaningful change.

    Recomputing the schedule at every elevation sample is wasteful and
    makes downstream erasure patterns jitter; the schedule is rebuilt
    only when the blocked time moves by more than ``regen_fraction``
    relative to the schedule in force (always at the first sample and
    whenever blockage appears or disappears).
    """
    out: list[BladeSchedule] = []
    current: BladeSchedule | None = None
    for el in elevations_deg:
        candidate = schedule_for_elevation(rotor, el)
        if current is None:
            current = candidate
        else:
            have, want = current.blocked_ms, candidate.blocked_ms
            if have == 0.0 or want == 0.0:
                if have != want:
                    current = candidate
            elif abs(want - have) / have > regen_fraction:
                current = candidate
        out.append(current)
    return out

"""Factory-hall geometry and access-point deployment layouts.

Coordinates are meters in a frame with the origin at one floor corner,
x and y along the two walls and z pointing up. APs sit at height
``h_ap``, the served device at ``h_mtd``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "DeploymentKind",
    "Point3",
    "HallGeometry",
    "DeploymentLayout",
    "make_centralized",
    "make_grid",
    "make_radio_stripe",
    "typical_position",
    "worst_case_position",
    "distance_3d",
    "ap_distances",
]


class DeploymentKind(str, Enum):
    """Antenna deployment schemes: one central array, a ceiling grid of APs,
    or a single stripe of APs running around the walls."""

    CENTRALIZED = "centralized"
    GRID = "grid"
    RADIO_STRIPE = "stripe"


@dataclass(frozen=True)
class Point3:
    x: float
    y: float
    z: float

    def __post_init__(self):
        for v in (self.x, self.y, self.z):
            if not math.isfinite(v):
                raise ValueError("Point3 coordinates must be finite")


@dataclass(frozen=True)
class HallGeometry:
    """Rectangular hall footprint with AP mounting and device heights."""

    d_x: float
    d_y: float
    h_ap: float
    h_mtd: float

    def __post_init__(self):
        if not (self.d_x > 0 and self.d_y > 0):
            raise ValueError("hall sides must be positive")
        if not (self.h_ap > self.h_mtd >= 0):
            raise ValueError("need h_ap > h_mtd >= 0")

    def contains(self, x: float, y: float, tol: float = 1e-9) -> bool:
        """True if (x, y) lies inside or on the boundary of the footprint."""
        return -tol <= x <= self.d_x + tol and -tol <= y <= self.d_y + tol


@dataclass(frozen=True)
class DeploymentLayout:
    """Ordered AP positions with per-AP antenna counts for one scheme.

    The total antenna budget M is split evenly over Q APs by the factory
    functions below; the layout itself only requires positive counts.
    """

    kind: DeploymentKind
    aps: tuple[tuple[Point3, int], ...]

    def __post_init__(self):
        if not self.aps:
            raise ValueError("layout needs at least one AP")
        if any(s < 1 for _, s in self.aps):
            raise ValueError("every AP needs at least one antenna")
        if self.kind is DeploymentKind.CENTRALIZED and len(self.aps) != 1:
            raise ValueError("centralized layout must have exactly one AP")

    @property
    def num_aps(self) -> int:
        return len(self.aps)

    @property
    def total_antennas(self) -> int:
        return sum(s for _, s in self.aps)

    def positions(self) -> np.ndarray:
        """(Q, 3) array of AP coordinates in AP order."""
        return np.array([[p.x, p.y, p.z] for p, _ in self.aps], dtype=float)

    def antennas_per_ap(self) -> np.ndarray:
        return np.array([s for _, s in self.aps], dtype=np.int64)

    def rows(self) -> list[tuple[float, float, float, int]]:
        """Serialization helper: list of (x, y, z, antennas) rows."""
        return [(p.x, p.y, p.z, s) for p, s in self.aps]


def _check_on_ceiling(hall: HallGeometry, points: list[Point3]) -> None:
    for p in points:
        if not hall.contains(p.x, p.y):
            raise ValueError(f"AP at ({p.x}, {p.y}) is outside the hall footprint")


def make_centralized(hall: HallGeometry, m_antennas: int) -> DeploymentLayout:
    """Single AP with all ``m_antennas`` elements at the hall center."""
    if m_antennas < 1:
        raise ValueError("need at least one antenna")
    center = Point3(hall.d_x / 2, hall.d_y / 2, hall.h_ap)
    return DeploymentLayout(DeploymentKind.CENTRALIZED, ((center, int(m_antennas)),))


def make_grid(hall: HallGeometry, q_aps: int, s_per_ap: int) -> DeploymentLayout:
    """Ceiling grid of sqrt(Q) x sqrt(Q) APs, each with S antennas.

    APs are placed at the centers of a uniform partition of the footprint
    (offset half a cell spacing from the walls), ordered row-major with x
    varying fastest.
    """
    if q_aps < 1 or s_per_ap < 1:
        raise ValueError("q_aps and s_per_ap must be positive")
    side = math.isqrt(q_aps)
    if side * side != q_aps:
        raise ValueError(f"grid deployment needs a perfect-square AP count, got {q_aps}")
    dx, dy = hall.d_x / side, hall.d_y / side
    aps = tuple(
        (Point3((i + 0.5) * dx, (j + 0.5) * dy, hall.h_ap), int(s_per_ap))
        for j in range(side)
        for i in range(side)
    )
    _check_on_ceiling(hall, [p for p, _ in aps])
    return DeploymentLayout(DeploymentKind.GRID, aps)


def _perimeter_point(hall: HallGeometry, s: float) -> Point3:
    """Map an arc length s along the wall perimeter (counter-clockwise from
    the origin corner) to hall coordinates at AP height."""
    s = s % (2 * (hall.d_x + hall.d_y))
    if s < hall.d_x:
        x, y = s, 0.0
    elif s < hall.d_x + hall.d_y:
        x, y = hall.d_x, s - hall.d_x
    elif s < 2 * hall.d_x + hall.d_y:
        x, y = hall.d_x - (s - hall.d_x - hall.d_y), hall.d_y
    else:
        x, y = 0.0, hall.d_y - (s - 2 * hall.d_x - hall.d_y)
    return Point3(x, y, hall.h_ap)


def make_radio_stripe(hall: HallGeometry, q_aps: int, s_per_ap: int) -> DeploymentLayout:
    """Single stripe of Q APs spread uniformly around the hall walls.

    AP q sits at arc length (q - 0.5) * perimeter / Q, measured
    counter-clockwise from the (0, 0) corner; the half-spacing offset keeps
    APs away from the corners and puts Q = 4 at the wall midpoints.
    """
    if q_aps < 4:
        raise ValueError("a wall stripe needs at least 4 APs")
    if s_per_ap < 1:
        raise ValueError("s_per_ap must be positive")
    perimeter = 2 * (hall.d_x + hall.d_y)
    spacing = perimeter / q_aps
    aps = tuple(
        (_perimeter_point(hall, (q + 0.5) * spacing), int(s_per_ap))
        for q in range(q_aps)
    )
    return DeploymentLayout(DeploymentKind.RADIO_STRIPE, aps)


def typical_position(hall: HallGeometry, frac_x: float = 0.55, frac_y: float = 0.75) -> Point3:
    """Reference device position at fractional footprint coordinates.

    The defaults place the device at (0.55 d_x, 0.75 d_y), off-center but
    away from walls and corners.
    """
    return Point3(frac_x * hall.d_x, frac_y * hall.d_y, hall.h_mtd)


def worst_case_position(kind: DeploymentKind, hall: HallGeometry) -> Point3:
    """Device position minimizing the expected channel gain for a scheme.

    For centralized and grid deployments every hall corner is equivalent by
    symmetry and (0, 0) is returned canonically; for a wall stripe the
    farthest point from the walls is the hall center.
    """
    if kind is DeploymentKind.RADIO_STRIPE:
        return Point3(hall.d_x / 2, hall.d_y / 2, hall.h_mtd)
    return Point3(0.0, 0.0, hall.h_mtd)


def distance_3d(a: Point3, b: Point3) -> float:
    """Euclidean distance between two points, meters."""
    return math.sqrt((a.x - b.x) ** 2 + (a.y - b.y) ** 2 + (a.z - b.z) ** 2)


def ap_distances(layout: DeploymentLayout, mtd: Point3) -> np.ndarray:
    """(Q,) distances from the device to every AP, in AP order."""
    delta = layout.positions() - np.array([mtd.x, mtd.y, mtd.z])
    return np.sqrt(np.sum(delta * delta, axis=1))

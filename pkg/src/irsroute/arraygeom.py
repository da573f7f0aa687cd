"""Node geometry, array steering vectors, half-space and blockage tests.

Positions are plain ``numpy`` arrays of shape ``(3,)`` in meters. Directions
enter the steering vectors only through directional cosines against the array
axes, so no azimuth/elevation convention is needed past config parsing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

Vec3 = np.ndarray


def vec3(values: Sequence[float]) -> Vec3:
    v = np.asarray(values, dtype=float).reshape(3)
    if not np.all(np.isfinite(v)):
        raise ValueError(f"non-finite coordinates: {values!r}")
    return v


def unit(v: Sequence[float]) -> Vec3:
    v = vec3(v)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise ValueError("zero-length direction")
    return v / n


@dataclass(frozen=True, eq=False)
class BsPose:
    """Uniform linear array at the base station (node 0)."""

    position: Vec3
    axis: Vec3
    n_b: int = 16
    element_spacing_wavelengths: float = 0.5

    def __post_init__(self):
        if self.n_b < 1:
            raise ValueError("n_b must be >= 1")


@dataclass(frozen=True, eq=False)
class IrsPose:
    """Square uniform planar array of ``m0 x m0`` passive elements.

    ``normal`` points into the reflection half-space. The two in-plane axes
    span the surface; element ``(v, h)`` sits at
    ``position + spacing * (v * vertical_axis + h * horizontal_axis)``.
    """

    position: Vec3
    normal: Vec3
    horizontal_axis: Vec3
    vertical_axis: Vec3
    m0: int = 16
    element_spacing_wavelengths: float = 0.25

    def __post_init__(self):
        if self.m0 < 1:
            raise ValueError("m0 must be >= 1")
        frame = np.vstack([self.normal, self.horizontal_axis, self.vertical_axis])
        if not np.allclose(frame @ frame.T, np.eye(3), atol=1e-9):
            raise ValueError("normal, horizontal_axis and vertical_axis must be orthonormal")

    @classmethod
    def facing(cls, position, normal, m0: int = 16, element_spacing_wavelengths: float = 0.25,
               up=(0.0, 0.0, 1.0)) -> "IrsPose":
        """Build a pose from its normal; the horizontal axis is kept level (``up x normal``)."""
        n = unit(normal)
        h = np.cross(vec3(up), n)
        if np.linalg.norm(h) < 1e-9:
            # ceiling/floor mounted: fall back to the x axis as reference
            h = np.cross(np.array([1.0, 0.0, 0.0]), n)
        h = h / np.linalg.norm(h)
        v = np.cross(n, h)
        return cls(vec3(position), n, h, v, m0, element_spacing_wavelengths)

    @property
    def n_elements(self) -> int:
        return self.m0 * self.m0

    def with_m0(self, m0: int) -> "IrsPose":
        return IrsPose(self.position, self.normal, self.horizontal_axis, self.vertical_axis,
                       m0, self.element_spacing_wavelengths)


@dataclass(frozen=True, eq=False)
class UserPose:
    """Single-antenna receiver; its array response is the scalar 1."""

    position: Vec3


@dataclass(frozen=True, eq=False)
class Obstacle:
    """Axis-aligned box; only its open interior blocks line of sight."""

    min_corner: Vec3
    max_corner: Vec3

    def __post_init__(self):
        if np.any(self.min_corner > self.max_corner):
            raise ValueError("obstacle min_corner must be <= max_corner componentwise")


Node = Union[BsPose, IrsPose, UserPose]


def ula_response(n: int, spacing_wavelengths: float, directional_cosine: float) -> np.ndarray:
    """Steering vector ``exp(j 2 pi s k c)`` for ``k = 0..n-1``."""
    k = np.arange(n)
    return np.exp(2j * np.pi * spacing_wavelengths * k * directional_cosine)


def upa_response(pose: IrsPose, direction: Vec3) -> np.ndarray:
    """Planar-array response toward ``direction`` (unit vector).

    Element ordering is vertical-major: index ``v * m0 + h``, i.e.
    ``kron(vertical ULA, horizontal ULA)``.
    """
    s = pose.element_spacing_wavelengths
    a_v = ula_response(pose.m0, s, float(np.dot(direction, pose.vertical_axis)))
    a_h = ula_response(pose.m0, s, float(np.dot(direction, pose.horizontal_axis)))
    return np.kron(a_v, a_h)


def response_toward(node: Node, point: Vec3) -> np.ndarray:
    """Array response of ``node`` for the direction from it to ``point``."""
    if isinstance(node, UserPose):
        return np.ones(1, dtype=complex)
    d = unit(point - node.position)
    if isinstance(node, BsPose):
        return ula_response(node.n_b, node.element_spacing_wavelengths, float(np.dot(d, node.axis)))
    return upa_response(node, d)


def n_antennas(node: Node) -> int:
    if isinstance(node, UserPose):
        return 1
    if isinstance(node, BsPose):
        return node.n_b
    return node.n_elements


def half_space_contains(pose: IrsPose, point: Vec3) -> bool:
    # strict: points on the surface plane are grazing and excluded
    return float(np.dot(pose.normal, point - pose.position)) > 0.0


def _segment_hits_box(a: Vec3, b: Vec3, box: Obstacle) -> bool:
    d = b - a
    t_lo, t_hi = 0.0, 1.0
    for axis in range(3):
        lo, hi = box.min_corner[axis], box.max_corner[axis]
        if d[axis] == 0.0:
            if not lo < a[axis] < hi:
                return False
            continue
        t0 = (lo - a[axis]) / d[axis]
        t1 = (hi - a[axis]) / d[axis]
        if t0 > t1:
            t0, t1 = t1, t0
        t_lo = max(t_lo, t0)
        t_hi = min(t_hi, t1)
        if t_lo >= t_hi:
            return False
    return t_lo < t_hi


def los_blocked(a: Vec3, b: Vec3, obstacles: Sequence[Obstacle]) -> bool:
    """True iff the open segment ``(a, b)`` passes through any box interior."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    # fixed endpoint order, so rounding on grazing segments cannot break symmetry
    if tuple(b) < tuple(a):
        a, b = b, a
    # near-zero direction components give +-inf slab parameters, which compare correctly
    with np.errstate(over="ignore"):
        return any(_segment_hits_box(a, b, box) for box in obstacles)

"""Rank-one LoS link synthesis and Rayleigh NLoS draws."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .arraygeom import BsPose, IrsPose, Node, UserPose, response_toward

SPEED_OF_LIGHT = 299_792_458.0

LinkKind = Literal["bs_to_irs", "irs_to_irs", "irs_to_user"]


def reference_gain(frequency: float) -> float:
    """Free-space power gain at 1 m, ``(lambda / 4 pi)^2``."""
    if not frequency > 0:
        raise ValueError(f"carrier frequency must be positive, got {frequency!r}")
    return (SPEED_OF_LIGHT / (4.0 * math.pi * frequency)) ** 2


@dataclass(frozen=True)
class CarrierSpec:
    frequency: float = 5e9

    def __post_init__(self):
        reference_gain(self.frequency)

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.frequency

    @property
    def beta(self) -> float:
        return reference_gain(self.frequency)


@dataclass(frozen=True, eq=False)
class LosChannel:
    """``matrix = amplitude * rx_response @ tx_response^H``."""

    kind: str
    rx_response: np.ndarray
    tx_response: np.ndarray
    amplitude: float
    distance: float

    @property
    def matrix(self) -> np.ndarray:
        return self.amplitude * np.outer(self.rx_response, self.tx_response.conj())


def _kind(tx: Node, rx: Node) -> LinkKind:
    if isinstance(tx, BsPose) and isinstance(rx, IrsPose):
        return "bs_to_irs"
    if isinstance(tx, IrsPose) and isinstance(rx, IrsPose):
        return "irs_to_irs"
    if isinstance(tx, IrsPose) and isinstance(rx, UserPose):
        return "irs_to_user"
    raise ValueError(f"unsupported link {type(tx).__name__} -> {type(rx).__name__}")


def los_link(tx: Node, rx: Node, carrier: CarrierSpec) -> LosChannel:
    d = float(np.linalg.norm(rx.position - tx.position))
    if d == 0.0:
        raise ValueError("coincident node positions")
    return LosChannel(
        kind=_kind(tx, rx),
        rx_response=response_toward(rx, tx.position),
        tx_response=response_toward(tx, rx.position),
        amplitude=math.sqrt(carrier.beta) / d,
        distance=d,
    )


def rayleigh_nlos(rows: int, cols: int, distance: float, rho: float, carrier: CarrierSpec,
                  seed) -> np.ndarray:
    """i.i.d. CN(0, beta * distance^-rho) entries.

    Uses numpy's PCG64 seeded through ``SeedSequence(seed)``; ``seed`` may be an
    int or a sequence of ints so callers can derive independent streams.
    """
    if not distance > 0:
        raise ValueError("distance must be positive")
    if rho < 2:
        raise ValueError("path-loss exponent rho must be >= 2")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    var = carrier.beta * distance ** (-rho)
    z = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    return z * math.sqrt(var / 2.0)

"""Scenario configuration: deployment, codebook sizes, and YAML ingestion.

A scenario file is YAML (JSON also parses). Node indices follow the routing
convention: 0 is the BS, ``1..J`` are the IRSs in file order, ``J+1`` is the
user. Angles (degrees) are accepted only here and are converted to unit
vectors immediately.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import warnings
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .arraygeom import BsPose, IrsPose, Node, Obstacle, UserPose, vec3
from .channel import CarrierSpec

UNIT_TOLERANCE = 1e-6


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ScenarioConfig:
    bs: BsPose
    irs: tuple
    user: UserPose
    carrier: CarrierSpec = field(default_factory=CarrierSpec)
    obstacles: Optional[tuple] = ()
    explicit_los_pairs: Optional[frozenset] = None
    bs_codebook_size: int = 16
    irs_codebook_size_per_dim: int = 64
    transmit_power_dbm: float = 30.0
    k_candidates: int = 4
    seed: int = 0
    name: str = ""

    def __post_init__(self):
        if (self.obstacles is None) == (self.explicit_los_pairs is None):
            raise ScenarioError("exactly one of obstacles / explicit_los_pairs must be provided")
        if self.k_candidates < 1:
            raise ScenarioError("k_candidates must be >= 1")

    @property
    def n_irs(self) -> int:
        return len(self.irs)

    @property
    def user_index(self) -> int:
        return self.n_irs + 1

    @property
    def nodes(self) -> list[Node]:
        return [self.bs, *self.irs, self.user]

    def node(self, i: int) -> Node:
        if i == 0:
            return self.bs
        if i == self.user_index:
            return self.user
        return self.irs[i - 1]

    def distance(self, i: int, j: int) -> float:
        return float(np.linalg.norm(self.node(i).position - self.node(j).position))

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    def with_m0(self, m0: int) -> "ScenarioConfig":
        return self.replace(irs=tuple(p.with_m0(m0) for p in self.irs))

    def fingerprint(self) -> str:
        """Stable hash of the physical deployment, used to pair solutions with scenarios."""
        blob = json.dumps(scenario_to_dict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


# ---------------------------------------------------------------- file schema

class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class _Angles(_Strict):
    azimuth_deg: float
    elevation_deg: float = 0.0

    def to_vector(self) -> list[float]:
        az, el = math.radians(self.azimuth_deg), math.radians(self.elevation_deg)
        return [math.cos(el) * math.cos(az), math.cos(el) * math.sin(az), math.sin(el)]


def _check_unit(v: list[float]) -> list[float]:
    n = math.sqrt(sum(x * x for x in v))
    if abs(n - 1.0) > UNIT_TOLERANCE:
        raise ValueError(f"direction must be unit-norm (norm={n:.6g})")
    if n != 1.0:
        warnings.warn(f"direction {v} normalized (norm={n:.12g})", stacklevel=2)
    return [x / n for x in v]


class _BsModel(_Strict):
    position: tuple[float, float, float]
    axis: Optional[tuple[float, float, float]] = None
    axis_angles: Optional[_Angles] = None
    n_b: int = Field(16, ge=1)
    element_spacing_wavelengths: float = Field(0.5, gt=0)

    @model_validator(mode="after")
    def _one_axis(self):
        if (self.axis is None) == (self.axis_angles is None):
            raise ValueError("give exactly one of axis / axis_angles")
        return self

    def direction(self) -> list[float]:
        return _check_unit(list(self.axis)) if self.axis is not None else self.axis_angles.to_vector()


class _IrsModel(_Strict):
    position: tuple[float, float, float]
    normal: Optional[tuple[float, float, float]] = None
    normal_angles: Optional[_Angles] = None
    m0: Optional[int] = Field(None, ge=1)
    element_spacing_wavelengths: Optional[float] = Field(None, gt=0)

    @model_validator(mode="after")
    def _one_normal(self):
        if (self.normal is None) == (self.normal_angles is None):
            raise ValueError("give exactly one of normal / normal_angles")
        return self

    def direction(self) -> list[float]:
        return _check_unit(list(self.normal)) if self.normal is not None else self.normal_angles.to_vector()


class _UserModel(_Strict):
    position: tuple[float, float, float]


class _BoxModel(_Strict):
    min: tuple[float, float, float]
    max: tuple[float, float, float]


class _ScenarioModel(_Strict):
    name: str = ""
    carrier_frequency_hz: float = Field(5e9, gt=0)
    transmit_power_dbm: float = 30.0
    k_candidates: int = Field(4, ge=1)
    seed: int = 0
    bs_codebook_size: int = Field(16, ge=1)
    irs_codebook_size_per_dim: int = Field(64, ge=1)
    irs_m0: int = Field(16, ge=1)
    irs_element_spacing_wavelengths: float = Field(0.25, gt=0)
    bs: _BsModel
    irs: list[_IrsModel] = []
    user: _UserModel
    obstacles: Optional[list[_BoxModel]] = None
    los_pairs: Optional[list[tuple[int, int]]] = None

    @model_validator(mode="after")
    def _one_los_source(self):
        if (self.obstacles is None) == (self.los_pairs is None):
            raise ValueError("give exactly one of obstacles / los_pairs")
        return self

    @field_validator("los_pairs")
    @classmethod
    def _no_self_pairs(cls, v):
        if v is not None and any(a == b for a, b in v):
            raise ValueError("los_pairs entries must join two distinct nodes")
        return v


def _format_errors(exc: ValidationError) -> str:
    lines = []
    for err in exc.errors():
        loc = ".".join(str(p) for p in err["loc"]) or "<root>"
        lines.append(f"{loc}: {err['msg']}")
    return "; ".join(lines)


def scenario_from_dict(data: dict) -> ScenarioConfig:
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            m = _ScenarioModel.model_validate(data)
            bs_axis = m.bs.direction()
            normals = [item.direction() for item in m.irs]
    except ValidationError as exc:
        raise ScenarioError(_format_errors(exc)) from None
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None
    for w in caught:
        warnings.warn(w.message, stacklevel=2)

    bs = BsPose(vec3(m.bs.position), vec3(bs_axis), m.bs.n_b, m.bs.element_spacing_wavelengths)
    irs = tuple(
        IrsPose.facing(
            item.position, normal,
            m0=item.m0 if item.m0 is not None else m.irs_m0,
            element_spacing_wavelengths=(item.element_spacing_wavelengths
                                         if item.element_spacing_wavelengths is not None
                                         else m.irs_element_spacing_wavelengths),
        )
        for item, normal in zip(m.irs, normals)
    )
    n_nodes = len(irs) + 2
    pairs = None
    if m.los_pairs is not None:
        for k, (a, b) in enumerate(m.los_pairs):
            if not (0 <= a < n_nodes and 0 <= b < n_nodes):
                raise ScenarioError(f"los_pairs.{k}: node index out of range 0..{n_nodes - 1}")
        pairs = frozenset(frozenset(p) for p in m.los_pairs)
    obstacles = None
    if m.obstacles is not None:
        try:
            obstacles = tuple(Obstacle(vec3(b.min), vec3(b.max)) for b in m.obstacles)
        except ValueError as exc:
            raise ScenarioError(f"obstacles: {exc}") from None
    return ScenarioConfig(
        bs=bs, irs=irs, user=UserPose(vec3(m.user.position)),
        carrier=CarrierSpec(m.carrier_frequency_hz),
        obstacles=obstacles, explicit_los_pairs=pairs,
        bs_codebook_size=m.bs_codebook_size,
        irs_codebook_size_per_dim=m.irs_codebook_size_per_dim,
        transmit_power_dbm=m.transmit_power_dbm,
        k_candidates=m.k_candidates, seed=m.seed, name=m.name,
    )


def parse_scenario(path) -> ScenarioConfig:
    """Load and validate a scenario file, or a bundled scene by name."""
    p = Path(path)
    if not p.exists():
        if str(path) in bundled_scenarios():
            return load_bundled(str(path))
        raise ScenarioError(f"scenario file not found: {path}")
    try:
        data = yaml.safe_load(p.read_text())
    except yaml.YAMLError as exc:
        raise ScenarioError(f"{p}: not valid YAML/JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ScenarioError(f"{p}: top level must be a mapping")
    return scenario_from_dict(data)


def _rounded(v) -> list[float]:
    return [round(float(x), 12) for x in v]


def scenario_to_dict(sc: ScenarioConfig) -> dict:
    out = {
        "name": sc.name,
        "carrier_frequency_hz": sc.carrier.frequency,
        "transmit_power_dbm": sc.transmit_power_dbm,
        "k_candidates": sc.k_candidates,
        "seed": sc.seed,
        "bs_codebook_size": sc.bs_codebook_size,
        "irs_codebook_size_per_dim": sc.irs_codebook_size_per_dim,
        "bs": {"position": _rounded(sc.bs.position), "axis": _rounded(sc.bs.axis),
               "n_b": sc.bs.n_b, "element_spacing_wavelengths": sc.bs.element_spacing_wavelengths},
        "irs": [{"position": _rounded(p.position), "normal": _rounded(p.normal), "m0": p.m0,
                 "element_spacing_wavelengths": p.element_spacing_wavelengths} for p in sc.irs],
        "user": {"position": _rounded(sc.user.position)},
    }
    if sc.obstacles is not None:
        out["obstacles"] = [{"min": _rounded(b.min_corner), "max": _rounded(b.max_corner)}
                            for b in sc.obstacles]
    else:
        out["los_pairs"] = sorted(sorted(p) for p in sc.explicit_los_pairs)
    return out


def bundled_scenarios() -> list[str]:
    root = resources.files("irsroute") / "scenes"
    return sorted(f.name[:-5] for f in root.iterdir() if f.name.endswith(".yaml"))


def load_bundled(name: str) -> ScenarioConfig:
    text = (resources.files("irsroute") / "scenes" / f"{name}.yaml").read_text()
    return scenario_from_dict(yaml.safe_load(text))

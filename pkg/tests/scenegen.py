"""Random small deployments for property tests."""

from __future__ import annotations

import numpy as np

from irsroute.arraygeom import BsPose, IrsPose, Obstacle, UserPose, unit
from irsroute.channel import CarrierSpec
from irsroute.scenario import ScenarioConfig


def random_scene(seed, max_irs: int = 7, m0: int = 4, n_b: int = 8, irs_codebook: int = 8,
                 n_obstacles: int | None = None) -> ScenarioConfig:
    """BS at one end of a 20 m x 12 m room, user at the other, IRSs in between.

    Each IRS faces a random point near the BS-user axis so that a useful
    share of hops pass the half-space test; 0-2 boxes add blockage.
    """
    rng = np.random.default_rng(seed)
    bs_pos = np.array([0.0, 6.0, 2.5])
    user_pos = np.array([20.0, rng.uniform(3, 9), 1.2])
    j = int(rng.integers(1, max_irs + 1))
    irs = []
    for _ in range(j):
        pos = np.array([rng.uniform(2, 18), rng.uniform(0.5, 11.5), rng.uniform(1.0, 3.5)])
        target = bs_pos + rng.uniform(0, 1) * (user_pos - bs_pos) + rng.normal(0, 2, 3)
        normal = unit(target - pos)
        irs.append(IrsPose.facing(pos, normal, m0=m0))
    # file order must not matter, but keep it deterministic
    if n_obstacles is None:
        n_obstacles = int(rng.integers(0, 3))
    obstacles = []
    for _ in range(n_obstacles):
        lo = np.array([rng.uniform(3, 15), rng.uniform(1, 9), 0.0])
        size = np.array([rng.uniform(0.5, 3), rng.uniform(0.5, 3), rng.uniform(1, 3)])
        obstacles.append(Obstacle(lo, lo + size))
    return ScenarioConfig(
        bs=BsPose(bs_pos, np.array([0.0, 1.0, 0.0]), n_b=n_b),
        irs=tuple(irs),
        user=UserPose(user_pos),
        carrier=CarrierSpec(5e9),
        obstacles=tuple(obstacles),
        bs_codebook_size=n_b,
        irs_codebook_size_per_dim=irs_codebook,
        seed=int(np.asarray(seed).ravel()[0]) if np.ndim(seed) else int(seed),
        name=f"random-{seed}",
    )

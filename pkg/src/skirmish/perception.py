"""Field of view, bush concealment, and observation encoding."""
from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .arrays import (
    SimArrays,
    ZONE_BUSH,
    _ZONE_IDS,
    alloc_sim,
    zone_membership,
)
from .core import FieldConfig, UnitState, Zone

# visible[i, j]: unit i currently sees unit j; rows are observers.
VisibilityMatrix = np.ndarray

# Health normalizer for the max-health observation feature.
H_REF = 1000.0

OWN_DIM = 15
PER_OTHER_DIM = 17
PER_ZONE_DIM = 8


@dataclass(frozen=True)
class ObservationLayout:
    """Shapes of per-agent observations and the centralized global state."""

    max_units: int
    max_zones: int
    own_dim: int = OWN_DIM
    per_other_dim: int = PER_OTHER_DIM
    per_zone_dim: int = PER_ZONE_DIM

    @property
    def obs_dim(self) -> int:
        return (
            self.own_dim
            + (self.max_units - 1) * self.per_other_dim
            + self.max_zones * self.per_zone_dim
        )

    @property
    def global_dim(self) -> int:
        return self.max_units * self.own_dim + self.max_zones * self.per_zone_dim


def fov_kernel(
    pos: np.ndarray,
    heading: np.ndarray,
    sight_cos_half: np.ndarray,
    sight_range: np.ndarray,
) -> np.ndarray:
    """seen[b, i, j]: j's center inside i's view wedge (range and angle)."""
    d = pos[:, None, :, :] - pos[:, :, None, :]
    dist = np.sqrt(d[..., 0] ** 2 + d[..., 1] ** 2)
    along = d[..., 0] * np.cos(heading)[:, :, None] + d[..., 1] * np.sin(heading)[
        :, :, None
    ]
    with np.errstate(invalid="ignore", divide="ignore"):
        cos_dev = np.where(dist > 0.0, along / dist, 1.0)
    return (dist <= sight_range[:, :, None]) & (cos_dev >= sight_cos_half[:, :, None])


def bush_kernel(s: SimArrays) -> tuple[np.ndarray, np.ndarray]:
    """(in_bush [B,N], same_bush [B,N,N]) from zone membership."""
    inside = zone_membership(s)  # [B,N,Z]
    is_bush = s.z_type == ZONE_BUSH
    in_bush_z = inside & is_bush[:, None, :]
    in_bush = in_bush_z.any(axis=2)
    same_bush = (in_bush_z[:, :, None, :] & in_bush_z[:, None, :, :]).any(axis=3)
    return in_bush, same_bush


def visibility_kernel(s: SimArrays) -> np.ndarray:
    """Who sees whom: view wedge minus bush concealment.

    Concealment is asymmetric and only hides units from the opposing team;
    sharing a bush with the observer, or a running reveal timer, defeats it.
    Active units always see themselves.
    """
    seen = fov_kernel(s.pos, s.heading, s.u_sight_cos_half, s.u_sight_range)
    in_bush, same_bush = bush_kernel(s)
    enemy = s.u_team[:, :, None] != s.u_team[:, None, :]
    concealed = (
        in_bush[:, None, :]
        & enemy
        & ~same_bush
        & (s.reveal[:, None, :] <= 0.0)
    )
    both = s.u_active[:, :, None] & s.u_active[:, None, :]
    return seen & ~concealed & both


@lru_cache(maxsize=None)
def _others_index(n: int) -> np.ndarray:
    """[N, N-1] column indices skipping the diagonal, ascending per row."""
    idx = np.empty((n, max(n - 1, 0)), dtype=np.int64)
    for i in range(n):
        idx[i] = [j for j in range(n) if j != i]
    return idx


def _own_features(s: SimArrays) -> np.ndarray:
    """[B,N,OWN_DIM] feature block shared by observations and global state."""
    with np.errstate(divide="ignore", invalid="ignore"):
        cd_ratio = np.where(s.u_cooldown > 0.0, s.cooldown / s.u_cooldown, 0.0)
    feats = np.stack(
        [
            s.health / s.u_max_health,
            s.u_max_health / H_REF,
            s.pos[..., 0] / s.field_w[:, None],
            s.pos[..., 1] / s.field_h[:, None],
            np.cos(s.heading),
            np.sin(s.heading),
            s.u_range,
            s.u_damage,
            s.cooldown,
            cd_ratio,
            s.u_radius,
            s.u_mass,
            s.u_sight_angle,
            s.alive.astype(np.float64),
            s.u_speed,
        ],
        axis=-1,
    )
    return np.where(s.u_active[..., None], feats, 0.0)


def _zone_features(s: SimArrays, rel_to: np.ndarray | None) -> np.ndarray:
    """Zone blocks [B,*,Z,PER_ZONE_DIM]; centers relative to rel_to if given."""
    B, Z = s.batch, s.n_zones
    used = s.z_type != 0
    one_hot = np.stack(
        [s.z_type == t for t in (1, 2, 3)], axis=-1
    ).astype(np.float64)
    scale = np.stack([s.field_w, s.field_h], axis=-1)[:, None, :]  # [B,1,2]
    if rel_to is None:
        center = s.z_center / scale
        blocks = np.concatenate(
            [one_hot, center, s.z_axes, s.z_effect[..., None]], axis=-1
        )
        return np.where(used[..., None], blocks, 0.0)
    # Per-observer relative centers: [B,N,Z,2]
    rel = (s.z_center[:, None, :, :] - rel_to[:, :, None, :]) / scale[:, None, :, :]
    n = rel_to.shape[1]
    one_hot_n = np.broadcast_to(one_hot[:, None], (B, n, Z, 3))
    axes_n = np.broadcast_to(s.z_axes[:, None], (B, n, Z, 2))
    eff_n = np.broadcast_to(s.z_effect[:, None, :, None], (B, n, Z, 1))
    blocks = np.concatenate([one_hot_n, rel, axes_n, eff_n], axis=-1)
    return np.where(used[:, None, :, None], blocks, 0.0)


def observation_kernel(
    s: SimArrays, vis: np.ndarray, atk: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Per-agent observations [B,N,obs_dim] and global state [B,global_dim].

    Observations hide units outside the observer's visibility; the global
    state sees everything.  Padding slots and rows are zeroed.
    """
    B, N, Z = s.batch, s.n_units, s.n_zones
    own = _own_features(s)

    scale = np.stack([s.field_w, s.field_h], axis=-1)[:, None, None, :]
    rel = (s.pos[:, None, :, :] - s.pos[:, :, None, :]) / scale
    per_pair = np.concatenate(
        [
            np.broadcast_to(own[:, None], (B, N, N, OWN_DIM)).copy(),
            s.u_team[:, None, :, None].astype(np.float64) * np.ones((B, N, N, 1)),
            atk[..., None].astype(np.float64),
        ],
        axis=-1,
    )
    per_pair[..., 2:4] = rel
    show = vis & s.u_active[:, None, :]
    per_pair = np.where(show[..., None], per_pair, 0.0)
    if N > 1:
        oi = _others_index(N)
        others = per_pair[:, np.arange(N)[:, None], oi]  # [B,N,N-1,17]
        others_flat = others.reshape(B, N, (N - 1) * PER_OTHER_DIM)
    else:
        others_flat = np.zeros((B, N, 0))

    zones = _zone_features(s, s.pos).reshape(B, N, Z * PER_ZONE_DIM)
    obs = np.concatenate([own, others_flat, zones], axis=-1)
    obs = np.where(s.u_active[..., None], obs, 0.0)

    glob = np.concatenate(
        [
            own.reshape(B, N * OWN_DIM),
            _zone_features(s, None).reshape(B, Z * PER_ZONE_DIM),
        ],
        axis=-1,
    )
    return obs, glob


def pack_shell(
    units: list[UnitState],
    zones: list[Zone],
    field: FieldConfig,
    layout: ObservationLayout | None = None,
) -> SimArrays:
    """Pack explicit unit and zone lists into a single-env SimArrays."""
    n = layout.max_units if layout else len(units)
    z = layout.max_zones if layout else len(zones)
    s = alloc_sim(1, max(n, 1), z)
    s.field_w[0] = field.width
    s.field_h[0] = field.height
    for i, u in enumerate(units):
        s.u_active[0, i] = u.active
        s.u_team[0, i] = u.team
        s.u_max_health[0, i] = u.spec.max_health
        s.u_radius[0, i] = u.spec.body_radius
        s.u_mass[0, i] = u.spec.body_mass
        s.u_speed[0, i] = u.spec.speed
        s.u_damage[0, i] = u.spec.attack_damage
        s.u_range[0, i] = u.spec.attack_range
        s.u_cooldown[0, i] = u.spec.attack_cooldown
        s.u_sight_angle[0, i] = u.spec.sight_angle
        s.u_sight_cos_half[0, i] = np.cos(u.spec.sight_angle / 2.0)
        s.u_sight_range[0, i] = u.spec.sight_range
        s.pos[0, i] = u.position
        s.heading[0, i] = u.heading
        s.health[0, i] = u.health
        s.cooldown[0, i] = u.cooldown_timer
        s.reveal[0, i] = u.reveal_timer
        s.alive[0, i] = u.alive
    pad = ~s.u_active[0]
    s.u_max_health[0, pad] = 1.0
    s.u_sight_cos_half[0, pad] = 1.0
    for k, zn in enumerate(zones):
        s.z_type[0, k] = _ZONE_IDS[zn.type]
        s.z_center[0, k] = zn.center
        s.z_axes[0, k] = zn.semi_axes
        s.z_effect[0, k] = zn.effect
    return s


def in_fov(observer: UnitState, point: np.ndarray) -> bool:
    """Is a world point inside the observer's view wedge?"""
    d = np.asarray(point, dtype=np.float64) - observer.position
    dist = float(np.hypot(d[0], d[1]))
    if dist > observer.spec.sight_range:
        return False
    if dist == 0.0:
        return True
    fwd = np.array([np.cos(observer.heading), np.sin(observer.heading)])
    return float(d @ fwd) / dist >= np.cos(observer.spec.sight_angle / 2.0)


def visibility_matrix(
    units: list[UnitState], zones: list[Zone], field: FieldConfig | None = None
) -> VisibilityMatrix:
    """[N,N] bool visibility among the given units."""
    field = field or FieldConfig()
    s = pack_shell(units, zones, field)
    return visibility_kernel(s)[0]


def update_reveal_timers(units: list[UnitState], dt: float) -> list[UnitState]:
    """Tick every reveal timer down toward zero."""
    return [replace(u, reveal_timer=max(u.reveal_timer - dt, 0.0)) for u in units]


def build_observation(
    units: list[UnitState],
    zones: list[Zone],
    field: FieldConfig,
    index: int,
    visible: np.ndarray,
    attackable: np.ndarray,
    layout: ObservationLayout,
) -> np.ndarray:
    """Observation vector of unit `index` under the given layout."""
    s = pack_shell(units, zones, field, layout)
    n = s.n_units
    vis = np.zeros((1, n, n), dtype=bool)
    atk = np.zeros((1, n, n), dtype=bool)
    m = len(units)
    vis[0, :m, :m] = visible
    atk[0, :m, :m] = attackable
    obs, _ = observation_kernel(s, vis, atk)
    return obs[0, index]


def build_global_state(
    units: list[UnitState],
    zones: list[Zone],
    field: FieldConfig,
    layout: ObservationLayout,
) -> np.ndarray:
    """Centralized full-knowledge state vector under the given layout."""
    s = pack_shell(units, zones, field, layout)
    n = s.n_units
    empty = np.zeros((1, n, n), dtype=bool)
    _, glob = observation_kernel(s, empty, empty)
    return glob[0]

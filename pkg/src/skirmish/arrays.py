"""Structure-of-arrays simulation state, batched over environments.

Every kernel in the engine operates on [batch, max_units] arrays; a single
environment is just a batch of one.  Per-env results depend only on that
env's own columns, which is what makes batched and sequential execution
bit-identical.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .core import (
    CONTROLLERS,
    TEAM_ALLY,
    TEAM_ENEMY,
    ScenarioConfig,
    UnitState,
    ZONE_TYPES,
)

ZONE_NONE = 0
ZONE_LAVA = 1
ZONE_BUSH = 2
ZONE_SWAMP = 3
_ZONE_IDS = {name: i + 1 for i, name in enumerate(ZONE_TYPES)}

# Role thresholds for the scripted controller.
ASSASSIN_SPEED = 1.4
RANGER_RANGE = 10.0

REASON_NONE = 0
REASON_ELIMINATION = 1
REASON_TRUNCATION = 2
REASON_TRUNCATION_TIE = 3
REASON_NAMES = {
    REASON_ELIMINATION: "elimination",
    REASON_TRUNCATION: "truncation",
    REASON_TRUNCATION_TIE: "truncation_tie",
}


@dataclass
class SimArrays:
    """Batched simulation state; shapes use B = batch, N = max units,
    Z = max zones."""

    batch: int
    n_units: int
    n_zones: int
    seed: np.ndarray  # [B] uint64
    episode: np.ndarray  # [B] int64

    # Static per-unit columns resolved from the scenario.
    u_active: np.ndarray  # [B,N] bool, configured (non-padding) slots
    u_team: np.ndarray  # [B,N] int64
    u_max_health: np.ndarray  # [B,N]
    u_radius: np.ndarray
    u_mass: np.ndarray
    u_inv_mass: np.ndarray  # 0 for kinematic units
    u_speed: np.ndarray
    u_damage: np.ndarray
    u_range: np.ndarray
    u_cooldown: np.ndarray
    u_sight_angle: np.ndarray
    u_sight_cos_half: np.ndarray  # cos(sight_angle / 2), precomputed
    u_sight_range: np.ndarray
    u_kinematic: np.ndarray  # [B,N] bool
    role_assassin: np.ndarray  # [B,N] bool
    role_ranger: np.ndarray
    role_healer: np.ndarray

    t_controller: np.ndarray  # [B,2] int64, index into CONTROLLERS
    t_epsilon: np.ndarray  # [B,2]
    t_aggressive: np.ndarray  # [B,2]

    dt: np.ndarray  # [B]
    restitution: np.ndarray
    slop: np.ndarray
    correction: np.ndarray
    rot_step: np.ndarray  # radians
    boundary_coeff: np.ndarray
    reveal_duration: np.ndarray
    enable_noop: np.ndarray  # [B] bool
    max_steps: np.ndarray  # [B] int64
    field_w: np.ndarray
    field_h: np.ndarray

    z_type: np.ndarray  # [B,Z] int64, 0 = unused slot
    z_center: np.ndarray  # [B,Z,2]
    z_axes: np.ndarray  # [B,Z,2]
    z_effect: np.ndarray  # [B,Z]

    # Dynamic state.
    t: np.ndarray  # [B] int64
    pos: np.ndarray  # [B,N,2]
    heading: np.ndarray  # [B,N]
    vel: np.ndarray  # [B,N,2], realized velocity of the last step
    imp_dv: np.ndarray  # [B,N,2], impulse carry into the next integration
    health: np.ndarray  # [B,N]
    cooldown: np.ndarray  # [B,N]
    reveal: np.ndarray  # [B,N]
    alive: np.ndarray  # [B,N] bool
    prev_gap: np.ndarray  # [B]
    ep_return: np.ndarray  # [B]
    done: np.ndarray  # [B] bool
    terminated: np.ndarray  # [B] bool
    truncated: np.ndarray  # [B] bool
    winner: np.ndarray  # [B] int64, -1 while running
    reason: np.ndarray  # [B] int64
    first_kill: np.ndarray  # [B] int64, team credited with the first kill
    mem_pos: np.ndarray  # [B,N,2] scripted-controller target memory
    mem_valid: np.ndarray  # [B,N] bool
    vis: np.ndarray  # [B,N,N] bool, row = observer
    atk: np.ndarray  # [B,N,N] bool

    def copy(self) -> SimArrays:
        out = {}
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            out[f.name] = v.copy() if isinstance(v, np.ndarray) else v
        return SimArrays(**out)

    def slice_env(self, b: int) -> SimArrays:
        out = {}
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            out[f.name] = v[b : b + 1].copy() if isinstance(v, np.ndarray) else v
        out["batch"] = 1
        return SimArrays(**out)


def stack_sims(sims: list[SimArrays]) -> SimArrays:
    """Concatenate single-env states along the batch axis."""
    first = sims[0]
    for s in sims[1:]:
        if (s.n_units, s.n_zones) != (first.n_units, first.n_zones):
            raise ValueError(
                "batched environments must share max_units and max_zones; "
                f"got ({s.n_units}, {s.n_zones}) vs ({first.n_units}, {first.n_zones})"
            )
    out = {}
    for f in dataclasses.fields(first):
        v = getattr(first, f.name)
        if isinstance(v, np.ndarray):
            out[f.name] = np.concatenate([getattr(s, f.name) for s in sims], axis=0)
        else:
            out[f.name] = v
    out["batch"] = sum(s.batch for s in sims)
    return SimArrays(**out)


def alloc_sim(B: int, N: int, Z: int) -> SimArrays:
    """Zero-initialized batched state with the given capacities."""

    def zf(shape, dtype=np.float64):
        return np.zeros(shape, dtype=dtype)

    return SimArrays(
        batch=B,
        n_units=N,
        n_zones=Z,
        seed=zf(B, np.uint64),
        episode=zf(B, np.int64),
        u_active=zf((B, N), bool),
        u_team=zf((B, N), np.int64),
        u_max_health=zf((B, N)),
        u_radius=zf((B, N)),
        u_mass=zf((B, N)),
        u_inv_mass=zf((B, N)),
        u_speed=zf((B, N)),
        u_damage=zf((B, N)),
        u_range=zf((B, N)),
        u_cooldown=zf((B, N)),
        u_sight_angle=zf((B, N)),
        u_sight_cos_half=zf((B, N)),
        u_sight_range=zf((B, N)),
        u_kinematic=zf((B, N), bool),
        role_assassin=zf((B, N), bool),
        role_ranger=zf((B, N), bool),
        role_healer=zf((B, N), bool),
        t_controller=zf((B, 2), np.int64),
        t_epsilon=zf((B, 2)),
        t_aggressive=zf((B, 2)),
        dt=zf(B),
        restitution=zf(B),
        slop=zf(B),
        correction=zf(B),
        rot_step=zf(B),
        boundary_coeff=zf(B),
        reveal_duration=zf(B),
        enable_noop=zf(B, bool),
        max_steps=zf(B, np.int64),
        field_w=zf(B),
        field_h=zf(B),
        z_type=zf((B, Z), np.int64),
        z_center=zf((B, Z, 2)),
        z_axes=np.ones((B, Z, 2)),
        z_effect=zf((B, Z)),
        t=zf(B, np.int64),
        pos=zf((B, N, 2)),
        heading=zf((B, N)),
        vel=zf((B, N, 2)),
        imp_dv=zf((B, N, 2)),
        health=zf((B, N)),
        cooldown=zf((B, N)),
        reveal=zf((B, N)),
        alive=zf((B, N), bool),
        prev_gap=zf(B),
        ep_return=zf(B),
        done=zf(B, bool),
        terminated=zf(B, bool),
        truncated=zf(B, bool),
        winner=np.full(B, -1, np.int64),
        reason=zf(B, np.int64),
        first_kill=np.full(B, -1, np.int64),
        mem_pos=zf((B, N, 2)),
        mem_valid=zf((B, N), bool),
        vis=zf((B, N, N), bool),
        atk=zf((B, N, N), bool),
    )


def sim_from_configs(configs: list[ScenarioConfig], seeds: np.ndarray) -> SimArrays:
    """Build initial batched state; one config and seed per environment."""
    B = len(configs)
    N = configs[0].max_units
    Z = configs[0].max_zones
    for c in configs[1:]:
        if (c.max_units, c.max_zones) != (N, Z):
            raise ValueError(
                "batched environments must share max_units and max_zones; "
                f"got ({c.max_units}, {c.max_zones}) vs ({N}, {Z})"
            )
    s = alloc_sim(B, N, Z)
    s.seed = np.asarray(seeds, dtype=np.uint64).reshape(B).copy()
    for b, config in enumerate(configs):
        fill_env(s, b, config)
    return s


def fill_env(s: SimArrays, b: int, config: ScenarioConfig) -> None:
    """Write one config's static columns and spawn-time dynamic state."""
    s.u_active[b] = False
    s.alive[b] = False
    s.z_type[b] = ZONE_NONE
    for i, placement in enumerate(config.units):
        spec = placement.resolved_spec()
        s.u_active[b, i] = True
        s.u_team[b, i] = placement.team
        s.u_max_health[b, i] = spec.max_health
        s.u_radius[b, i] = spec.body_radius
        s.u_mass[b, i] = spec.body_mass
        s.u_inv_mass[b, i] = 0.0 if spec.kinematic else 1.0 / spec.body_mass
        s.u_speed[b, i] = spec.speed
        s.u_damage[b, i] = spec.attack_damage
        s.u_range[b, i] = spec.attack_range
        s.u_cooldown[b, i] = spec.attack_cooldown
        s.u_sight_angle[b, i] = spec.sight_angle
        s.u_sight_cos_half[b, i] = np.cos(spec.sight_angle / 2.0)
        s.u_sight_range[b, i] = spec.sight_range
        s.u_kinematic[b, i] = spec.kinematic
        s.role_assassin[b, i] = spec.speed >= ASSASSIN_SPEED
        s.role_ranger[b, i] = spec.attack_range >= RANGER_RANGE and spec.attack_damage > 0
        s.role_healer[b, i] = spec.attack_damage < 0
        s.pos[b, i] = placement.position
        s.heading[b, i] = np.radians(placement.heading_deg)
        s.health[b, i] = spec.max_health
        s.alive[b, i] = True
    # Padding columns get harmless spec values.
    pad = ~s.u_active[b]
    s.u_max_health[b, pad] = 1.0
    s.u_radius[b, pad] = 0.0
    s.u_mass[b, pad] = 1.0
    s.u_inv_mass[b, pad] = 1.0
    s.u_sight_cos_half[b, pad] = 1.0

    for t in config.teams:
        s.t_controller[b, t.id] = CONTROLLERS.index(t.controller)
        h = t.heuristic
        s.t_epsilon[b, t.id] = h.epsilon if h else 0.0
        s.t_aggressive[b, t.id] = h.aggressive_threshold if h else 0.0

    phys = config.physics
    s.dt[b] = phys.dt
    s.restitution[b] = phys.restitution
    s.slop[b] = phys.penetration_slop
    s.correction[b] = phys.correction_percent
    s.rot_step[b] = np.radians(phys.rotation_step_deg)
    s.boundary_coeff[b] = phys.boundary_damage_coeff
    s.reveal_duration[b] = phys.reveal_duration
    s.enable_noop[b] = phys.enable_noop
    s.max_steps[b] = config.max_steps
    s.field_w[b] = config.field.width
    s.field_h[b] = config.field.height

    for z, zone in enumerate(config.zones):
        s.z_type[b, z] = _ZONE_IDS[zone.type]
        s.z_center[b, z] = zone.center
        s.z_axes[b, z] = zone.semi_axes
        s.z_effect[b, z] = zone.effect

    s.t[b] = 0
    s.vel[b] = 0.0
    s.imp_dv[b] = 0.0
    s.cooldown[b] = 0.0
    s.reveal[b] = 0.0
    s.prev_gap[b] = 0.0
    s.ep_return[b] = 0.0
    s.done[b] = False
    s.terminated[b] = False
    s.truncated[b] = False
    s.winner[b] = -1
    s.reason[b] = REASON_NONE
    s.first_kill[b] = -1
    s.mem_pos[b] = 0.0
    s.mem_valid[b] = False
    s.vis[b] = False
    s.atk[b] = False


def heading_vectors(heading: np.ndarray) -> np.ndarray:
    """Unit forward vectors, shape heading.shape + (2,)."""
    return np.stack([np.cos(heading), np.sin(heading)], axis=-1)


def zone_membership(s: SimArrays) -> np.ndarray:
    """inside[b, i, z]: unit center within zone ellipse (unused slots False)."""
    rel = s.pos[:, :, None, :] - s.z_center[:, None, :, :]  # [B,N,Z,2]
    with np.errstate(divide="ignore", invalid="ignore"):
        q = rel / s.z_axes[:, None, :, :]
    inside = (q[..., 0] ** 2 + q[..., 1] ** 2) <= 1.0
    return inside & (s.z_type[:, None, :] != ZONE_NONE)


def effective_speed(s: SimArrays) -> np.ndarray:
    """Per-unit speed after swamp multipliers; overlapping swamps stack."""
    inside = zone_membership(s)
    swamp = (s.z_type == ZONE_SWAMP)[:, None, :]
    mult = np.where(inside & swamp, s.z_effect[:, None, :], 1.0).prod(axis=2)
    return s.u_speed * mult


def pairwise_distances(pos: np.ndarray) -> np.ndarray:
    """Euclidean distances between unit centers, [B,N,N]."""
    diff = pos[:, None, :, :] - pos[:, :, None, :]
    return np.sqrt(diff[..., 0] ** 2 + diff[..., 1] ** 2)


def unpack_units(s: SimArrays, b: int, config: ScenarioConfig) -> list[UnitState]:
    """Materialize per-unit dataclasses for environment b."""
    units = []
    for i in range(len(config.units)):
        units.append(
            UnitState(
                spec=config.units[i].resolved_spec(),
                team=int(s.u_team[b, i]),
                position=s.pos[b, i].copy(),
                heading=float(s.heading[b, i]),
                velocity=s.vel[b, i].copy(),
                health=float(s.health[b, i]),
                cooldown_timer=float(s.cooldown[b, i]),
                reveal_timer=float(s.reveal[b, i]),
                alive=bool(s.alive[b, i]),
                active=bool(s.u_active[b, i]),
            )
        )
    return units


def action_mask_kernel(
    alive: np.ndarray,
    active: np.ndarray,
    cooldown: np.ndarray,
    enable_noop: np.ndarray,
) -> np.ndarray:
    """Valid-action mask [B,N,7]: moves and rotate while alive, attack only
    off cooldown, noop for the dead, the inactive, and (optionally) everyone."""
    B, N = alive.shape
    mask = np.zeros((B, N, 7), dtype=bool)
    controllable = alive & active
    mask[:, :, 0:5] = controllable[..., None]
    mask[:, :, 5] = controllable & (cooldown <= 0.0)
    mask[:, :, 6] = (controllable & enable_noop[:, None]) | ~controllable
    return mask


def mean_health_ratio(s: SimArrays, team: int) -> np.ndarray:
    """Mean health / max_health over a team's initial roster; dead count 0."""
    members = s.u_active & (s.u_team == team)
    ratio = np.where(members, s.health / s.u_max_health, 0.0)
    count = members.sum(axis=1)
    return ratio.sum(axis=1) / np.maximum(count, 1)


def health_gap(s: SimArrays) -> np.ndarray:
    """Ally mean health ratio minus enemy mean health ratio, [B]."""
    return mean_health_ratio(s, TEAM_ALLY) - mean_health_ratio(s, TEAM_ENEMY)

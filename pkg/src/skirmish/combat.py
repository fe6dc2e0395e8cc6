"""Non-targeted combat: forward hurtboxes, target selection, damage."""
from __future__ import annotations

from dataclasses import replace

import numpy as np

from .core import ACTION_ATTACK, PhysicsParams, UnitState
from .arrays import pairwise_distances

# interactions[i, j] means unit i hit (or healed) unit j this step; at most
# one true entry per row.
InteractionMatrix = np.ndarray


def hurtbox_kernel(
    pos: np.ndarray,
    heading: np.ndarray,
    radius: np.ndarray,
    attack_range: np.ndarray,
    sight_cos_half: np.ndarray,
) -> np.ndarray:
    """hits[b, i, j]: j's body circle intersects i's forward strike box.

    The box extends attack_range forward from i's center with half-width
    equal to i's own body radius; additionally j's center must lie inside
    i's field-of-view wedge (the angular bound only; box length already
    caps the reach).  Diagonal entries are forced False.
    """
    d = pos[:, None, :, :] - pos[:, :, None, :]  # [B,N,N,2], j minus i
    cos_h = np.cos(heading)
    sin_h = np.sin(heading)
    fwd_x, fwd_y = cos_h[:, :, None], sin_h[:, :, None]
    lx = d[..., 0] * fwd_x + d[..., 1] * fwd_y
    ly = -d[..., 0] * fwd_y + d[..., 1] * fwd_x
    cx = np.clip(lx, 0.0, attack_range[:, :, None])
    half_w = radius[:, :, None]
    cy = np.clip(ly, -half_w, half_w)
    gap_sq = (lx - cx) ** 2 + (ly - cy) ** 2
    box_hit = gap_sq <= radius[:, None, :] ** 2

    dist = np.sqrt(d[..., 0] ** 2 + d[..., 1] ** 2)
    with np.errstate(invalid="ignore", divide="ignore"):
        cos_dev = np.where(dist > 0.0, lx / dist, 1.0)
    in_wedge = cos_dev >= sight_cos_half[:, :, None]

    hits = box_hit & in_wedge
    n = pos.shape[1]
    hits[:, np.arange(n), np.arange(n)] = False
    return hits


def attackable_kernel(
    hurt: np.ndarray,
    visible: np.ndarray,
    damage: np.ndarray,
    team: np.ndarray,
    alive: np.ndarray,
    active: np.ndarray,
) -> np.ndarray:
    """attackable[b, i, j]: i's swing right now would land on j.

    Positive damage only crosses teams, negative damage (healing) only
    stays within a team, zero damage never connects.  Both ends must be
    alive; corpses block movement but soak no hits.
    """
    same = team[:, :, None] == team[:, None, :]
    role_ok = np.where(
        damage[:, :, None] > 0.0, ~same, (damage[:, :, None] < 0.0) & same
    )
    ok_ends = (alive & active)[:, :, None] & (alive & active)[:, None, :]
    return hurt & visible & role_ok & ok_ends


def select_target_kernel(attackable: np.ndarray, dist: np.ndarray) -> np.ndarray:
    """Index of the nearest attackable unit per row, -1 when none.

    Distance ties resolve to the lowest index (argmin keeps the first).
    """
    masked = np.where(attackable, dist, np.inf)
    tgt = np.argmin(masked, axis=2)
    has = attackable.any(axis=2)
    return np.where(has, tgt, -1)


def combat_kernel(
    attackable: np.ndarray,
    dist: np.ndarray,
    actions: np.ndarray,
    alive: np.ndarray,
    active: np.ndarray,
    cooldown: np.ndarray,
    damage: np.ndarray,
    health: np.ndarray,
    max_health: np.ndarray,
    cooldown_spec: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Resolve all swings simultaneously from the pre-swing snapshot.

    Returns (new_health, new_cooldown, interactions).  A swing with no
    reachable target still spends the cooldown.
    """
    swinging = (actions == ACTION_ATTACK) & alive & active & (cooldown <= 0.0)
    tgt = select_target_kernel(attackable, dist)
    landed = swinging & (tgt >= 0)
    n = attackable.shape[2]
    interactions = landed[:, :, None] & (tgt[:, :, None] == np.arange(n))
    delta = (interactions * damage[:, :, None]).sum(axis=1)
    new_health = np.where(
        active & alive, np.clip(health - delta, 0.0, max_health), health
    )
    new_cooldown = np.where(swinging, cooldown_spec, cooldown)
    return new_health, new_cooldown, interactions


def hurtbox_hits(attacker: UnitState, target: UnitState) -> bool:
    """Pure geometry test; aliveness and visibility are judged elsewhere."""
    pos = np.stack([attacker.position, target.position])[None]
    heading = np.array([[attacker.heading, target.heading]])
    radius = np.array([[attacker.spec.body_radius, target.spec.body_radius]])
    rng = np.array([[attacker.spec.attack_range, target.spec.attack_range]])
    cos_half = np.cos(
        np.array([[attacker.spec.sight_angle, target.spec.sight_angle]]) / 2.0
    )
    return bool(hurtbox_kernel(pos, heading, radius, rng, cos_half)[0, 0, 1])


def _pack(units: list[UnitState]):
    n = len(units)
    out = {
        "pos": np.zeros((1, n, 2)),
        "heading": np.zeros((1, n)),
        "radius": np.zeros((1, n)),
        "range": np.zeros((1, n)),
        "cos_half": np.zeros((1, n)),
        "damage": np.zeros((1, n)),
        "team": np.zeros((1, n), dtype=np.int64),
        "alive": np.zeros((1, n), dtype=bool),
        "active": np.zeros((1, n), dtype=bool),
        "health": np.zeros((1, n)),
        "max_health": np.zeros((1, n)),
        "cooldown": np.zeros((1, n)),
        "cooldown_spec": np.zeros((1, n)),
    }
    for k, u in enumerate(units):
        out["pos"][0, k] = u.position
        out["heading"][0, k] = u.heading
        out["radius"][0, k] = u.spec.body_radius
        out["range"][0, k] = u.spec.attack_range
        out["cos_half"][0, k] = np.cos(u.spec.sight_angle / 2.0)
        out["damage"][0, k] = u.spec.attack_damage
        out["team"][0, k] = u.team
        out["alive"][0, k] = u.alive
        out["active"][0, k] = u.active
        out["health"][0, k] = u.health
        out["max_health"][0, k] = u.spec.max_health
        out["cooldown"][0, k] = u.cooldown_timer
        out["cooldown_spec"][0, k] = u.spec.attack_cooldown
    return out


def attackable_matrix(units: list[UnitState], visible: np.ndarray) -> np.ndarray:
    """[N,N] bool matrix of swings that would land, given visibility rows."""
    p = _pack(units)
    hurt = hurtbox_kernel(p["pos"], p["heading"], p["radius"], p["range"], p["cos_half"])
    return attackable_kernel(
        hurt, visible[None], p["damage"], p["team"], p["alive"], p["active"]
    )[0]


def select_target(
    units: list[UnitState], attackable: np.ndarray, i: int
) -> int | None:
    """Nearest attackable target of unit i, ties to the lowest index."""
    p = _pack(units)
    dist = pairwise_distances(p["pos"])
    tgt = select_target_kernel(attackable[None], dist)[0, i]
    return int(tgt) if tgt >= 0 else None


def resolve_combat(
    units: list[UnitState],
    actions: np.ndarray,
    attackable: np.ndarray,
    physics: PhysicsParams,
) -> tuple[list[UnitState], InteractionMatrix]:
    """Apply one round of swings; returns updated units and who-hit-whom."""
    p = _pack(units)
    dist = pairwise_distances(p["pos"])
    new_health, new_cooldown, interactions = combat_kernel(
        attackable[None],
        dist,
        np.asarray(actions)[None],
        p["alive"],
        p["active"],
        p["cooldown"],
        p["damage"],
        p["health"],
        p["max_health"],
        p["cooldown_spec"],
    )
    touched = interactions[0].any(axis=1) | interactions[0].any(axis=0)
    out = []
    for k, u in enumerate(units):
        reveal = physics.reveal_duration if touched[k] else u.reveal_timer
        out.append(
            replace(
                u,
                health=float(new_health[0, k]),
                cooldown_timer=float(new_cooldown[0, k]),
                reveal_timer=reveal,
                alive=u.alive and float(new_health[0, k]) > 0.0,
            )
        )
    return out, interactions[0]

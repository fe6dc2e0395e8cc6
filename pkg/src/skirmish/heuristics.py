"""Scripted opponent controller: role classification and priority cascade.

The cascade per alive unit, first match wins: attack the selected target;
rotate if one rotation step would line the target up; rangers back away
from enemies that get too close; walk to a role-specific position near the
target; chase the last remembered sighting; rangers duck into a bush;
otherwise rotate to scan.  An epsilon roll then replaces the choice with a
uniformly random valid action.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrays import (
    ASSASSIN_SPEED,
    RANGER_RANGE,
    SimArrays,
    ZONE_BUSH,
    action_mask_kernel,
    effective_speed,
    pairwise_distances,
    zone_membership,
)
from .combat import attackable_kernel, hurtbox_kernel
from .core import (
    ACTION_ATTACK,
    ACTION_NOOP,
    ACTION_ROTATE,
    FieldConfig,
    HeuristicParams,
    MOVE_DIRECTIONS,
    PhysicsParams,
    UnitSpec,
    UnitState,
    Zone,
)
from .perception import pack_shell, visibility_kernel

# Extra clearance beyond touching bodies when standing next to a target.
CONTACT_BUFFER = 0.5
# Fraction of attack range kept as standoff distance by non-assassins.
STANDOFF_FRACTION = 0.8


@dataclass(frozen=True)
class RoleFlags:
    assassin: bool
    ranger: bool
    healer: bool


@dataclass
class HeuristicMemory:
    """Last seen target position; cleared on arrival."""

    position: np.ndarray | None = None


def classify_roles(spec: UnitSpec) -> RoleFlags:
    """Derive behavior flags from the stat line alone."""
    return RoleFlags(
        assassin=spec.speed >= ASSASSIN_SPEED,
        ranger=spec.attack_range >= RANGER_RANGE and spec.attack_damage > 0,
        healer=spec.attack_damage < 0,
    )


def _masked_argmin(values: np.ndarray, mask: np.ndarray):
    filled = np.where(mask, values, np.inf)
    return np.argmin(filled, axis=2), mask.any(axis=2)


def _move_toward(pos, dest, step):
    cand = pos[:, :, None, :] + MOVE_DIRECTIONS[None, None] * step[:, :, None, None]
    dd = ((cand - dest[:, :, None, :]) ** 2).sum(axis=-1)
    return np.argmin(dd, axis=2)


def _move_away(pos, threat, step):
    cand = pos[:, :, None, :] + MOVE_DIRECTIONS[None, None] * step[:, :, None, None]
    dd = ((cand - threat[:, :, None, :]) ** 2).sum(axis=-1)
    return np.argmax(dd, axis=2)


def _aligned_after_rotate(s: SimArrays, tp: np.ndarray, tgt_radius: np.ndarray):
    """Would one rotation step put the chosen target inside the hurtbox?"""
    heading = s.heading + s.rot_step[:, None]
    d = tp - s.pos
    cos_h, sin_h = np.cos(heading), np.sin(heading)
    lx = d[..., 0] * cos_h + d[..., 1] * sin_h
    ly = -d[..., 0] * sin_h + d[..., 1] * cos_h
    cx = np.clip(lx, 0.0, s.u_range)
    cy = np.clip(ly, -s.u_radius, s.u_radius)
    box = (lx - cx) ** 2 + (ly - cy) ** 2 <= tgt_radius**2
    dist = np.sqrt(d[..., 0] ** 2 + d[..., 1] ** 2)
    with np.errstate(invalid="ignore", divide="ignore"):
        cos_dev = np.where(dist > 0.0, lx / dist, 1.0)
    return box & (cos_dev >= s.u_sight_cos_half)


def select_target_kernel(
    s: SimArrays, vis: np.ndarray, dist: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Role-based target choice for every unit.

    Healers pick the nearest injured ally (any visible ally as fallback);
    assassins pick the frailest visible enemy by max health, nearer one on
    ties; everyone else takes the nearest visible enemy.  Returns
    (tgt, has_tgt, nearest_enemy, has_enemy); indices are junk where the
    paired flag is False.
    """
    B, N = s.pos.shape[:2]
    alive_ok = s.alive & s.u_active
    eye = np.eye(N, dtype=bool)[None]
    cand = vis & alive_ok[:, None, :] & ~eye
    enemy = s.u_team[:, :, None] != s.u_team[:, None, :]

    ally_cand = cand & ~enemy
    injured = (s.health < s.u_max_health)[:, None, :]
    heal_primary = ally_cand & injured
    heal_set = np.where(heal_primary.any(axis=2)[..., None], heal_primary, ally_cand)
    tgt_heal, has_heal = _masked_argmin(dist, heal_set)

    enemy_cand = cand & enemy
    hmax = np.broadcast_to(s.u_max_health[:, None, :], (B, N, N))
    frailest = np.where(enemy_cand, hmax, np.inf).min(axis=2)
    frail_set = enemy_cand & (hmax == frailest[..., None])
    tgt_frail, has_frail = _masked_argmin(dist, frail_set)

    tgt_near, has_near = _masked_argmin(dist, enemy_cand)

    tgt = np.where(
        s.role_healer, tgt_heal, np.where(s.role_assassin, tgt_frail, tgt_near)
    )
    has_tgt = np.where(
        s.role_healer, has_heal, np.where(s.role_assassin, has_frail, has_near)
    )
    return tgt, has_tgt & alive_ok, tgt_near, has_near & alive_ok


def heuristic_kernel(
    s: SimArrays,
    vis: np.ndarray,
    atk: np.ndarray,
    dist: np.ndarray,
    mask: np.ndarray,
    u_explore: np.ndarray,
    u_pick: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Cascade decisions for every unit; [B,N] action ids.

    u_explore and u_pick are pre-drawn uniforms in [0, 1) so the caller
    owns the randomness.  Returns (actions, mem_pos, mem_valid) with the
    memory already advanced to after this decision.
    """
    B, N = s.pos.shape[:2]
    alive_ok = s.alive & s.u_active
    epsilon = np.take_along_axis(s.t_epsilon, s.u_team, axis=1)
    xi = np.take_along_axis(s.t_aggressive, s.u_team, axis=1)
    step = effective_speed(s) * s.dt[:, None]

    tgt, has_tgt, tgt_near, has_near = select_target_kernel(s, vis, dist)
    tp = np.take_along_axis(s.pos, tgt[..., None], axis=1)
    tgt_radius = np.take_along_axis(s.u_radius, tgt, axis=1)
    tgt_heading = np.take_along_axis(s.heading, tgt, axis=1)
    atk_tgt = np.take_along_axis(atk, tgt[:, :, None], axis=2)[..., 0]

    actions = np.full((B, N), ACTION_NOOP, dtype=np.int64)
    decided = ~alive_ok

    do = ~decided & has_tgt & atk_tgt & (s.cooldown <= 0.0)
    actions = np.where(do, ACTION_ATTACK, actions)
    decided |= do

    do = ~decided & has_tgt & _aligned_after_rotate(s, tp, tgt_radius)
    actions = np.where(do, ACTION_ROTATE, actions)
    decided |= do

    near_pos = np.take_along_axis(s.pos, tgt_near[..., None], axis=1)
    near_dist = np.take_along_axis(dist, tgt_near[:, :, None], axis=2)[..., 0]
    do = (
        ~decided
        & s.role_ranger
        & has_near
        & (near_dist < xi * s.u_range)
    )
    actions = np.where(do, _move_away(s.pos, near_pos, step), actions)
    decided |= do

    tvec = np.stack([np.cos(tgt_heading), np.sin(tgt_heading)], axis=-1)
    touch = s.u_radius + tgt_radius + CONTACT_BUFFER
    standoff = np.maximum(STANDOFF_FRACTION * s.u_range, touch)
    dest = np.where(
        s.role_healer[..., None],
        tp,
        np.where(
            s.role_assassin[..., None],
            tp - tvec * touch[..., None],
            tp + tvec * standoff[..., None],
        ),
    )
    do = ~decided & has_tgt
    actions = np.where(do, _move_toward(s.pos, dest, step), actions)
    decided |= do

    mem_gap = np.sqrt(((s.pos - s.mem_pos) ** 2).sum(axis=-1))
    mem_valid = s.mem_valid & (mem_gap > s.u_radius)
    do = ~decided & mem_valid
    actions = np.where(do, _move_toward(s.pos, s.mem_pos, step), actions)
    decided |= do

    if s.n_zones > 0:
        is_bush = s.z_type == ZONE_BUSH  # [B,Z]
        inside = zone_membership(s)
        in_bush = (inside & is_bush[:, None, :]).any(axis=2)
        cdist = np.sqrt(
            ((s.z_center[:, None, :, :] - s.pos[:, :, None, :]) ** 2).sum(axis=-1)
        )
        cdist = np.where(is_bush[:, None, :], cdist, np.inf)
        has_bush = is_bush.any(axis=1)
        nearest_bush = np.argmin(cdist, axis=2)
        bush_c = np.take_along_axis(
            s.z_center, np.maximum(nearest_bush, 0)[..., None], axis=1
        )
        do = ~decided & s.role_ranger & has_bush[:, None] & ~in_bush
        actions = np.where(do, _move_toward(s.pos, bush_c, step), actions)
        decided |= do

    actions = np.where(~decided, ACTION_ROTATE, actions)

    # Exploration: replace with a uniform draw over currently valid actions.
    n_valid = mask.sum(axis=-1)
    k = np.minimum((u_pick * n_valid).astype(np.int64), n_valid - 1)
    cum = np.cumsum(mask, axis=-1)
    random_choice = np.argmax(cum > k[..., None], axis=-1)
    explore = alive_ok & (u_explore < epsilon)
    actions = np.where(explore, random_choice, actions)

    new_mem_pos = np.where(has_tgt[..., None], tp, s.mem_pos)
    new_mem_valid = has_tgt | mem_valid
    return actions, new_mem_pos, new_mem_valid


def select_heuristic_target(
    units: list[UnitState],
    zones: list[Zone],
    visible: np.ndarray,
    index: int,
    field: FieldConfig | None = None,
) -> int | None:
    """Role-based target of unit `index`, or None when nothing qualifies."""
    s = _heuristic_shell(units, zones, field or FieldConfig(), PhysicsParams())
    dist = pairwise_distances(s.pos)
    tgt, has_tgt, _, _ = select_target_kernel(s, visible[None], dist)
    return int(tgt[0, index]) if has_tgt[0, index] else None


def desired_position(
    unit: UnitState, target: UnitState, flags: RoleFlags
) -> np.ndarray:
    """Where the cascade walks this unit, given its selected target.

    Healers head straight for the target; assassins aim just behind it
    (opposite its facing); everyone else keeps a standoff in front of it.
    """
    tvec = np.array([np.cos(target.heading), np.sin(target.heading)])
    touch = unit.spec.body_radius + target.spec.body_radius + CONTACT_BUFFER
    if flags.healer:
        return target.position.copy()
    if flags.assassin:
        return target.position - tvec * touch
    standoff = max(STANDOFF_FRACTION * unit.spec.attack_range, touch)
    return target.position + tvec * standoff


def _heuristic_shell(
    units: list[UnitState],
    zones: list[Zone],
    field: FieldConfig,
    physics: PhysicsParams,
    team: int | None = None,
    params: HeuristicParams | None = None,
    memory: list[HeuristicMemory] | None = None,
) -> SimArrays:
    s = pack_shell(units, zones, field)
    s.dt[0] = physics.dt
    s.rot_step[0] = physics.rotation_step
    s.enable_noop[0] = physics.enable_noop
    for i, u in enumerate(units):
        flags = classify_roles(u.spec)
        s.role_assassin[0, i] = flags.assassin
        s.role_ranger[0, i] = flags.ranger
        s.role_healer[0, i] = flags.healer
    if team is not None and params is not None:
        s.t_epsilon[0, team] = params.epsilon
        s.t_aggressive[0, team] = params.aggressive_threshold
    if memory is not None:
        for i, m in enumerate(memory):
            if m.position is not None:
                s.mem_pos[0, i] = m.position
                s.mem_valid[0, i] = True
    return s


def heuristic_step(
    units: list[UnitState],
    zones: list[Zone],
    field: FieldConfig,
    physics: PhysicsParams,
    team: int,
    params: HeuristicParams,
    rng: np.random.Generator,
    memory: list[HeuristicMemory] | None = None,
) -> tuple[np.ndarray, list[HeuristicMemory]]:
    """Choose actions for one team's alive units; everyone else gets noop.

    Two uniforms are drawn from rng per unit slot (explore roll, then
    action pick) regardless of team, so draw counts are stable.
    """
    n = len(units)
    s = _heuristic_shell(units, zones, field, physics, team, params, memory)
    vis = visibility_kernel(s)
    dist = pairwise_distances(s.pos)
    hurt = hurtbox_kernel(s.pos, s.heading, s.u_radius, s.u_range, s.u_sight_cos_half)
    atk = attackable_kernel(hurt, vis, s.u_damage, s.u_team, s.alive, s.u_active)
    mask = action_mask_kernel(s.alive, s.u_active, s.cooldown, s.enable_noop)
    u_explore = rng.random((1, n))
    u_pick = rng.random((1, n))
    actions, mem_pos, mem_valid = heuristic_kernel(
        s, vis, atk, dist, mask, u_explore, u_pick
    )
    ours = (s.u_team[0] == team) & s.alive[0] & s.u_active[0]
    out = np.where(ours, actions[0], ACTION_NOOP)
    new_memory = []
    for i in range(n):
        if ours[i] and mem_valid[0, i]:
            new_memory.append(HeuristicMemory(position=mem_pos[0, i].copy()))
        elif memory is not None and i < len(memory) and not ours[i]:
            new_memory.append(memory[i])
        else:
            new_memory.append(HeuristicMemory())
    return out, new_memory

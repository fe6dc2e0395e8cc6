"""Episode lifecycle: reset, the step pipeline, termination, batching.

One step runs, in order: action resolution for scripted and random teams,
commanded velocities, integration and timer decay, contact resolution,
boundary penalty, rotations, visibility refresh, combat, reveal marking,
lava damage, deaths, then rewards and termination.  Scripted controllers
decide from the visibility and attackable caches left by the previous
step, which equal a fresh computation at the current state.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import rng
from .arrays import (
    REASON_ELIMINATION,
    REASON_NAMES,
    REASON_NONE,
    REASON_TRUNCATION,
    REASON_TRUNCATION_TIE,
    SimArrays,
    ZONE_LAVA,
    action_mask_kernel,
    effective_speed,
    fill_env,
    health_gap,
    mean_health_ratio,
    pairwise_distances,
    sim_from_configs,
    stack_sims,
    unpack_units,
    zone_membership,
)
from .combat import attackable_kernel, combat_kernel, hurtbox_kernel
from .core import (
    ACTION_ATTACK,
    ACTION_NOOP,
    ACTION_ROTATE,
    MOVE_DIRECTIONS,
    NUM_ACTIONS,
    ActionMaskError,
    Outcome,
    ScenarioConfig,
    ScenarioFormatError,
    TEAM_ALLY,
    TEAM_ENEMY,
    UnitState,
    Zone,
    validate_scenario,
)
from .heuristics import heuristic_kernel
from .perception import ObservationLayout, observation_kernel, visibility_kernel
from .physics import boundary_kernel, contact_kernel, resolve_kernel

# Controller ids, matching core.CONTROLLERS order.
CTRL_EXTERNAL = 0
CTRL_HEURISTIC = 1
CTRL_RANDOM = 2

# Per-unit action vector for one environment.
JointAction = np.ndarray


@dataclass
class EnvState:
    """One environment's full state; a view over a single-row batch."""

    sim: SimArrays
    config: ScenarioConfig

    @property
    def t(self) -> int:
        return int(self.sim.t[0])

    @property
    def units(self) -> list[UnitState]:
        return unpack_units(self.sim, 0, self.config)

    @property
    def zones(self) -> list[Zone]:
        return list(self.config.zones)

    @property
    def seed(self) -> int:
        return int(self.sim.seed[0])

    @property
    def prev_health_gap(self) -> float:
        return float(self.sim.prev_gap[0])

    @property
    def done(self) -> bool:
        return bool(self.sim.done[0])

    def layout(self) -> ObservationLayout:
        return ObservationLayout(self.config.max_units, self.config.max_zones)


@dataclass
class StepResult:
    state: EnvState
    observations: np.ndarray  # [N, obs_dim]
    global_state: np.ndarray  # [global_dim]
    rewards: np.ndarray  # [N], ally-signed per unit
    action_mask: np.ndarray  # [N, NUM_ACTIONS]
    terminated: bool
    truncated: bool
    info: dict = field(default_factory=dict)


@dataclass
class BatchOutput:
    """Raw array outputs of one batched step."""

    observations: np.ndarray  # [B, N, obs_dim]
    global_state: np.ndarray  # [B, global_dim]
    rewards: np.ndarray  # [B, N]
    action_mask: np.ndarray  # [B, N, NUM_ACTIONS]
    terminated: np.ndarray  # [B]
    truncated: np.ndarray  # [B]
    done: np.ndarray  # [B]
    dense_reward: np.ndarray  # [B], ally perspective
    actions: np.ndarray  # [B, N] as executed
    interactions: np.ndarray  # [B, N, N]
    winner: np.ndarray  # [B]
    reason: np.ndarray  # [B]
    first_kill: np.ndarray  # [B]
    episode_return: np.ndarray  # [B]
    episode_length: np.ndarray  # [B]
    # set only by auto-resetting steps: the terminal-state arrays that the
    # post-reset observations replaced (rows of unfinished envs match the
    # returned arrays)
    final_observations: np.ndarray | None = None
    final_global_state: np.ndarray | None = None


def _ensure_valid(config: ScenarioConfig) -> None:
    report = validate_scenario(config)
    if not report.ok:
        raise ScenarioFormatError(
            f"invalid scenario {config.name!r}: " + "; ".join(report.violations[:5])
        )


def refresh_caches(s: SimArrays) -> None:
    """Recompute the visibility and attackable matrices for current state."""
    s.vis = visibility_kernel(s)
    hurt = hurtbox_kernel(s.pos, s.heading, s.u_radius, s.u_range, s.u_sight_cos_half)
    s.atk = attackable_kernel(hurt, s.vis, s.u_damage, s.u_team, s.alive, s.u_active)


def _resolve_actions(
    s: SimArrays, external: np.ndarray | None, mask: np.ndarray
) -> np.ndarray:
    """Merge external, scripted, and random actions into one [B,N] array."""
    B, N = s.alive.shape
    running = ~s.done
    ctrl = np.take_along_axis(s.t_controller, s.u_team, axis=1)  # [B,N]
    controllable = s.alive & s.u_active & running[:, None]

    if external is None:
        actions = np.full((B, N), ACTION_NOOP, dtype=np.int64)
    else:
        actions = np.asarray(external, dtype=np.int64).reshape(B, N).copy()
        check = controllable & (ctrl == CTRL_EXTERNAL)
        if check.any():
            oob = check & ((actions < 0) | (actions >= NUM_ACTIONS))
            valid = np.take_along_axis(
                mask, np.clip(actions, 0, NUM_ACTIONS - 1)[..., None], axis=2
            )[..., 0]
            bad = check & (oob | ~valid)
            if bad.any():
                b, i = np.argwhere(bad)[0]
                raise ActionMaskError(
                    f"invalid action {actions[b, i]} for unit {i} in env {b}"
                )

    needs_heur = (ctrl == CTRL_HEURISTIC) & controllable
    if needs_heur.any():
        lanes = np.arange(N)[None, :]
        u_explore = rng.uniform(s.seed[:, None], s.t[:, None], rng.TAG_HEURISTIC_EXPLORE, lanes)
        u_pick = rng.uniform(s.seed[:, None], s.t[:, None], rng.TAG_HEURISTIC_PICK, lanes)
        dist = pairwise_distances(s.pos)
        heur, mem_pos, mem_valid = heuristic_kernel(
            s, s.vis, s.atk, dist, mask, u_explore, u_pick
        )
        actions = np.where(needs_heur, heur, actions)
        upd = needs_heur
        s.mem_pos = np.where(upd[..., None], mem_pos, s.mem_pos)
        s.mem_valid = np.where(upd, mem_valid, s.mem_valid)

    needs_rand = (ctrl == CTRL_RANDOM) & controllable
    if needs_rand.any():
        lanes = np.arange(N)[None, :]
        u = rng.uniform(s.seed[:, None], s.t[:, None], rng.TAG_RANDOM_ACTION, lanes)
        n_valid = mask.sum(axis=-1)
        k = np.minimum((u * n_valid).astype(np.int64), n_valid - 1)
        cum = np.cumsum(mask, axis=-1)
        choice = np.argmax(cum > k[..., None], axis=-1)
        actions = np.where(needs_rand, choice, actions)

    return np.where(controllable, actions, ACTION_NOOP)


def step_kernel(s: SimArrays, external: np.ndarray | None) -> BatchOutput:
    """Advance every running environment by one step, in place."""
    B, N = s.alive.shape
    running = ~s.done

    mask = action_mask_kernel(s.alive, s.u_active, s.cooldown, s.enable_noop)
    actions = _resolve_actions(s, external, mask)

    # Commanded velocity from move actions, scaled by swamp terrain.
    is_move = actions < 4
    dirs = MOVE_DIRECTIONS[np.clip(actions, 0, 3)]  # [B,N,2]
    speed = effective_speed(s)
    moving = is_move & s.alive & s.u_active & ~s.u_kinematic
    v_cmd = dirs * np.where(moving, speed, 0.0)[..., None]

    # Integrate: commanded plus the impulse carry from last step's contacts.
    v_used = v_cmd + s.imp_dv
    movable = (s.u_active & ~s.u_kinematic & running[:, None])[..., None]
    s.pos = np.where(movable, s.pos + v_used * s.dt[:, None, None], s.pos)
    tick = (s.u_active & running[:, None]).astype(np.float64) * s.dt[:, None]
    s.cooldown = np.maximum(s.cooldown - tick, 0.0)
    s.reveal = np.maximum(s.reveal - tick, 0.0)

    # Contacts: corpses still collide, finished envs are inert.
    touching, normal, depth = contact_kernel(s.pos, s.u_radius, s.u_active)
    touching &= running[:, None]
    v_final, new_pos = resolve_kernel(
        v_used, s.pos, s.u_inv_mass, touching, normal, depth,
        s.restitution, s.slop, s.correction,
    )
    s.pos = new_pos
    s.imp_dv = np.where(running[:, None, None], v_final - v_used, s.imp_dv)
    s.vel = np.where(running[:, None, None], v_final, s.vel)

    # Leaving the field costs a slice of max health per second.
    bpos, bhealth = boundary_kernel(
        s.pos, s.health, s.alive, s.u_active, s.u_kinematic,
        s.u_max_health, s.field_w, s.field_h, s.boundary_coeff, s.dt,
    )
    s.pos = np.where(running[:, None, None], bpos, s.pos)
    s.health = np.where(running[:, None], bhealth, s.health)

    rotate = (actions == ACTION_ROTATE) & s.alive & s.u_active & running[:, None]
    s.heading = np.where(
        rotate, (s.heading + s.rot_step[:, None]) % (2.0 * np.pi), s.heading
    )

    s.vis = visibility_kernel(s)
    hurt = hurtbox_kernel(s.pos, s.heading, s.u_radius, s.u_range, s.u_sight_cos_half)
    s.atk = attackable_kernel(hurt, s.vis, s.u_damage, s.u_team, s.alive, s.u_active)
    dist = pairwise_distances(s.pos)

    new_health, new_cooldown, interactions = combat_kernel(
        s.atk, dist, actions, s.alive, s.u_active, s.cooldown,
        s.u_damage, s.health, s.u_max_health, s.u_cooldown,
    )
    s.health = np.where(running[:, None], new_health, s.health)
    s.cooldown = np.where(running[:, None], new_cooldown, s.cooldown)
    interactions &= running[:, None, None]

    touched = interactions.any(axis=2) | interactions.any(axis=1)
    s.reveal = np.where(touched, s.reveal_duration[:, None], s.reveal)

    # Lava burns the living; overlapping pools stack.
    inside = zone_membership(s)
    lava = (s.z_type == ZONE_LAVA)[:, None, :]
    burn = np.where(inside & lava, s.z_effect[:, None, :], 0.0).sum(axis=2) * s.dt[:, None]
    hurtable = s.alive & s.u_active & running[:, None]
    s.health = np.where(
        hurtable, np.clip(s.health - burn, 0.0, s.u_max_health), s.health
    )

    new_alive = s.alive & (s.health > 0.0)
    died = s.alive & ~new_alive
    s.alive = new_alive
    any_death = died.any(axis=1) & (s.first_kill < 0)
    ally_died = (died & (s.u_team == TEAM_ALLY)).any(axis=1)
    s.first_kill = np.where(
        any_death, np.where(ally_died, TEAM_ENEMY, TEAM_ALLY), s.first_kill
    )

    # Rewards follow the swing in the mean-health gap, plus a terminal unit.
    gap = health_gap(s)
    dense = np.where(running, gap - s.prev_gap, 0.0)
    s.prev_gap = np.where(running, gap, s.prev_gap)
    s.t = s.t + running.astype(np.int64)

    a_count = (s.alive & s.u_active & (s.u_team == TEAM_ALLY)).sum(axis=1)
    e_count = (s.alive & s.u_active & (s.u_team == TEAM_ENEMY)).sum(axis=1)
    elim = running & ((a_count == 0) | (e_count == 0))
    trunc = running & ~elim & (s.t >= s.max_steps)
    ra = mean_health_ratio(s, TEAM_ALLY)
    re = mean_health_ratio(s, TEAM_ENEMY)

    winner = np.where(
        elim,
        np.where((e_count == 0) & (a_count > 0), TEAM_ALLY, TEAM_ENEMY),
        np.where(trunc, np.where(ra > re, TEAM_ALLY, TEAM_ENEMY), -1),
    )
    reason = np.where(
        elim,
        REASON_ELIMINATION,
        np.where(
            trunc,
            np.where(ra == re, REASON_TRUNCATION_TIE, REASON_TRUNCATION),
            REASON_NONE,
        ),
    )
    finished = elim | trunc
    terminal = np.where(
        finished, np.where(winner == TEAM_ALLY, 1.0, -1.0), 0.0
    )
    ally_reward = dense + terminal
    s.ep_return = s.ep_return + np.where(running, ally_reward, 0.0)
    s.terminated |= elim
    s.truncated |= trunc
    s.done |= finished
    s.winner = np.where(finished, winner, s.winner)
    s.reason = np.where(finished, reason, s.reason)

    sign = np.where(s.u_team == TEAM_ALLY, 1.0, -1.0) * s.u_active
    rewards = sign * np.where(running, ally_reward, 0.0)[:, None]

    obs, glob = observation_kernel(s, s.vis, s.atk)
    out_mask = action_mask_kernel(s.alive, s.u_active, s.cooldown, s.enable_noop)
    return BatchOutput(
        observations=obs,
        global_state=glob,
        rewards=rewards,
        action_mask=out_mask,
        terminated=s.terminated.copy(),
        truncated=s.truncated.copy(),
        done=s.done.copy(),
        dense_reward=dense,
        actions=actions,
        interactions=interactions,
        winner=s.winner.copy(),
        reason=s.reason.copy(),
        first_kill=s.first_kill.copy(),
        episode_return=s.ep_return.copy(),
        episode_length=s.t.copy(),
    )


def init_output(s: SimArrays) -> BatchOutput:
    """Observation bundle for freshly reset environments; rewards are zero."""
    refresh_caches(s)
    s.prev_gap = health_gap(s)
    B, N = s.alive.shape
    obs, glob = observation_kernel(s, s.vis, s.atk)
    mask = action_mask_kernel(s.alive, s.u_active, s.cooldown, s.enable_noop)
    return BatchOutput(
        observations=obs,
        global_state=glob,
        rewards=np.zeros((B, N)),
        action_mask=mask,
        terminated=s.terminated.copy(),
        truncated=s.truncated.copy(),
        done=s.done.copy(),
        dense_reward=np.zeros(B),
        actions=np.full((B, N), ACTION_NOOP, dtype=np.int64),
        interactions=np.zeros((B, N, N), dtype=bool),
        winner=s.winner.copy(),
        reason=s.reason.copy(),
        first_kill=s.first_kill.copy(),
        episode_return=s.ep_return.copy(),
        episode_length=s.t.copy(),
    )


def outcome_from_arrays(s: SimArrays, b: int) -> Outcome | None:
    if not s.done[b]:
        return None
    fk = int(s.first_kill[b])
    return Outcome(
        winner=int(s.winner[b]),
        reason=REASON_NAMES[int(s.reason[b])],
        ally_health_ratio=float(mean_health_ratio(s, TEAM_ALLY)[b]),
        enemy_health_ratio=float(mean_health_ratio(s, TEAM_ENEMY)[b]),
        episode_length=int(s.t[b]),
        first_kill_team=None if fk < 0 else fk,
    )


def _wrap_results(
    sims: list[SimArrays], configs: list[ScenarioConfig], out: BatchOutput, offset: int = 0
) -> list[StepResult]:
    results = []
    for k, (sim, config) in enumerate(zip(sims, configs)):
        b = offset + k
        state = EnvState(sim=sim, config=config)
        results.append(
            StepResult(
                state=state,
                observations=out.observations[b],
                global_state=out.global_state[b],
                rewards=out.rewards[b],
                action_mask=out.action_mask[b],
                terminated=bool(out.terminated[b]),
                truncated=bool(out.truncated[b]),
                info={
                    "outcome": outcome_from_arrays(sim, 0),
                    "actions": out.actions[b],
                    "interactions": out.interactions[b],
                    "dense_reward": float(out.dense_reward[b]),
                    "episode_return": float(out.episode_return[b]),
                },
            )
        )
    return results


def reset(config: ScenarioConfig, seed: int) -> StepResult:
    """Fresh episode; raises ScenarioFormatError on an invalid config."""
    _ensure_valid(config)
    sim = sim_from_configs([config], np.array([seed], dtype=np.uint64))
    out = init_output(sim)
    return _wrap_results([sim], [config], out)[0]


def step(state: EnvState, actions: JointAction) -> StepResult:
    """Pure step: returns the successor without touching the input state."""
    sim = state.sim.copy()
    out = step_kernel(sim, np.asarray(actions)[None])
    return _wrap_results([sim], [state.config], out)[0]


def reset_batch(configs: list[ScenarioConfig], seeds) -> list[StepResult]:
    seen: dict[int, ScenarioConfig] = {id(c): c for c in configs}
    for c in seen.values():
        _ensure_valid(c)
    sim = sim_from_configs(configs, np.asarray(seeds, dtype=np.uint64))
    out = init_output(sim)
    sims = [sim.slice_env(b) for b in range(len(configs))]
    return _wrap_results(sims, configs, out)


def step_batch(states: list[EnvState], actions: np.ndarray) -> list[StepResult]:
    """Step many environments as one batch; equals stepping each alone."""
    sim = stack_sims([st.sim for st in states])
    out = step_kernel(sim, np.asarray(actions))
    sims = [sim.slice_env(b) for b in range(len(states))]
    return _wrap_results(sims, [st.config for st in states], out)


def terminal_outcome(state: EnvState) -> Outcome | None:
    """Final outcome once the episode ended, else None."""
    return outcome_from_arrays(state.sim, 0)


def action_mask(state: EnvState) -> np.ndarray:
    """[N, NUM_ACTIONS] valid-action mask for the current state."""
    s = state.sim
    return action_mask_kernel(s.alive, s.u_active, s.cooldown, s.enable_noop)[0]


class BatchSim:
    """Persistent batched simulator that steps in place.

    The fast path for rollouts, benchmarks, and bindings.  With auto_reset,
    a finished environment immediately restarts with a freshly derived
    seed; its returned observation then belongs to the new episode while
    rewards and flags still describe the final step of the old one.
    """

    def __init__(
        self,
        configs: list[ScenarioConfig],
        seeds,
        auto_reset: bool = False,
    ) -> None:
        seen: dict[int, ScenarioConfig] = {id(c): c for c in configs}
        for c in seen.values():
            _ensure_valid(c)
        self.configs = list(configs)
        self.auto_reset = auto_reset
        self.sim = sim_from_configs(configs, np.asarray(seeds, dtype=np.uint64))
        self.last = init_output(self.sim)

    @property
    def batch(self) -> int:
        return self.sim.batch

    def reset_env(self, b: int, config: ScenarioConfig | None = None, seed: int | None = None) -> None:
        """Restart environment b, optionally swapping in a new scenario."""
        if config is not None:
            _ensure_valid(config)
            self.configs[b] = config
        if seed is not None:
            self.sim.seed[b] = np.uint64(seed)
        fill_env(self.sim, b, self.configs[b])
        self.last = init_output(self.sim)

    def step(self, actions: np.ndarray | None = None) -> BatchOutput:
        out = step_kernel(self.sim, actions)
        if self.auto_reset and out.done.any():
            s = self.sim
            for b in np.nonzero(out.done)[0]:
                s.episode[b] += 1
                s.seed[b] = rng.hash_u64(s.seed[b], int(s.episode[b]), rng.TAG_RESEED)
                fill_env(s, b, self.configs[b])
            refresh_caches(s)
            s.prev_gap = np.where(out.done, health_gap(s), s.prev_gap)
            obs, glob = observation_kernel(s, s.vis, s.atk)
            mask = action_mask_kernel(s.alive, s.u_active, s.cooldown, s.enable_noop)
            sel = out.done
            out.final_observations = out.observations
            out.final_global_state = out.global_state
            out.observations = np.where(sel[:, None, None], obs, out.observations)
            out.global_state = np.where(sel[:, None], glob, out.global_state)
            out.action_mask = np.where(sel[:, None, None], mask, out.action_mask)
        self.last = out
        return out

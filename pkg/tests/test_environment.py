"""Episode lifecycle: reset, the step pipeline, rewards, termination."""
from __future__ import annotations

import numpy as np
import pytest

from skirmish.core import (
    ACTION_ATTACK,
    ACTION_MOVE_POS_X,
    ACTION_NOOP,
    ACTION_ROTATE,
    ActionMaskError,
    PhysicsParams,
    ScenarioConfig,
    ScenarioFormatError,
    TEAM_ALLY,
    TEAM_ENEMY,
    TeamConfig,
    UnitPlacement,
    Zone,
)
from skirmish.environment import (
    BatchSim,
    action_mask,
    reset,
    reset_batch,
    step,
    step_batch,
    terminal_outcome,
)
from conftest import duel_config

EXTERNAL = (TeamConfig(0, "external"), TeamConfig(1, "external"))


def arena(units, zones=(), max_steps=400, **kwargs):
    """Fully scripted-free scenario: both teams take external actions."""
    return ScenarioConfig(
        name="test-arena",
        units=list(units),
        teams=EXTERNAL,
        zones=list(zones),
        max_steps=max_steps,
        **kwargs,
    )


def poke_config(enemy_health=None, enemy_heading=0.0, gap=2.0):
    """Ally farmer behind an enemy farmer that faces away."""
    overrides = {} if enemy_health is None else {"max_health": enemy_health}
    return arena(
        [
            UnitPlacement(0, (15.0, 20.0), 0.0, preset="farmer"),
            UnitPlacement(
                1, (15.0 + gap, 20.0), enemy_heading, preset="farmer",
                overrides=overrides,
            ),
        ]
    )


class TestReset:
    def test_deterministic(self):
        cfg = duel_config()
        a = reset(cfg, seed=42)
        b = reset(cfg, seed=42)
        assert np.array_equal(a.observations, b.observations)
        assert np.array_equal(a.global_state, b.global_state)

    def test_initial_flags_and_rewards(self):
        r = reset(duel_config(), seed=1)
        assert not r.terminated and not r.truncated
        assert (r.rewards == 0.0).all()
        assert r.state.t == 0
        assert terminal_outcome(r.state) is None

    def test_observation_shapes(self):
        r = reset(duel_config(), seed=1)
        layout = r.state.layout()
        assert r.observations.shape == (2, layout.obs_dim)
        assert r.global_state.shape == (layout.global_dim,)
        assert layout.obs_dim == 15 + 17

    def test_rejects_invalid_config(self):
        cfg = arena([UnitPlacement(0, (-5.0, 20.0), 0.0, preset="farmer"),
                     UnitPlacement(1, (25.0, 20.0), 0.0, preset="farmer")])
        with pytest.raises(ScenarioFormatError):
            reset(cfg, seed=1)

    def test_heading_converted_to_radians(self):
        r = reset(duel_config(), seed=1)
        assert r.state.units[1].heading == pytest.approx(np.pi)

    def test_padding_capacity(self):
        r = reset(duel_config(max_units=4), seed=1)
        layout = r.state.layout()
        assert layout.max_units == 4
        assert r.observations.shape == (4, layout.obs_dim)
        assert not r.observations[2:].any()
        # padding slots allow nothing but noop
        assert (r.action_mask[2:, ACTION_NOOP] == 1).all()
        assert not r.action_mask[2:, :ACTION_NOOP].any()


class TestStepPipeline:
    def test_move_updates_position(self):
        r = reset(poke_config(gap=10.0), seed=1)
        r2 = step(r.state, [ACTION_MOVE_POS_X, ACTION_ROTATE])
        assert r2.state.units[0].position[0] == pytest.approx(15.0 + 1.1 * 0.1)
        assert r2.state.units[0].position[1] == pytest.approx(20.0)

    def test_step_is_pure(self):
        r = reset(poke_config(gap=10.0), seed=1)
        before = r.state.units[0].position.copy()
        a = step(r.state, [ACTION_MOVE_POS_X, ACTION_ROTATE])
        b = step(r.state, [ACTION_MOVE_POS_X, ACTION_ROTATE])
        assert r.state.t == 0
        assert r.state.units[0].position == pytest.approx(before)
        assert np.array_equal(a.observations, b.observations)
        assert np.array_equal(a.rewards, b.rewards)

    def test_rotation_step_and_wrap(self):
        r = reset(poke_config(gap=10.0), seed=1)
        r = step(r.state, [ACTION_ROTATE, ACTION_ROTATE])
        assert r.state.units[0].heading == pytest.approx(np.pi / 6)
        for _ in range(11):
            r = step(r.state, [ACTION_ROTATE, ACTION_ROTATE])
        assert r.state.units[0].heading == pytest.approx(0.0, abs=1e-9)

    def test_swamp_slows_movement(self):
        swamp = Zone("swamp", (15.0, 20.0), (3.0, 3.0), 0.35)
        cfg = arena(
            [
                UnitPlacement(0, (15.0, 20.0), 0.0, preset="farmer"),
                UnitPlacement(1, (30.0, 20.0), 180.0, preset="farmer"),
            ],
            zones=[swamp],
        )
        r = reset(cfg, seed=1)
        r2 = step(r.state, [ACTION_MOVE_POS_X, ACTION_ROTATE])
        assert r2.state.units[0].position[0] == pytest.approx(
            15.0 + 1.1 * 0.35 * 0.1
        )

    def test_lava_burns_per_second(self):
        lava = Zone("lava", (15.0, 20.0), (3.0, 3.0), 5.0)
        cfg = arena(
            [
                UnitPlacement(0, (15.0, 20.0), 0.0, preset="farmer"),
                UnitPlacement(1, (30.0, 20.0), 180.0, preset="farmer"),
            ],
            zones=[lava],
        )
        r = reset(cfg, seed=1)
        r2 = step(r.state, [ACTION_ROTATE, ACTION_ROTATE])
        assert r2.state.units[0].health == pytest.approx(60.0 - 5.0 * 0.1)
        assert r2.state.units[1].health == 60.0

    def test_attack_reward_share(self):
        r = reset(poke_config(), seed=1)
        r2 = step(r.state, [ACTION_ATTACK, ACTION_ATTACK])
        # ally lands 14 on a 60-health enemy and takes none back
        assert r2.state.units[1].health == pytest.approx(46.0)
        assert r2.state.units[0].health == 60.0
        assert r2.rewards[0] == pytest.approx(14.0 / 60.0)
        assert r2.rewards[1] == pytest.approx(-14.0 / 60.0)
        assert r2.info["dense_reward"] == pytest.approx(14.0 / 60.0)

    def test_whiffed_enemy_still_pays_cooldown(self):
        r = reset(poke_config(), seed=1)
        r2 = step(r.state, [ACTION_ATTACK, ACTION_ATTACK])
        assert r2.state.units[1].cooldown_timer == pytest.approx(2.5)

    def test_cooldown_blocks_next_attack(self):
        r = reset(poke_config(), seed=1)
        r2 = step(r.state, [ACTION_ATTACK, ACTION_ROTATE])
        assert not r2.action_mask[0, ACTION_ATTACK]
        with pytest.raises(ActionMaskError):
            step(r2.state, [ACTION_ATTACK, ACTION_ROTATE])

    def test_cooldown_ticks_down(self):
        r = reset(poke_config(gap=10.0), seed=1)
        r = step(r.state, [ACTION_ATTACK, ACTION_ROTATE])  # whiff, 2.5
        for _ in range(24):
            r = step(r.state, [ACTION_ROTATE, ACTION_ROTATE])
        assert r.state.units[0].cooldown_timer == pytest.approx(0.1)
        assert not r.action_mask[0, ACTION_ATTACK]
        r = step(r.state, [ACTION_ROTATE, ACTION_ROTATE])
        assert r.state.units[0].cooldown_timer == 0.0
        assert r.action_mask[0, ACTION_ATTACK]


class TestActionValidation:
    def test_out_of_range(self):
        r = reset(poke_config(), seed=1)
        with pytest.raises(ActionMaskError):
            step(r.state, [7, ACTION_ROTATE])
        with pytest.raises(ActionMaskError):
            step(r.state, [-1, ACTION_ROTATE])

    def test_noop_masked_for_the_living(self):
        r = reset(poke_config(), seed=1)
        with pytest.raises(ActionMaskError, match="invalid action 6 for unit 0 in env 0"):
            step(r.state, [ACTION_NOOP, ACTION_ROTATE])

    def test_noop_opt_in(self):
        cfg = poke_config()
        cfg = ScenarioConfig(
            name=cfg.name, units=cfg.units, teams=cfg.teams, zones=cfg.zones,
            max_steps=cfg.max_steps, physics=PhysicsParams(enable_noop=True),
        )
        r = reset(cfg, seed=1)
        assert r.action_mask[0, ACTION_NOOP]
        r2 = step(r.state, [ACTION_NOOP, ACTION_NOOP])
        assert r2.state.t == 1

    def test_dead_units_skip_validation(self):
        cfg = arena(
            [
                UnitPlacement(0, (15.0, 20.0), 0.0, preset="farmer"),
                UnitPlacement(1, (17.0, 20.0), 0.0, preset="farmer",
                              overrides={"max_health": 10.0}),
                UnitPlacement(1, (30.0, 20.0), 180.0, preset="farmer"),
            ]
        )
        r = reset(cfg, seed=1)
        r = step(r.state, [ACTION_ATTACK, ACTION_ROTATE, ACTION_ROTATE])
        assert not r.state.units[1].alive
        assert not r.terminated  # second enemy still up
        mask = action_mask(r.state)
        assert list(np.nonzero(mask[1])[0]) == [ACTION_NOOP]
        # a dead unit's slot accepts anything and executes nothing
        r2 = step(r.state, [ACTION_ROTATE, ACTION_ATTACK, ACTION_ROTATE])
        assert r2.state.units[1].health == 0.0
        assert r2.state.units[1].position == pytest.approx([17.0, 20.0], abs=0.3)


class TestTermination:
    def test_elimination_win(self):
        r = reset(poke_config(enemy_health=10.0), seed=1)
        r2 = step(r.state, [ACTION_ATTACK, ACTION_ROTATE])
        assert r2.terminated and not r2.truncated
        # dense sweep to a zero enemy ratio plus the terminal unit
        assert r2.rewards[0] == pytest.approx(2.0)
        assert r2.rewards[1] == pytest.approx(-2.0)
        out = terminal_outcome(r2.state)
        assert out.winner == TEAM_ALLY
        assert out.reason == "elimination"
        assert out.episode_length == 1
        assert out.first_kill_team == TEAM_ALLY
        assert out.enemy_health_ratio == 0.0

    def test_mutual_destruction_goes_to_enemy(self):
        cfg = arena(
            [
                UnitPlacement(0, (19.0, 20.0), 0.0, preset="farmer",
                              overrides={"max_health": 10.0}),
                UnitPlacement(1, (21.0, 20.0), 180.0, preset="farmer",
                              overrides={"max_health": 10.0}),
            ]
        )
        r = reset(cfg, seed=1)
        r2 = step(r.state, [ACTION_ATTACK, ACTION_ATTACK])
        assert r2.terminated
        out = terminal_outcome(r2.state)
        assert out.winner == TEAM_ENEMY
        assert out.first_kill_team == TEAM_ENEMY
        assert r2.rewards[0] == pytest.approx(-1.0)
        assert r2.rewards[1] == pytest.approx(1.0)

    def test_truncation_tie_goes_to_enemy(self):
        cfg = arena(
            [
                UnitPlacement(0, (15.0, 20.0), 0.0, preset="farmer"),
                UnitPlacement(1, (25.0, 20.0), 180.0, preset="farmer"),
            ],
            max_steps=3,
        )
        r = reset(cfg, seed=1)
        for _ in range(3):
            r = step(r.state, [ACTION_ROTATE, ACTION_ROTATE])
        assert r.truncated and not r.terminated
        out = terminal_outcome(r.state)
        assert out.winner == TEAM_ENEMY
        assert out.reason == "truncation_tie"
        assert r.rewards[0] == pytest.approx(-1.0)

    def test_truncation_health_lead_wins(self):
        cfg = arena(
            [
                UnitPlacement(0, (15.0, 20.0), 0.0, preset="farmer"),
                UnitPlacement(1, (17.0, 20.0), 0.0, preset="farmer"),
            ],
            max_steps=2,
        )
        r = reset(cfg, seed=1)
        r = step(r.state, [ACTION_ATTACK, ACTION_ROTATE])
        r = step(r.state, [ACTION_ROTATE, ACTION_ROTATE])
        assert r.truncated
        out = terminal_outcome(r.state)
        assert out.winner == TEAM_ALLY
        assert out.reason == "truncation"
        assert out.ally_health_ratio > out.enemy_health_ratio
        assert r.rewards[0] == pytest.approx(1.0)

    def test_done_env_is_frozen(self):
        r = reset(poke_config(enemy_health=10.0), seed=1)
        r = step(r.state, [ACTION_ATTACK, ACTION_ROTATE])
        assert r.terminated
        frozen = step(r.state, [ACTION_ATTACK, ACTION_ATTACK])
        assert frozen.state.t == r.state.t
        assert (frozen.rewards == 0.0).all()
        assert frozen.state.units[0].health == r.state.units[0].health
        assert frozen.terminated


class TestRewardTelescoping:
    def test_dense_sum_matches_gap_swing(self):
        scripted = (
            TeamConfig(0, "random"),
            TeamConfig(1, "random"),
        )
        cfg = ScenarioConfig(
            name="melee-rand",
            units=[
                UnitPlacement(0, (17.0, 20.0), 0.0, preset="farmer"),
                UnitPlacement(0, (17.0, 24.0), 0.0, preset="assassin"),
                UnitPlacement(1, (23.0, 20.0), 180.0, preset="farmer"),
                UnitPlacement(1, (23.0, 16.0), 180.0, preset="king"),
            ],
            teams=scripted,
            max_steps=120,
        )
        sim = BatchSim([cfg] * 3, seeds=[5, 6, 7])
        start = sim.sim.prev_gap.copy()
        total = np.zeros(3)
        for _ in range(cfg.max_steps):
            out = sim.step(None)
            total += out.dense_reward
            if out.done.all():
                break
        assert out.done.all()
        end = sim.sim.prev_gap
        np.testing.assert_allclose(total, end - start, atol=1e-6)


class TestBatching:
    def test_batch_equals_sequential(self):
        c1 = duel_config(ally="farmer", enemy="assassin", tier="medium")
        c2 = duel_config(ally="archer", enemy="farmer", tier="novice")
        rs = reset_batch([c1, c2], seeds=[11, 12])
        solo = [reset(c1, 11), reset(c2, 12)]
        for k in range(2):
            assert np.array_equal(rs[k].observations, solo[k].observations)
        acts = np.zeros((2, 2), dtype=np.int64)
        acts[:, 0] = ACTION_ROTATE  # external ally spins in place
        states = [r.state for r in rs]
        for t in range(60):
            rs = step_batch(states, acts)
            states = [r.state for r in rs]
            for k in range(2):
                solo[k] = step(solo[k].state, acts[k])
                assert np.array_equal(
                    rs[k].observations, solo[k].observations
                ), f"env {k} diverged at step {t}"
                assert np.array_equal(rs[k].rewards, solo[k].rewards)
                assert np.array_equal(
                    rs[k].state.sim.pos, solo[k].state.sim.pos
                )
                assert np.array_equal(
                    rs[k].state.sim.health, solo[k].state.sim.health
                )

    def test_scripted_seed_changes_trajectory(self):
        # fixed external ally, fully random enemy: the env seed drives it
        cfg = duel_config(tier="random", max_steps=100)
        a, b = reset(cfg, seed=1), reset(cfg, seed=2)
        trace_a, trace_b = [], []
        for _ in range(40):
            a = step(a.state, [ACTION_ROTATE, 0])
            b = step(b.state, [ACTION_ROTATE, 0])
            trace_a.append(a.info["actions"][1])
            trace_b.append(b.info["actions"][1])
            if a.terminated or b.terminated:
                break
        assert trace_a != trace_b

    def test_same_seed_same_trajectory(self):
        cfg = duel_config(tier="medium", max_steps=100)
        a = reset(cfg, seed=9)
        b = reset(cfg, seed=9)
        for _ in range(50):
            a = step(a.state, [ACTION_ROTATE, 0])
            b = step(b.state, [ACTION_ROTATE, 0])
            assert np.array_equal(a.observations, b.observations)
            if a.terminated or a.truncated:
                break


class TestBatchSim:
    def test_auto_reset_restores_scenario(self):
        cfg = poke_config(enemy_health=10.0)
        sim = BatchSim([cfg], seeds=[3], auto_reset=True)
        out = sim.step(np.array([[ACTION_ATTACK, ACTION_ROTATE]]))
        assert out.done[0]
        assert out.rewards[0, 0] == pytest.approx(2.0)
        # the sim already hosts the next episode
        assert sim.sim.t[0] == 0
        assert sim.sim.health[0, 1] == 10.0
        assert sim.sim.alive[0].all()
        fresh = reset(cfg, seed=int(sim.sim.seed[0]))
        assert np.array_equal(out.observations[0], fresh.observations)

    def test_auto_reset_derives_new_seed(self):
        cfg = poke_config(enemy_health=10.0)
        sim = BatchSim([cfg], seeds=[3], auto_reset=True)
        sim.step(np.array([[ACTION_ATTACK, ACTION_ROTATE]]))
        assert int(sim.sim.seed[0]) != 3
        assert int(sim.sim.episode[0]) == 1

    def test_auto_reset_exposes_terminal_arrays(self):
        cfg = poke_config(enemy_health=10.0)
        live = BatchSim([cfg, cfg], seeds=[3, 4], auto_reset=True)
        frozen = BatchSim([cfg, cfg], seeds=[3, 4])
        acts = np.array(
            [[ACTION_ATTACK, ACTION_ROTATE], [ACTION_ROTATE, ACTION_ROTATE]]
        )
        out = live.step(acts)
        ref = frozen.step(acts)
        assert out.done[0] and not out.done[1]
        # pre-reset arrays equal a twin stepped without auto-reset
        assert np.array_equal(out.final_observations, ref.observations)
        assert np.array_equal(out.final_global_state, ref.global_state)
        assert np.array_equal(out.final_observations[1], out.observations[1])
        # while the returned row already belongs to the next episode
        assert not np.array_equal(out.observations[0], ref.observations[0])

    def test_final_arrays_unset_without_a_reset(self):
        cfg = poke_config(enemy_health=10.0)
        sim = BatchSim([cfg], seeds=[3], auto_reset=True)
        out = sim.step(np.array([[ACTION_ROTATE, ACTION_ROTATE]]))
        assert out.final_observations is None and out.final_global_state is None

    def test_manual_reconfigure(self):
        sim = BatchSim([duel_config()], seeds=[3])
        other = duel_config(ally="archer", enemy="king")
        sim.reset_env(0, config=other, seed=77)
        assert sim.sim.u_max_health[0, 1] == 346.0
        assert int(sim.sim.seed[0]) == 77

    def test_without_auto_reset_stays_done(self):
        cfg = poke_config(enemy_health=10.0)
        sim = BatchSim([cfg], seeds=[3])
        out = sim.step(np.array([[ACTION_ATTACK, ACTION_ROTATE]]))
        assert out.done[0]
        out2 = sim.step(np.array([[ACTION_ROTATE, ACTION_ROTATE]]))
        assert out2.done[0]
        assert out2.rewards[0, 0] == 0.0
        assert sim.sim.t[0] == 1

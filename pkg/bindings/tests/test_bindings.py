"""Handle lifecycle, shapes, auto-reset bookkeeping, and error surface."""
from __future__ import annotations

from dataclasses import replace

import numpy as np
import pytest

import skirmish_bindings as sb
from skirmish import (
    ACTION_ATTACK,
    ACTION_NOOP,
    ACTION_ROTATE,
    TAG_EPISODE,
    PhysicsParams,
    ScenarioConfig,
    TeamConfig,
    UNIT_PRESETS,
    UnitPlacement,
    Zone,
    derive_seed,
    reset as engine_reset,
    save_scenario,
)


def external_duel(ally_damage=None, enemy="farmer"):
    spec = UNIT_PRESETS["farmer"]
    if ally_damage is not None:
        spec = replace(spec, attack_damage=float(ally_damage))
    return ScenarioConfig(
        name="bindings-duel",
        units=[
            UnitPlacement(0, (19.0, 20.0), 0.0, spec=spec),
            UnitPlacement(1, (21.0, 20.0), 180.0, preset=enemy),
        ],
        teams=[TeamConfig(0, "external"), TeamConfig(1, "external")],
        physics=PhysicsParams(enable_noop=True),
    )


def as_bytes(config) -> bytes:
    return save_scenario(config).encode()


def test_dimensions_for_five_units_two_zones():
    cfg = ScenarioConfig(
        name="five-two",
        units=[
            UnitPlacement(0, (10.0, 10.0), 0.0, preset="farmer"),
            UnitPlacement(0, (10.0, 14.0), 0.0, preset="archer"),
            UnitPlacement(1, (30.0, 10.0), 180.0, preset="farmer"),
            UnitPlacement(1, (30.0, 14.0), 180.0, preset="healer"),
        ],
        teams=[TeamConfig(0, "external"), TeamConfig(1, "external")],
        zones=[Zone("bush", (20.0, 20.0), (3.0, 2.0), 0.0),
               Zone("swamp", (20.0, 28.0), (4.0, 2.0), 0.6)],
        max_units=5,
        max_zones=2,
    )
    h = sb.make_batch(as_bytes(cfg), 3, 0)
    assert (h.batch, h.agents, h.obs_dim, h.global_dim) == (3, 5, 99, 91)
    obs, glob, mask = sb.reset(h)
    assert obs.shape == (3, 5, 99)
    assert glob.shape == (3, 91)
    assert mask.shape == (3, 5, 7)


def test_initial_observation_matches_engine_reset():
    cfg = external_duel()
    h = sb.make_batch(as_bytes(cfg), 1, 42)
    r = engine_reset(cfg, derive_seed(42, 0, TAG_EPISODE))
    assert np.array_equal(h.sim.last.observations[0], r.observations)


def test_path_and_bytes_load_identically(tmp_path):
    cfg = external_duel()
    p = tmp_path / "duel.json"
    p.write_text(save_scenario(cfg))
    a = sb.make_batch(as_bytes(cfg), 2, 9)
    b = sb.make_batch(p, 2, 9)
    assert np.array_equal(a.sim.last.observations, b.sim.last.observations)


def test_step_returns_six_arrays():
    h = sb.make_batch(as_bytes(external_duel()), 4, 1)
    acts = np.full((4, 2), ACTION_ROTATE)
    obs, glob, rew, term, trunc, mask = sb.step(h, acts)
    assert obs.shape == (4, 2, h.obs_dim)
    assert glob.shape == (4, h.global_dim)
    assert rew.shape == (4, 2)
    assert term.shape == trunc.shape == (4,)
    assert mask.shape == (4, 2, 7)
    assert not term.any() and not trunc.any()
    assert h.info == {}


def test_auto_reset_keeps_terminal_arrays_in_info():
    # 500 damage one-shots a 60 hp farmer
    h = sb.make_batch(as_bytes(external_duel(ally_damage=500.0)), 1, 5)
    obs, _, rew, term, _, _ = sb.step(h, np.array([[ACTION_ATTACK, ACTION_NOOP]]))
    assert term[0]
    assert rew[0, 0] > 1.0  # dense gap swing plus the terminal +1
    assert h.info["reset_mask"][0]
    # terminal arrays show the kill, the returned row the fresh episode
    assert h.info["final_observation"][0, 1, 0] == 0.0
    assert obs[0, 1, 0] == 1.0
    # the next step belongs to the new episode
    _, _, _, term2, trunc2, _ = sb.step(h, np.array([[ACTION_NOOP, ACTION_NOOP]]))
    assert not term2[0] and not trunc2[0]
    assert h.info == {}


def test_reset_returns_to_the_initial_stream():
    h = sb.make_batch(as_bytes(external_duel()), 2, 13)
    first = h.sim.last.observations.copy()
    sb.step(h, np.full((2, 2), ACTION_ROTATE))
    obs, _, _ = sb.reset(h)
    assert np.array_equal(obs, first)
    assert h.info == {}


def test_handles_are_independent():
    cfg = as_bytes(external_duel())
    a = sb.make_batch(cfg, 2, 3)
    b = sb.make_batch(cfg, 2, 3)
    before = b.sim.last.observations.copy()
    sb.step(a, np.full((2, 2), ACTION_ROTATE))
    assert np.array_equal(b.sim.last.observations, before)
    out_a = sb.step(a, np.full((2, 2), ACTION_ROTATE))
    sb.step(b, np.full((2, 2), ACTION_ROTATE))
    out_b = sb.step(b, np.full((2, 2), ACTION_ROTATE))
    assert np.array_equal(out_a[0], out_b[0])


def test_bad_action_shape_raises():
    h = sb.make_batch(as_bytes(external_duel()), 2, 0)
    with pytest.raises(ValueError, match=r"\[batch, agents\]"):
        sb.step(h, np.zeros((2, 3), dtype=np.int64))


def test_masked_action_raises():
    # farmer vs king: the first attack only dents it but starts the cooldown
    h = sb.make_batch(as_bytes(external_duel(enemy="king")), 1, 0)
    sb.step(h, np.array([[ACTION_ATTACK, ACTION_NOOP]]))
    assert not sb.action_mask(h)[0, 0, ACTION_ATTACK]
    with pytest.raises(sb.ActionMaskError):
        sb.step(h, np.array([[ACTION_ATTACK, ACTION_NOOP]]))


def test_batch_size_must_be_positive():
    with pytest.raises(ValueError, match="batch_size"):
        sb.make_batch(as_bytes(external_duel()), 0, 0)

"""Scenario documents, the built-in catalog, sampling, and mutation."""
from __future__ import annotations

from importlib import resources

import numpy as np
import pytest

from skirmish.core import (
    ScenarioFormatError,
    UnitPlacement,
    Zone,
    parse_composition_name,
    validate_scenario,
)
from skirmish.scenario import (
    LAVA_DAMAGE_RANGE,
    LevelGenSpec,
    MUTATION_OPS,
    SWAMP_MULT_RANGE,
    ZONE_AXIS_RANGE,
    catalog,
    compose_scenario,
    default_level_spec,
    load_catalog_scenario,
    load_scenario,
    load_scenario_file,
    mutate_level,
    random_scenario,
    resolve_scenario,
    sample_level,
    save_scenario,
    save_scenario_file,
    validate_or_raise,
    zone_fragments,
)
from conftest import duel_config

CHALLENGES = {
    "crossfire", "vsrangers", "ambush", "superking", "clover",
    "bypass", "ribbon", "grid", "pingpong", "encirclement",
}
UNIT_SCENARIOS = {
    "1F1M3A1Hvs2F1S1K1A1H",
    "2F1M2Avs2S1K",
    "4F1S1K2A1Pvs2M1C1P",
    "5F1S1A1Dvs7F1S1D1H",
}

MINIMAL_DOC = """{
  "name": "bare",
  "units": [
    {"team": 0, "position": [10.0, 20.0], "preset": "farmer"},
    {"team": 1, "position": [30.0, 20.0], "preset": "farmer"}
  ]
}
"""


class TestRoundTrip:
    def test_save_load_save_is_identity(self):
        cfg = duel_config(zones=[Zone("lava", (20.0, 12.0), (4.0, 2.0), 5.0)])
        text = save_scenario(cfg)
        again = save_scenario(load_scenario(text))
        assert again == text

    def test_catalog_files_are_canonical(self):
        for name in catalog():
            raw = (resources.files("skirmish") / "data" / f"{name}.json").read_text()
            assert save_scenario(load_scenario(raw)) == raw

    def test_random_configs_round_trip(self, rng):
        for _ in range(50):
            cfg = random_scenario(rng)
            text = save_scenario(cfg)
            assert save_scenario(load_scenario(text)) == text

    def test_accepts_bytes(self):
        cfg = load_scenario(MINIMAL_DOC.encode())
        assert cfg.name == "bare"

    def test_file_round_trip(self, tmp_path):
        cfg = duel_config()
        p = tmp_path / "duel.json"
        save_scenario_file(cfg, p)
        loaded = load_scenario_file(p)
        assert save_scenario(loaded) == p.read_text()

    def test_spec_units_round_trip(self):
        cfg = load_catalog_scenario("pingpong")  # carries a kinematic cannon
        text = save_scenario(cfg)
        assert save_scenario(load_scenario(text)) == text


class TestDefaults:
    def test_minimal_document(self):
        cfg = load_scenario(MINIMAL_DOC)
        assert cfg.field.width == 40.0
        assert cfg.physics.dt == 0.1
        assert cfg.max_steps == 400
        assert cfg.max_units == 2
        assert len(cfg.teams) == 2
        assert cfg.teams[1].controller == "heuristic"
        assert cfg.teams[1].heuristic.epsilon == 0.2

    def test_notes_flag_every_gap(self):
        notes = load_scenario(MINIMAL_DOC).load_notes
        assert any("physics missing" in n for n in notes)
        assert any("teams missing" in n for n in notes)
        assert any("max_steps missing" in n for n in notes)

    def test_heuristic_team_without_params(self):
        doc = """{
          "name": "x",
          "teams": [
            {"id": 0, "controller": "external"},
            {"id": 1, "controller": "heuristic"}
          ],
          "units": [
            {"team": 0, "position": [10, 20], "preset": "farmer"},
            {"team": 1, "position": [30, 20], "preset": "farmer"}
          ]
        }"""
        cfg = load_scenario(doc)
        assert cfg.teams[1].heuristic.epsilon == 0.2
        assert any("medium tier applied" in n for n in cfg.load_notes)

    def test_clean_document_has_no_notes(self):
        text = save_scenario(duel_config())
        assert load_scenario(text).load_notes == []


class TestErrors:
    @pytest.mark.parametrize(
        "text,fragment",
        [
            ("{", "malformed JSON at line 1"),
            ('{"name": "x", "units": [], "shape": 1}', "unknown keys ['shape']"),
            ('{"version": 2, "name": "x", "units": []}', "$.version"),
            ('{"units": []}', "$.name"),
            ('{"name": "x"}', "$.units: required array"),
            (
                '{"name": "x", "units": [{"team": 0, "position": [1, 2]}]}',
                "needs preset or spec",
            ),
            (
                '{"name": "x", "units": [{"position": [1, "a"], "preset": "farmer"}]}',
                "$.units[0].position[1]: expected number",
            ),
            (
                '{"name": "x", "units": [{"position": [1, 2], "preset": "farmer",'
                ' "spec": {}}]}',
                "mutually exclusive",
            ),
            (
                '{"name": "x", "teams": [{"id": 0}], "units": []}',
                "expected exactly 2 teams",
            ),
            (
                '{"name": "x", "units": [], "zones": [{"center": [1, 2]}]}',
                "$.zones[0].type",
            ),
            (
                '{"name": "x", "units": [], "physics": {"gravity": 9.8}}',
                "$.physics: unknown keys",
            ),
            (
                '{"name": "x", "units": [], "max_steps": true}',
                "expected integer, got bool",
            ),
            (
                '{"name": "x", "units": [{"position": [1, 2], "preset": "farmer",'
                ' "overrides": {"kinematic": 1}}]}',
                "expected boolean",
            ),
        ],
    )
    def test_messages_carry_paths(self, text, fragment):
        with pytest.raises(ScenarioFormatError) as exc:
            load_scenario(text)
        assert fragment in str(exc.value)

    def test_loading_does_not_validate_semantics(self):
        # structurally fine, semantically broken; the validator owns that
        doc = save_scenario(
            duel_config(zones=[Zone("swamp", (20.0, 20.0), (3.0, 3.0), 2.0)])
        )
        cfg = load_scenario(doc)
        report = validate_scenario(cfg)
        assert not report.ok
        assert any("swamp" in v for v in report.violations)


class TestCatalog:
    def test_names(self):
        assert set(catalog()) == CHALLENGES | UNIT_SCENARIOS

    def test_all_entries_validate(self):
        for name in catalog():
            report = validate_scenario(load_catalog_scenario(name))
            assert report.ok, f"{name}: {report.violations}"

    def test_unknown_name(self):
        with pytest.raises(KeyError):
            load_catalog_scenario("nonesuch")

    def test_fragments_listed(self):
        frags = zone_fragments()
        assert "2L2B2S" in frags
        assert len(frags) >= 3

    def test_ambush_overrides(self):
        cfg = load_catalog_scenario("ambush")
        king = [u for u in cfg.units if u.preset == "king"]
        assert king and king[0].resolved_spec().max_health == 800.0
        assert any(z.type == "bush" for z in cfg.zones)

    def test_stationary_artillery(self):
        cfg = load_catalog_scenario("pingpong")
        cannon = [u for u in cfg.units if u.team == 1][0]
        spec = cannon.resolved_spec()
        assert spec.kinematic and spec.speed == 0.0


class TestComposition:
    def test_resolve_prefers_catalog(self):
        assert resolve_scenario("crossfire").name == "crossfire"

    def test_resolve_composes_fresh_names(self):
        cfg = resolve_scenario("2Fvs2F")
        assert len(cfg.units) == 4
        assert validate_scenario(cfg).ok

    def test_formation_faces_off(self):
        cfg = compose_scenario("3Fvs3F")
        allies = [u for u in cfg.units if u.team == 0]
        enemies = [u for u in cfg.units if u.team == 1]
        assert all(u.heading_deg == 0.0 for u in allies)
        assert all(u.heading_deg == 180.0 for u in enemies)
        assert max(u.position[0] for u in allies) < min(
            u.position[0] for u in enemies
        )

    def test_fragment_zones(self):
        cfg = compose_scenario("2Fvs2F_2L2B2S-1")
        types = sorted(z.type for z in cfg.zones)
        assert types == ["bush", "bush", "lava", "lava", "swamp", "swamp"]

    def test_unknown_variant_is_deterministic(self):
        a = compose_scenario("2Fvs2F_1L1B-zz9")
        b = compose_scenario("2Fvs2F_1L1B-zz9")
        assert save_scenario(a) == save_scenario(b)
        assert validate_scenario(a).ok

    def test_big_teams_stay_inside_the_margin(self):
        cfg = compose_scenario("7F1Mvs8F")
        assert validate_scenario(cfg).ok
        for u in cfg.units:
            r = u.resolved_spec().body_radius
            assert u.position[0] - r >= cfg.field.margin
            assert u.position[1] - r >= cfg.field.margin
            assert u.position[0] + r <= cfg.field.width - cfg.field.margin
            assert u.position[1] + r <= cfg.field.height - cfg.field.margin

    def test_zone_suffix_without_fragment_is_procedural(self):
        cfg = compose_scenario("2Fvs2F_1L")
        assert [z.type for z in cfg.zones] == ["lava"]
        assert save_scenario(cfg) == save_scenario(compose_scenario("2Fvs2F_1L"))

    def test_no_suffix_means_no_zones(self):
        comp = parse_composition_name("2Fvs2F")
        assert compose_scenario(comp).zones == []


class TestLevelGenSpec:
    def test_unknown_category(self):
        with pytest.raises(ValueError, match="unknown category"):
            LevelGenSpec(base=duel_config(), categories=("units",))

    def test_unknown_unit_field(self):
        with pytest.raises(ValueError, match="unknown unit range field"):
            LevelGenSpec(base=duel_config(), unit_ranges={"body_mass": (1, 2)})

    def test_bush_effect_range_rejected(self):
        with pytest.raises(ValueError, match="bush"):
            LevelGenSpec(
                base=duel_config(), zone_effect_ranges={"bush": (0.0, 1.0)}
            )

    def test_inverted_range_rejected(self):
        with pytest.raises(ValueError, match="min > max"):
            LevelGenSpec(base=duel_config(), unit_ranges={"speed": (2.0, 1.0)})

    def test_unknown_zone_type(self):
        with pytest.raises(ValueError, match="unknown zone type"):
            LevelGenSpec(base=duel_config(), zone_types=("mud",))

    def test_ranges_clipped_to_invariants(self):
        spec = LevelGenSpec(
            base=duel_config(),
            unit_ranges={"max_health": (-50.0, 900.0)},
            zone_effect_ranges={"swamp": (0.0, 3.0)},
            epsilon_range=(-1.0, 2.0),
        )
        assert dict(spec.unit_ranges)["max_health"][0] == 1.0
        assert dict(spec.zone_effect_ranges)["swamp"] == (0.01, 1.0)
        assert spec.epsilon_range == (0.0, 1.0)

    def test_default_center_box_respects_margin(self):
        spec = LevelGenSpec(base=duel_config())
        (x0, x1), (y0, y1) = spec.center_box()
        assert (x0, x1) == (2.0, 38.0)
        assert (y0, y1) == (2.0, 38.0)


class TestSampling:
    def test_closed_spec_reproduces_base(self, rng):
        base = duel_config(zones=[Zone("lava", (20.0, 12.0), (4.0, 2.0), 5.0)])
        spec = LevelGenSpec(base=base, categories=())
        out = sample_level(spec, rng)
        assert save_scenario(out) == save_scenario(base)

    def test_samples_stay_in_ranges(self, rng):
        base = duel_config(
            zones=[
                Zone("lava", (20.0, 12.0), (4.0, 2.0), 5.0),
                Zone("bush", (20.0, 28.0), (3.0, 3.0), 0.0),
            ]
        )
        spec = default_level_spec(base)
        for _ in range(40):
            cfg = sample_level(spec, rng)
            assert validate_scenario(cfg).ok
            for u in cfg.units:
                s = u.resolved_spec()
                assert 20.0 <= s.max_health <= 800.0
                assert 0.5 <= s.speed <= 1.5
                assert -10.0 <= s.attack_damage <= 80.0
            for z in cfg.zones:
                assert 2.0 <= z.center[0] <= 38.0
                assert ZONE_AXIS_RANGE[0] <= z.semi_axes[0] <= ZONE_AXIS_RANGE[1]
                if z.type == "lava":
                    assert LAVA_DAMAGE_RANGE[0] <= z.effect <= LAVA_DAMAGE_RANGE[1]
                elif z.type == "swamp":
                    assert SWAMP_MULT_RANGE[0] <= z.effect <= SWAMP_MULT_RANGE[1]
                else:
                    assert z.effect == 0.0
            h = cfg.teams[1].heuristic
            assert 0.0 <= h.epsilon <= 1.0
            assert 0.0 <= h.aggressive_threshold <= 0.7

    def test_sampling_is_deterministic(self):
        base = duel_config(zones=[Zone("lava", (20.0, 12.0), (4.0, 2.0), 5.0)])
        spec = default_level_spec(base)
        a = sample_level(spec, np.random.default_rng(5))
        b = sample_level(spec, np.random.default_rng(5))
        assert save_scenario(a) == save_scenario(b)

    def test_zone_count_is_preserved(self, rng):
        base = duel_config(
            zones=[Zone("lava", (20.0, 12.0), (4.0, 2.0), 5.0)] * 3
        )
        cfg = sample_level(default_level_spec(base), rng)
        assert len(cfg.zones) == 3

    def test_external_teams_keep_no_params(self, rng):
        cfg = sample_level(default_level_spec(duel_config()), rng)
        assert cfg.teams[0].controller == "external"
        assert cfg.teams[0].heuristic is None


class TestMutation:
    BASE = None  # built per test; zones interior to every range

    def _base(self):
        return duel_config(
            zones=[
                Zone("lava", (20.0, 12.0), (4.0, 2.0), 5.0),
                Zone("swamp", (20.0, 28.0), (3.0, 2.0), 0.5),
            ]
        )

    def test_unknown_op(self, rng):
        with pytest.raises(ValueError, match="unknown mutation op"):
            mutate_level(self._base(), "transpose", rng)

    def test_perturb_touches_every_open_parameter(self, rng):
        base = self._base()
        out = mutate_level(base, "perturb", rng, delta=0.05)
        for ub, um in zip(base.units, out.units):
            sb, sm = ub.resolved_spec(), um.resolved_spec()
            assert sm.max_health != sb.max_health
            assert sm.speed != sb.speed
            assert sm.attack_damage != sb.attack_damage
            assert sm.body_radius == sb.body_radius  # closed field untouched
        for zb, zm in zip(base.zones, out.zones):
            assert zm.type == zb.type
            assert zm.center != zb.center
            assert zm.semi_axes != zb.semi_axes
            assert zm.effect != zb.effect
        hb, hm = base.teams[1].heuristic, out.teams[1].heuristic
        assert hm.epsilon != hb.epsilon
        assert hm.aggressive_threshold != hb.aggressive_threshold
        assert validate_scenario(out).ok

    def test_perturb_zero_delta_keeps_all_values(self, rng):
        # presets get their stats spelled out as overrides, but nothing moves
        base = self._base()
        out = mutate_level(base, "perturb", rng, delta=0.0)
        for ub, um in zip(base.units, out.units):
            assert um.resolved_spec() == ub.resolved_spec()
            assert um.position == ub.position
        assert out.zones == base.zones
        assert out.teams == base.teams

    def test_perturb_is_reproducible(self):
        base = self._base()
        a = mutate_level(base, "perturb", np.random.default_rng(3))
        b = mutate_level(base, "perturb", np.random.default_rng(3))
        assert save_scenario(a) == save_scenario(b)

    def test_perturb_respects_bounds(self, rng):
        base = self._base()
        for _ in range(30):
            out = mutate_level(base, "perturb", rng, delta=1.0)
            assert validate_scenario(out).ok
            for z in out.zones:
                if z.type == "swamp":
                    assert 0.0 < z.effect <= 0.8

    def test_swap_axes_swaps_exactly_one_zone(self, rng):
        base = self._base()
        out = mutate_level(base, "swap_axes", rng)
        flipped = [
            m.semi_axes == (b.semi_axes[1], b.semi_axes[0])
            and b.semi_axes[0] != b.semi_axes[1]
            for b, m in zip(base.zones, out.zones)
        ]
        assert sum(flipped) == 1
        for b, m, f in zip(base.zones, out.zones, flipped):
            if not f:
                assert m == b

    def test_retype_redraws_one_zone(self, rng):
        base = self._base()
        for _ in range(20):
            out = mutate_level(base, "retype", rng)
            changed = [
                (b, m) for b, m in zip(base.zones, out.zones) if m != b
            ]
            assert len(changed) <= 1
            for b, m in changed:
                assert m.center == b.center and m.semi_axes == b.semi_axes
                if m.type == "bush":
                    assert m.effect == 0.0
                elif m.type == "lava":
                    assert LAVA_DAMAGE_RANGE[0] <= m.effect <= LAVA_DAMAGE_RANGE[1]
                else:
                    assert SWAMP_MULT_RANGE[0] <= m.effect <= SWAMP_MULT_RANGE[1]
            assert validate_scenario(out).ok

    def test_zone_ops_without_zones_are_identity(self, rng):
        base = duel_config()
        for op in ("swap_axes", "retype"):
            out = mutate_level(base, op, rng)
            assert save_scenario(out) == save_scenario(base)

    def test_all_ops_yield_valid_scenarios(self, rng):
        for _ in range(20):
            base = random_scenario(rng)
            for op in MUTATION_OPS:
                validate_or_raise(mutate_level(base, op, rng))


class TestRandomScenario:
    def test_draws_validate(self, rng):
        for _ in range(30):
            cfg = random_scenario(rng)
            validate_or_raise(cfg)
            assert "vs" in cfg.name

    def test_varied_compositions(self, rng):
        sizes = {len(random_scenario(rng).units) for _ in range(30)}
        assert len(sizes) > 3

"""Contact detection, impulse resolution, and boundary penalty.

The heavy randomized sweeps live in test_acceptance; these pin the worked
cases and the conservation laws on smaller draws.
"""
from __future__ import annotations

import numpy as np
import pytest

from skirmish.core import FieldConfig, PhysicsParams
from skirmish.physics import (
    apply_boundary,
    contact_kernel,
    detect_contacts,
    integrate_kinematics,
    resolve_contacts,
)
from conftest import make_unit
import oracles


def test_integration_straight_line():
    u = make_unit(0.0, 0.0)
    (out,) = integrate_kinematics([u], np.array([[1.1, 0.0]]), 0.1)
    assert out.position == pytest.approx([0.11, 0.0])


def test_integration_zero_velocity():
    u = make_unit(3.0, 4.0)
    (out,) = integrate_kinematics([u], np.array([[0.0, 0.0]]), 0.5)
    assert out.position == pytest.approx([3.0, 4.0])


def test_integration_kinematic_never_moves():
    u = make_unit(3.0, 4.0, kinematic=True)
    (out,) = integrate_kinematics([u], np.array([[5.0, 5.0]]), 0.1)
    assert out.position == pytest.approx([3.0, 4.0])
    assert out.velocity == pytest.approx([0.0, 0.0])


def test_detect_overlap_depth():
    a = make_unit(0.0, 0.0)
    b = make_unit(1.5, 0.0)
    contacts = detect_contacts([a, b])
    assert len(contacts) == 1
    c = contacts[0]
    assert (c.i, c.j) == (0, 1)
    assert c.depth == pytest.approx(0.5)
    assert c.normal == pytest.approx((1.0, 0.0))


def test_detect_touching_is_not_contact():
    a = make_unit(0.0, 0.0)
    b = make_unit(2.0, 0.0)
    assert detect_contacts([a, b]) == []


def test_detect_includes_corpses():
    a = make_unit(0.0, 0.0, alive=False, health=0.0)
    b = make_unit(1.0, 0.0)
    assert len(detect_contacts([a, b])) == 1


def test_detect_excludes_padding():
    a = make_unit(0.0, 0.0, active=False)
    b = make_unit(1.0, 0.0)
    assert detect_contacts([a, b]) == []


def test_detect_coincident_centers():
    a = make_unit(5.0, 5.0)
    b = make_unit(5.0, 5.0)
    (c,) = detect_contacts([a, b])
    assert c.normal == (1.0, 0.0)
    assert c.depth == pytest.approx(2.0)


def test_detect_matches_brute_force(rng):
    for _ in range(60):
        n = 32
        units = [
            make_unit(rng.uniform(0, 12), rng.uniform(0, 12),
                      body_radius=float(rng.uniform(0.3, 2.0)),
                      active=bool(rng.random() > 0.1))
            for _ in range(n)
        ]
        got = [(c.i, c.j, c.normal, c.depth) for c in detect_contacts(units)]
        want = oracles.brute_force_contacts(
            [tuple(u.position) for u in units],
            [u.spec.body_radius for u in units],
            [u.active for u in units],
        )
        assert len(got) == len(want)
        for (gi, gj, gn, gd), (wi, wj, wn, wd) in zip(got, want):
            assert (gi, gj) == (wi, wj)
            assert gn == pytest.approx(wn, abs=1e-12)
            assert gd == pytest.approx(wd, abs=1e-12)


def test_elastic_head_on_exchange():
    phys = PhysicsParams(restitution=1.0)
    a = make_unit(0.0, 0.0, velocity=(1.0, 0.0))
    b = make_unit(1.5, 0.0, velocity=(-1.0, 0.0))
    out = resolve_contacts([a, b], detect_contacts([a, b]), phys)
    assert out[0].velocity == pytest.approx([-1.0, 0.0], abs=1e-12)
    assert out[1].velocity == pytest.approx([1.0, 0.0], abs=1e-12)


def test_momentum_and_energy_random_contacts(rng):
    phys_e = [PhysicsParams(restitution=float(e)) for e in (0.0, 0.5, 1.0)]
    for _ in range(400):
        m1, m2 = rng.uniform(0.5, 20, size=2)
        a = make_unit(0.0, 0.0, body_mass=float(m1),
                      velocity=tuple(rng.uniform(-3, 3, size=2)))
        b = make_unit(float(rng.uniform(0.1, 1.9)), 0.0, body_mass=float(m2),
                      velocity=tuple(rng.uniform(-3, 3, size=2)))
        phys = phys_e[int(rng.integers(3))]
        before_p = oracles.momentum([m1, m2], [a.velocity, b.velocity])
        before_k = oracles.kinetic_energy([m1, m2], [a.velocity, b.velocity])
        out = resolve_contacts([a, b], detect_contacts([a, b]), phys)
        after_p = oracles.momentum([m1, m2], [out[0].velocity, out[1].velocity])
        after_k = oracles.kinetic_energy([m1, m2], [out[0].velocity, out[1].velocity])
        assert after_p[0] == pytest.approx(before_p[0], abs=1e-9)
        assert after_p[1] == pytest.approx(before_p[1], abs=1e-9)
        assert after_k <= before_k + 1e-9


def test_elastic_matches_closed_form(rng):
    phys = PhysicsParams(restitution=1.0)
    for _ in range(200):
        m1, m2 = rng.uniform(0.5, 20, size=2)
        v1, v2 = rng.uniform(-3, 3, size=2)
        if v2 - v1 > 0:  # separating; impulse branch requires approach
            v1, v2 = v2, v1
        a = make_unit(0.0, 0.0, body_mass=float(m1), velocity=(float(v1), 0.0))
        b = make_unit(1.0, 0.0, body_mass=float(m2), velocity=(float(v2), 0.0))
        out = resolve_contacts([a, b], detect_contacts([a, b]), phys)
        u1, u2 = oracles.elastic_head_on(m1, m2, v1, v2)
        assert out[0].velocity[0] == pytest.approx(u1, abs=1e-9)
        assert out[1].velocity[0] == pytest.approx(u2, abs=1e-9)


def test_separating_pair_correction_only():
    # depth 0.5, slop 0.01, alpha 0.8, equal masses: 0.8*0.49/2 = 0.196 each
    phys = PhysicsParams(restitution=0.5, penetration_slop=0.01,
                         correction_percent=0.8)
    a = make_unit(0.0, 0.0, velocity=(-1.0, 0.0))
    b = make_unit(1.5, 0.0, velocity=(1.0, 0.0))
    out = resolve_contacts([a, b], detect_contacts([a, b]), phys)
    assert out[0].velocity == pytest.approx([-1.0, 0.0])
    assert out[1].velocity == pytest.approx([1.0, 0.0])
    assert out[0].position[0] == pytest.approx(-0.196)
    assert out[1].position[0] == pytest.approx(1.5 + 0.196)


def test_penetration_below_slop_no_correction():
    phys = PhysicsParams(penetration_slop=0.05)
    a = make_unit(0.0, 0.0)
    b = make_unit(1.96, 0.0)  # depth 0.04 < slop
    out = resolve_contacts([a, b], detect_contacts([a, b]), phys)
    assert out[0].position[0] == pytest.approx(0.0)
    assert out[1].position[0] == pytest.approx(1.96)


def test_correction_never_overshoots(rng):
    phys = PhysicsParams()
    for _ in range(200):
        gap = float(rng.uniform(0.0, 1.99))
        a = make_unit(0.0, 0.0)
        b = make_unit(gap, 0.0)
        out = resolve_contacts([a, b], detect_contacts([a, b]), phys)
        dist = abs(out[1].position[0] - out[0].position[0])
        # never pushed past separation
        assert dist <= 2.0 + 1e-9


def test_kinematic_exempt():
    phys = PhysicsParams(restitution=1.0)
    wall = make_unit(0.0, 0.0, preset="mammoth", kinematic=True)
    ball = make_unit(4.0, 0.0, velocity=(-2.0, 0.0))
    out = resolve_contacts([wall, ball], detect_contacts([wall, ball]), phys)
    assert out[0].position == pytest.approx([0.0, 0.0])
    assert out[0].velocity == pytest.approx([0.0, 0.0])
    # full reflection off an immovable body
    assert out[1].velocity[0] == pytest.approx(2.0)


def test_two_kinematic_bodies_no_op():
    phys = PhysicsParams()
    a = make_unit(0.0, 0.0, kinematic=True)
    b = make_unit(1.0, 0.0, kinematic=True)
    out = resolve_contacts([a, b], detect_contacts([a, b]), phys)
    assert out[0].position[0] == pytest.approx(0.0)
    assert out[1].position[0] == pytest.approx(1.0)


def test_boundary_penalty_and_clip():
    field = FieldConfig(40.0, 40.0, 2.0)
    phys = PhysicsParams()
    u = make_unit(-0.5, 20.0, max_health=100.0, health=100.0)
    (out,) = apply_boundary([u], field, phys)
    assert out.health == pytest.approx(99.0)
    assert out.position[0] == 0.0


def test_boundary_farmer_damage():
    field = FieldConfig(40.0, 40.0, 2.0)
    phys = PhysicsParams()
    u = make_unit(41.0, 20.0)  # farmer, 60 max health
    (out,) = apply_boundary([u], field, phys)
    assert out.health == pytest.approx(60.0 - 0.6)


def test_boundary_inside_untouched():
    field = FieldConfig(40.0, 40.0, 2.0)
    u = make_unit(20.0, 20.0)
    (out,) = apply_boundary([u], field, PhysicsParams())
    assert out.health == 60.0
    assert out.position == pytest.approx([20.0, 20.0])


def test_boundary_dead_units_keep_health():
    field = FieldConfig(40.0, 40.0, 2.0)
    u = make_unit(-1.0, 20.0, alive=False, health=0.0)
    (out,) = apply_boundary([u], field, PhysicsParams())
    assert out.health == 0.0
    assert out.position[0] == 0.0  # still clipped in


def test_boundary_exact_formula(rng):
    # byte-exact against coeff*h_max*dt in the same operation order
    for _ in range(100):
        hmax = float(rng.uniform(1.0, 1000.0))
        dt = float(rng.uniform(0.01, 0.5))
        phys = PhysicsParams(dt=dt)
        u = make_unit(-1.0, 5.0, max_health=hmax, health=hmax)
        (out,) = apply_boundary([u], FieldConfig(40.0, 40.0, 2.0), phys)
        expected = hmax - float(
            np.float64(0.1) * np.float64(hmax) * np.float64(dt)
        )
        assert out.health == expected


def test_contact_kernel_batched_consistency(rng):
    # one batched call equals per-env calls
    B, N = 6, 8
    pos = rng.uniform(0, 10, size=(B, N, 2))
    radius = rng.uniform(0.4, 1.5, size=(B, N))
    active = rng.random((B, N)) > 0.1
    t, n, d = contact_kernel(pos, radius, active)
    for b in range(B):
        tb, nb, db = contact_kernel(pos[b : b + 1], radius[b : b + 1],
                                    active[b : b + 1])
        assert np.array_equal(t[b], tb[0])
        assert np.array_equal(n[b][t[b]], nb[0][tb[0]])
        assert np.array_equal(d[b][t[b]], db[0][tb[0]])

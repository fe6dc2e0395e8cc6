"""Frozen scalar reference implementations.

Everything here is deliberately naive Python over plain floats: the ground
truth the vectorized kernels are checked against.  Do not import engine code
into this module and do not optimize it.
"""
from __future__ import annotations

import math


def brute_force_contacts(positions, radii, active):
    """All-pairs overlap test; returns [(i, j, (nx, ny), depth)] ascending."""
    out = []
    n = len(positions)
    for i in range(n):
        for j in range(i + 1, n):
            if not (active[i] and active[j]):
                continue
            dx = positions[j][0] - positions[i][0]
            dy = positions[j][1] - positions[i][1]
            dist = math.sqrt(dx * dx + dy * dy)
            rsum = radii[i] + radii[j]
            if dist >= rsum:
                continue
            if dist == 0.0:
                out.append((i, j, (1.0, 0.0), rsum))
            else:
                out.append((i, j, (dx / dist, dy / dist), rsum - dist))
    return out


def momentum(masses, velocities):
    px = sum(m * v[0] for m, v in zip(masses, velocities))
    py = sum(m * v[1] for m, v in zip(masses, velocities))
    return px, py


def kinetic_energy(masses, velocities):
    return sum(0.5 * m * (v[0] ** 2 + v[1] ** 2) for m, v in zip(masses, velocities))


def elastic_head_on(m1, m2, v1, v2):
    """Closed-form 1D elastic collision along the contact line."""
    u1 = ((m1 - m2) * v1 + 2 * m2 * v2) / (m1 + m2)
    u2 = ((m2 - m1) * v2 + 2 * m1 * v1) / (m1 + m2)
    return u1, u2


def fov_contains(pos, heading, sight_angle, sight_range, point):
    """Angle-comparison formulation, independent of the engine's cosine test."""
    dx = point[0] - pos[0]
    dy = point[1] - pos[1]
    dist = math.sqrt(dx * dx + dy * dy)
    if dist > sight_range:
        return False
    if dist == 0.0:
        return True
    dev = abs(math.atan2(dy, dx) - heading)
    dev = dev % (2 * math.pi)
    if dev > math.pi:
        dev = 2 * math.pi - dev
    return dev <= sight_angle / 2.0


def hurtbox_hit(apos, heading, aradius, reach, sight_angle, tpos, tradius):
    """Rotate the target into the attacker frame, then rectangle-circle overlap.

    The rectangle spans x in [0, reach], y in [-aradius, aradius]; the target
    circle must also sit inside the attacker's angular view wedge.
    """
    c, s = math.cos(heading), math.sin(heading)
    dx = tpos[0] - apos[0]
    dy = tpos[1] - apos[1]
    lx = c * dx + s * dy
    ly = -s * dx + c * dy
    qx = min(max(lx, 0.0), reach)
    qy = min(max(ly, -aradius), aradius)
    gap2 = (lx - qx) ** 2 + (ly - qy) ** 2
    if gap2 > tradius * tradius:
        return False
    dist = math.sqrt(dx * dx + dy * dy)
    if dist == 0.0:
        return True
    dev = abs(math.atan2(dy, dx) - heading) % (2 * math.pi)
    if dev > math.pi:
        dev = 2 * math.pi - dev
    return dev <= sight_angle / 2.0


def mean_health_ratio(healths, max_healths):
    if not healths:
        return 0.0
    return sum(h / m for h, m in zip(healths, max_healths)) / len(healths)


def health_gap(ally_h, ally_m, enemy_h, enemy_m):
    return mean_health_ratio(ally_h, ally_m) - mean_health_ratio(enemy_h, enemy_m)

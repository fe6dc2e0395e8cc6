"""Impulse-based 2D circle physics: integration, contacts, boundary."""
from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .core import FieldConfig, PhysicsParams, UnitState


@dataclass(frozen=True)
class Contact:
    """Overlapping circle pair; normal points from unit i toward unit j."""

    i: int
    j: int
    normal: tuple[float, float]
    depth: float


@lru_cache(maxsize=None)
def _pair_indices(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(n, k=1)


def contact_kernel(
    pos: np.ndarray, radius: np.ndarray, active: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All-pairs overlap test over [B,N] state.

    Returns (touching [B,P], normal [B,P,2], depth [B,P]) for the N*(N-1)/2
    pair slots in ascending (i, j) order.  Exactly touching circles do not
    count as contact; coincident centers fall back to a +x normal.
    """
    iu, ju = _pair_indices(pos.shape[1])
    d = pos[:, ju, :] - pos[:, iu, :]  # [B,P,2]
    dist = np.sqrt(d[..., 0] ** 2 + d[..., 1] ** 2)
    rsum = radius[:, iu] + radius[:, ju]
    coincident = dist == 0.0
    depth = np.where(coincident, rsum, rsum - dist)
    safe = np.where(coincident, 1.0, dist)
    normal = np.where(
        coincident[..., None],
        np.array([1.0, 0.0]),
        d / safe[..., None],
    )
    touching = (depth > 0.0) & active[:, iu] & active[:, ju]
    return touching, normal, depth


def resolve_kernel(
    vel: np.ndarray,
    pos: np.ndarray,
    inv_mass: np.ndarray,
    touching: np.ndarray,
    normal: np.ndarray,
    depth: np.ndarray,
    restitution: np.ndarray,
    slop: np.ndarray,
    correction: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Sequential impulse resolution, vectorized over the batch.

    Pairs are processed in ascending (i, j) order; each impulse sees the
    velocities left by earlier pairs.  Positional corrections use the
    detection-time normals and depths and accumulate independently, so
    separating contacts still get de-penetrated.  Kinematic bodies have
    inverse mass 0 and are exempt from both.
    """
    n_units = pos.shape[1]
    iu, ju = _pair_indices(n_units)
    vel = vel.copy()
    shift = np.zeros_like(pos)
    for p in np.nonzero(touching.any(axis=0))[0]:
        i, j = int(iu[p]), int(ju[p])
        inv_i, inv_j = inv_mass[:, i], inv_mass[:, j]
        denom = inv_i + inv_j
        ok = touching[:, p] & (denom > 0.0)
        if not ok.any():
            continue
        safe_denom = np.where(denom > 0.0, denom, 1.0)
        n = normal[:, p]
        rel = ((vel[:, j] - vel[:, i]) * n).sum(axis=-1)
        hit = ok & (rel <= 0.0)
        jm = np.where(hit, -(1.0 + restitution) * rel / safe_denom, 0.0)
        vel[:, i] -= (jm * inv_i)[:, None] * n
        vel[:, j] += (jm * inv_j)[:, None] * n
        corr = np.where(
            ok, correction * np.maximum(depth[:, p] - slop, 0.0) / safe_denom, 0.0
        )
        shift[:, i] -= (corr * inv_i)[:, None] * n
        shift[:, j] += (corr * inv_j)[:, None] * n
    return vel, pos + shift


def boundary_kernel(
    pos: np.ndarray,
    health: np.ndarray,
    alive: np.ndarray,
    active: np.ndarray,
    kinematic: np.ndarray,
    max_health: np.ndarray,
    field_w: np.ndarray,
    field_h: np.ndarray,
    coeff: np.ndarray,
    dt: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Damage units whose center left the field, then clip them back in."""
    w = field_w[:, None]
    h = field_h[:, None]
    x, y = pos[..., 0], pos[..., 1]
    out = (x < 0.0) | (x > w) | (y < 0.0) | (y > h)
    penalty = coeff[:, None] * max_health * dt[:, None]
    health = np.where(
        out & alive & active, np.maximum(health - penalty, 0.0), health
    )
    clipped = np.stack([np.clip(x, 0.0, w), np.clip(y, 0.0, h)], axis=-1)
    movable = (active & ~kinematic)[..., None]
    return np.where(movable, clipped, pos), health


def _pack(units: list[UnitState]):
    n = len(units)
    pos = np.zeros((1, n, 2))
    vel = np.zeros((1, n, 2))
    radius = np.zeros((1, n))
    inv_mass = np.zeros((1, n))
    active = np.zeros((1, n), dtype=bool)
    for k, u in enumerate(units):
        pos[0, k] = u.position
        vel[0, k] = u.velocity
        radius[0, k] = u.spec.body_radius
        inv_mass[0, k] = 0.0 if u.spec.kinematic else 1.0 / u.spec.body_mass
        active[0, k] = u.active
    return pos, vel, radius, inv_mass, active


def integrate_kinematics(
    units: list[UnitState], velocities: np.ndarray, dt: float
) -> list[UnitState]:
    """Advance positions by the given per-unit velocities over dt.

    Kinematic units never move regardless of the commanded velocity.
    """
    out = []
    for k, u in enumerate(units):
        v = np.asarray(velocities[k], dtype=np.float64)
        if u.spec.kinematic or not u.active:
            out.append(replace(u, velocity=np.zeros(2)))
        else:
            out.append(replace(u, position=u.position + v * dt, velocity=v.copy()))
    return out


def detect_contacts(units: list[UnitState]) -> list[Contact]:
    """Overlapping pairs among active units (corpses included), ascending (i, j)."""
    if len(units) < 2:
        return []
    pos, _, radius, _, active = _pack(units)
    touching, normal, depth = contact_kernel(pos, radius, active)
    iu, ju = _pair_indices(len(units))
    contacts = []
    for p in np.nonzero(touching[0])[0]:
        contacts.append(
            Contact(
                i=int(iu[p]),
                j=int(ju[p]),
                normal=(float(normal[0, p, 0]), float(normal[0, p, 1])),
                depth=float(depth[0, p]),
            )
        )
    return contacts


def resolve_contacts(
    units: list[UnitState], contacts: list[Contact], physics: PhysicsParams
) -> list[UnitState]:
    """Apply impulses and positional corrections for the given contacts."""
    n = len(units)
    pos, vel, _, inv_mass, _ = _pack(units)
    iu, ju = _pair_indices(n)
    n_pairs = len(iu)
    slot = {(int(iu[p]), int(ju[p])): p for p in range(n_pairs)}
    touching = np.zeros((1, n_pairs), dtype=bool)
    normal = np.zeros((1, n_pairs, 2))
    depth = np.zeros((1, n_pairs))
    for c in contacts:
        p = slot[(c.i, c.j)]
        touching[0, p] = True
        normal[0, p] = c.normal
        depth[0, p] = c.depth
    new_vel, new_pos = resolve_kernel(
        vel,
        pos,
        inv_mass,
        touching,
        normal,
        depth,
        np.array([physics.restitution]),
        np.array([physics.penetration_slop]),
        np.array([physics.correction_percent]),
    )
    out = []
    for k, u in enumerate(units):
        out.append(replace(u, position=new_pos[0, k], velocity=new_vel[0, k]))
    return out


def apply_boundary(
    units: list[UnitState], field: FieldConfig, physics: PhysicsParams
) -> list[UnitState]:
    """Out-of-field penalty proportional to max health, then position clip."""
    n = len(units)
    pos, _, _, _, active = _pack(units)
    health = np.array([[u.health for u in units]])
    alive = np.array([[u.alive for u in units]])
    kinematic = np.array([[u.spec.kinematic for u in units]])
    max_health = np.array([[u.spec.max_health for u in units]])
    new_pos, new_health = boundary_kernel(
        pos,
        health,
        alive,
        active,
        kinematic,
        max_health,
        np.array([field.width]),
        np.array([field.height]),
        np.array([physics.boundary_damage_coeff]),
        np.array([physics.dt]),
    )
    out = []
    for k, u in enumerate(units):
        out.append(replace(u, position=new_pos[0, k], health=float(new_health[0, k])))
    return out

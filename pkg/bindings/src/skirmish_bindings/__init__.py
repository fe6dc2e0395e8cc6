"""Batch bindings for external trainers.

A BatchHandle owns a persistent batch of environments built from one
scenario document.  step() takes a [batch, agents] action array and hands
back plain numpy arrays; environments that finish restart in place with
deterministically derived seeds, and the observation their final step
produced stays available in handle.info.

A handle must not be shared between threads; distinct handles are fully
independent.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from skirmish import (
    ActionMaskError,
    BatchSim,
    TAG_EPISODE,
    derive_seed,
    load_scenario,
    load_scenario_file,
)

__all__ = [
    "ActionMaskError",
    "BatchHandle",
    "action_mask",
    "make_batch",
    "reset",
    "step",
]


@dataclass
class BatchHandle:
    """A batch of identically configured environments plus its bookkeeping."""

    sim: BatchSim
    batch: int
    agents: int
    obs_dim: int
    global_dim: int
    seed: int
    info: dict = field(default_factory=dict)


def _fresh_sim(configs, seed: int, batch: int) -> BatchSim:
    # environment b always draws episode seed b of the run: results don't
    # depend on how many other environments ride along
    seeds = [derive_seed(seed, b, TAG_EPISODE) for b in range(batch)]
    return BatchSim(configs, seeds=seeds, auto_reset=True)


def make_batch(scenario, batch_size: int, seed: int) -> BatchHandle:
    """Build a handle from a scenario document (bytes) or a file path."""
    if isinstance(scenario, (bytes, bytearray)):
        config = load_scenario(bytes(scenario))
    else:
        config = load_scenario_file(os.fspath(scenario))
    if batch_size < 1:
        raise ValueError("batch_size must be at least 1")
    sim = _fresh_sim([config] * batch_size, seed, batch_size)
    out = sim.last
    return BatchHandle(
        sim=sim,
        batch=batch_size,
        agents=out.observations.shape[1],
        obs_dim=out.observations.shape[2],
        global_dim=out.global_state.shape[1],
        seed=seed,
    )


def reset(handle: BatchHandle):
    """Restart every environment from the handle's seed stream.

    Returns (observations, global_state, action_mask).
    """
    handle.sim = _fresh_sim(list(handle.sim.configs), handle.seed, handle.batch)
    handle.info = {}
    out = handle.sim.last
    return out.observations, out.global_state, out.action_mask


def step(handle: BatchHandle, actions: np.ndarray):
    """Advance every environment by one tick.

    Returns (observations, global_state, rewards, terminated, truncated,
    action_mask); rewards are per unit, ally-signed.  Rows of finished
    environments already show the next episode; their terminal arrays are
    kept in handle.info under "final_observation" and "final_global_state",
    with "reset_mask" marking the rows that restarted.

    Raises ValueError on a mis-shaped action array and ActionMaskError when
    an action is invalid under the current mask.
    """
    actions = np.asarray(actions)
    if actions.shape != (handle.batch, handle.agents):
        raise ValueError(
            f"actions shape {actions.shape} does not match [batch, agents] "
            f"= ({handle.batch}, {handle.agents})"
        )
    out = handle.sim.step(actions)
    if out.final_observations is not None:
        handle.info = {
            "reset_mask": out.done.copy(),
            "final_observation": out.final_observations,
            "final_global_state": out.final_global_state,
        }
    else:
        handle.info = {}
    return (
        out.observations,
        out.global_state,
        out.rewards,
        out.terminated,
        out.truncated,
        out.action_mask,
    )


def action_mask(handle: BatchHandle) -> np.ndarray:
    """Current [batch, agents, num_actions] validity mask."""
    return handle.sim.last.action_mask

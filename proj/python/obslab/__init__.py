"""Python front end of the obslab core.

Reports come back as plain dicts; control sets and modal states are passed
as dicts in the same JSON layout the command line tool reads.
"""

import json

import numpy as np

from . import _core
from ._core import (
    NumericalError,
    ball_exp_integral,
    bessel_j,
    brute_force_gap,
    first_bessel_zero,
    gap,
    gram_matrix,
    ingham_c,
    lifted_lattice,
    obs_gramian,
    schrodinger_heat_gap,
    smallest_eigenvalue,
    tail_mass,
)

__version__ = _core.__version__


def run(kind, params, seed=0, threads=1):
    return json.loads(_core.run(kind, json.dumps(params), seed, threads))


def validate(kind, params):
    return _core.validate(kind, json.dumps(params))


def indicator(control_set, x):
    return _core.indicator(json.dumps(control_set), np.asarray(x, dtype=float))


def thickness_check(control_set, rho, centers_per_axis=16, mc_samples=4096, seed=0):
    return json.loads(_core.thickness_check(json.dumps(control_set), rho, centers_per_axis, mc_samples, seed))


def gcc_check(control_set, length, direction_samples=32, offset_samples=64, line_resolution=512):
    return json.loads(_core.gcc_check(json.dumps(control_set), length, direction_samples,
                                      offset_samples, line_resolution))


def eigenbasis(theta, cutoff):
    return _core.eigenbasis(list(theta), cutoff)


def propagate(state, t):
    return json.loads(_core.propagate(json.dumps(state), t))


def restrict_mass(state, radius):
    return _core.restrict_mass(json.dumps(state), radius)


def floquet_roundtrip(dimension, cells_per_axis, grid_per_axis, values):
    """Returns (||u||^2, ||F u||^2, max round-trip error)."""
    return _core.floquet_roundtrip(dimension, cells_per_axis, grid_per_axis,
                                   list(np.asarray(values, dtype=complex).ravel()))


def decompose(theta, cutoff, radius, c):
    return json.loads(_core.decompose(list(theta), cutoff, radius, c))


def ingham_certify(points, radius, c, delta):
    return json.loads(_core.ingham_certify(np.asarray(points, dtype=float), radius, c, delta))


def theta_sweep(dimension, T, radius, cutoff, theta_n):
    return json.loads(_core.theta_sweep(dimension, T, radius, cutoff, theta_n))


def hum_control(state, T, radius, time_steps=512):
    return json.loads(_core.hum_control(json.dumps(state), T, radius, time_steps))


def heat_observation(nu, center, control_set, T):
    return _core.heat_observation(nu, np.asarray(center, dtype=float), json.dumps(control_set), T)


def observability_quotient(nu, center, control_set, T, E):
    return json.loads(_core.observability_quotient(nu, np.asarray(center, dtype=float),
                                                   json.dumps(control_set), T, E))


def thickness_schedule(dimension, T, epsilon, base_radius=1.0, steps=4):
    return json.loads(_core.thickness_schedule(dimension, T, epsilon, base_radius, steps))

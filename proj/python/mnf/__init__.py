"""Python wrapper around the C++ meta navigation function core."""

import json

from . import _mnf

ScenarioError = _mnf.ScenarioError
NumericalFault = _mnf.NumericalFault


def _text(scenario):
    return scenario if isinstance(scenario, str) else json.dumps(scenario)


def generate(n_agents, n_obstacles, width=30.0, height=15.0, seed=1, coalitions=1):
    return json.loads(_mnf.generate(n_agents, n_obstacles, width, height, seed, coalitions))


def validate(scenario):
    """List of violation messages; empty when the scenario is valid."""
    return _mnf.validate(_text(scenario))


def density(scenario):
    return _mnf.density(_text(scenario))


def psi(scenario, index, q, alpha=None):
    """Confined function of agent `index` with every agent at its start."""
    return _mnf.psi(_text(scenario), index, q, alpha)


def grad_psi(scenario, index, q, alpha=None):
    return _mnf.grad_psi(_text(scenario), index, q, alpha)


def omega(q, qt, beta):
    return _mnf.omega(q, qt, beta)


def grad_omega(q, qt, beta):
    return _mnf.grad_omega(q, qt, beta)


def confinement_radius(scenario, index):
    return _mnf.confinement_radius(_text(scenario), index)


def solve_alpha_dagger(scenario, index):
    return json.loads(_mnf.solve_alpha_dagger(_text(scenario), index))


def kappa(mnf_times, dnf_times):
    return _mnf.kappa(list(mnf_times), list(dnf_times))


def run(scenario, mode="mnf", max_steps=20000, dnf_k=None):
    """Returns (metrics dict, trajectories CSV text)."""
    metrics, csv = _mnf.run(_text(scenario), mode, max_steps, dnf_k)
    return json.loads(metrics), csv


def compare(scenario, max_steps=20000):
    return json.loads(_mnf.compare(_text(scenario), max_steps))

"""Generalized Lotka-Volterra dynamics and a fixed-step RK4 integrator."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence, TextIO

import numpy as np

from .errors import DimensionMismatch, ModelError, NegativePopulation, NonFiniteState, NonPositivePopulation
from .model import InteractionParams, PopulationState, SpeciesSet

NEGATIVE_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Samples of a population vector; ``states[k]`` is the population at ``times[k]``."""

    times: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        states = np.asarray(self.states, dtype=float)
        if states.ndim == 1:
            states = states[:, None]
        if times.ndim != 1 or states.shape[0] != times.shape[0]:
            raise DimensionMismatch(f"{times.shape[0]} times but {states.shape[0]} states")
        if np.any(np.diff(times) <= 0):
            raise ModelError("trajectory times must be strictly increasing")
        if not np.all(np.isfinite(states)):
            raise ModelError("trajectory contains non-finite populations")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    def __len__(self):
        return self.times.shape[0]

    def column(self, i: int) -> "Trajectory":
        return Trajectory(self.times, self.states[:, i])

    def total(self) -> "Trajectory":
        return Trajectory(self.times, self.states.sum(axis=1))

    def write_csv(self, out: TextIO, labels: Sequence[str] | None = None, with_total: bool = False):
        """Write ``t,N_1,...,N_k``; ``with_total`` appends the row sum (use with labels N_p,N_d,N_T)."""
        k = self.states.shape[1]
        if labels is None:
            labels = [f"N_{i + 1}" for i in range(k)] + (["N_T"] if with_total else [])
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["t", *labels])
        for t, row in zip(self.times, self.states):
            values = list(row) + ([row.sum()] if with_total else [])
            writer.writerow([f"{t:.12g}", *(f"{v:.12g}" for v in values)])


def _check_dims(populations, system: SpeciesSet) -> np.ndarray:
    n = np.asarray(populations, dtype=float)
    if n.shape != (system.count,):
        raise DimensionMismatch(f"expected {system.count} populations, got shape {n.shape}")
    return n


def lv_rhs(populations, system: SpeciesSet) -> np.ndarray:
    """``dN_i/dt = eps_i N_i + (1/beta_i) sum_{j<kappa} alpha[j,i] N_j N_i``."""
    n = _check_dims(populations, system)
    k = system.kappa
    field = n[:k] @ system.alpha[:k, :]
    return n * (system.eps + field / system.beta)


def total_population_rate(state: PopulationState, params: InteractionParams) -> float:
    """Rate of change of the total density from the two-role expanded rate equation.

    The same-role terms enter with their own sign and the cross term as
    ``-2 alpha_pd N_p N_d``, all scaled by ``1/beta_p``. No coordination
    number prefactor is applied.
    """
    n_p, n_d = state.n_p, state.n_d
    linear = params.eps_p * n_p + params.eps_d * n_d
    quadratic = params.alpha_pp * n_p * n_p + params.alpha_dd * n_d * n_d - 2.0 * params.alpha_pd * n_p * n_d
    return linear + quadratic / params.beta_p


def _rk4_step(f, y, h):
    k1 = f(y)
    k2 = f(y + 0.5 * h * k1)
    k3 = f(y + 0.5 * h * k2)
    k4 = f(y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(system: SpeciesSet, initial, t_end: float, step: float) -> Trajectory:
    """Classical fourth-order Runge-Kutta with a fixed step.

    The last step is shortened when ``t_end`` is not a multiple of ``step``.
    Populations are never clamped: a component below ``-1e-12`` raises
    :class:`NegativePopulation`, a non-finite one :class:`NonFiniteState`.
    """
    if not step > 0:
        raise ModelError(f"step must be positive, got {step}")
    if not t_end > 0:
        raise ModelError(f"t_end must be positive, got {t_end}")
    y = _check_dims(initial, system).copy()
    if np.any(y < 0) or not np.all(np.isfinite(y)):
        raise ModelError("initial populations must be finite and non-negative")

    n_full = int(math.floor(t_end / step + 1e-9))
    times = [k * step for k in range(n_full + 1)]
    if t_end - times[-1] > 1e-9 * step:
        times.append(t_end)

    f = lambda v: lv_rhs(v, system)  # noqa: E731
    states = np.empty((len(times), system.count))
    states[0] = y
    for k in range(1, len(times)):
        y = _rk4_step(f, y, times[k] - times[k - 1])
        if not np.all(np.isfinite(y)):
            raise NonFiniteState(times[k])
        neg = np.flatnonzero(y < -NEGATIVE_TOLERANCE)
        if neg.size:
            raise NegativePopulation(times[k], int(neg[0]))
        states[k] = y
    return Trajectory(np.array(times), states)


def _classic_coefficients(system: SpeciesSet):
    if system.count != 2:
        raise DimensionMismatch("the first integral is defined for two-species systems only")
    if system.alpha[0, 0] != 0 or system.alpha[1, 1] != 0 or system.kappa != 2:
        raise ModelError("the first integral needs zero self-interaction and no truncation")
    # x' = x (a - b y), y' = y (-c + d x)
    a = system.eps[0]
    b = -system.alpha[1, 0] / system.beta[0]
    c = -system.eps[1]
    d = system.alpha[0, 1] / system.beta[1]
    return a, b, c, d


def conserved_quantity(state, system: SpeciesSet) -> float:
    """First integral ``d x - c ln x + b y - a ln y`` of the two-species system."""
    x, y = (float(v) for v in state)
    if not (x > 0 and y > 0):
        raise NonPositivePopulation(f"first integral needs positive populations, got ({x}, {y})")
    a, b, c, d = _classic_coefficients(system)
    return d * x - c * math.log(x) + b * y - a * math.log(y)


def fixed_point(system: SpeciesSet) -> np.ndarray:
    """Coexistence equilibrium ``(c/d, a/b)`` of the two-species system."""
    a, b, c, d = _classic_coefficients(system)
    return np.array([c / d, a / b])


def conserved_drift(trajectory: Trajectory, system: SpeciesSet) -> float:
    """Largest ``|V(t) - V(0)| / |V(0)|`` along a trajectory."""
    values = [conserved_quantity(s, system) for s in trajectory.states]
    v0 = values[0]
    return max(abs(v - v0) for v in values) / abs(v0)


def first_return_time(trajectory: Trajectory, species: int = 1) -> float:
    """Time at which ``species`` first re-crosses its initial value in the initial direction.

    For a closed two-species orbit this is one period. Crossings are located
    by linear interpolation between samples.
    """
    t = trajectory.times
    x = trajectory.states[:, species]
    x0 = x[0]
    rising = x[1] > x0
    rel = x - x0 if rising else x0 - x
    # skip the first half-excursion: wait until the series has moved to the other side
    below = np.flatnonzero(rel[1:] < 0)
    if below.size == 0:
        raise ModelError("trajectory never turns back; integrate for longer")
    start = below[0] + 1
    ups = np.flatnonzero((rel[start:-1] < 0) & (rel[start + 1 :] >= 0))
    if ups.size == 0:
        raise ModelError("trajectory does not complete a cycle; integrate for longer")
    k = start + ups[0]
    frac = -rel[k] / (rel[k + 1] - rel[k])
    return float(t[k] + frac * (t[k + 1] - t[k]))

"""Weiss-style mean-field parameters, frozen-field solutions and field estimation."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .dynamics import Trajectory, _check_dims
from .errors import FewerThanTwoSamples, ModelError, NonPositiveCount, ParseError
from .model import InteractionParams, PopulationState, SpeciesSet


@dataclass(frozen=True, eq=False)
class MeanFieldSummary:
    """Per-species effective fields at one instant.

    ``t_cm = eps + t_eff / beta``; ``omega`` is the part of the per-capita
    growth rate contributed by interactions (``t_eff / beta``), and
    ``omega_total`` its sum over species.
    """

    t_eff: np.ndarray
    t_cm: np.ndarray
    omega: np.ndarray
    omega_total: float


def t_eff(species_index: int, populations, system: SpeciesSet) -> float:
    """Effective interaction field felt by one species, truncated to the first ``kappa`` species."""
    n = _check_dims(populations, system)
    if not 0 <= species_index < system.count:
        raise IndexError(f"species index {species_index} out of range for {system.count} species")
    k = system.kappa
    return float(system.alpha[:k, species_index] @ n[:k])


def t_eff_two_role(state: PopulationState, params: InteractionParams) -> tuple[float, float]:
    """``(T_eff_p, T_eff_d)`` for the prey and predator roles."""
    t_p = params.alpha_dp * state.n_d + params.alpha_pp * state.n_p
    t_d = params.alpha_pd * state.n_p + params.alpha_dd * state.n_d
    return t_p, t_d


def mean_field_summary(populations, system: SpeciesSet) -> MeanFieldSummary:
    n = _check_dims(populations, system)
    fields = np.array([t_eff(i, n, system) for i in range(system.count)])
    omega = fields / system.beta
    return MeanFieldSummary(
        t_eff=fields,
        t_cm=system.eps + omega,
        omega=omega,
        omega_total=float(omega.sum()),
    )


def mean_field_rate(populations, system: SpeciesSet) -> np.ndarray:
    """``T_cm_i * N_i`` for every species; the total rate is the sum."""
    n = _check_dims(populations, system)
    return mean_field_summary(n, system).t_cm * n


def frozen_field_solution(initial, eps, omega, t: float) -> np.ndarray:
    """Exponential growth under fields held constant: ``N0 * exp((eps + omega) t)``."""
    if t < 0:
        raise ModelError(f"t must be non-negative, got {t}")
    n0 = np.asarray(initial, dtype=float)
    rate = np.asarray(eps, dtype=float) + np.asarray(omega, dtype=float)
    return n0 * np.exp(rate * t)


def association_eps(eps, initial) -> float:
    """Population-weighted mean growth rate at the initial time, used for the total series."""
    eps = np.asarray(eps, dtype=float)
    n0 = np.asarray(initial, dtype=float)
    return float(eps @ n0 / n0.sum())


@dataclass(frozen=True, eq=False)
class OmegaEstimate:
    t_start: np.ndarray
    t_end: np.ndarray
    omega: np.ndarray

    @property
    def mean(self) -> float:
        return float(self.omega.mean())

    def write_csv(self, out: TextIO):
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["t_start", "t_end", "omega_hat"])
        for row in zip(self.t_start, self.t_end, self.omega):
            writer.writerow([f"{v:.12g}" for v in row])


def estimate_omega(series, eps: float, times=None) -> OmegaEstimate:
    """Per-interval field estimate ``(ln N(t_{k+1}) - ln N(t_k)) / dt - eps``.

    ``series`` is a single-column :class:`Trajectory`, or an array of counts
    with ``times`` given separately.
    """
    if isinstance(series, Trajectory):
        if series.states.shape[1] != 1:
            raise ModelError("estimate_omega takes a single population series; use Trajectory.column()")
        times, counts = series.times, series.states[:, 0]
    else:
        times = np.asarray(times, dtype=float)
        counts = np.asarray(series, dtype=float)
    if counts.shape[0] < 2:
        raise FewerThanTwoSamples(f"need at least two samples, got {counts.shape[0]}")
    bad = np.flatnonzero(~(counts > 0))
    if bad.size:
        raise NonPositiveCount(float(times[bad[0]]))
    dt = np.diff(times)
    # log of the ratio keeps precision when counts are large and intervals short
    omega = np.log(counts[1:] / counts[:-1]) / dt - eps
    return OmegaEstimate(times[:-1].copy(), times[1:].copy(), omega)


def read_series_csv(source: TextIO) -> tuple[list[str], Trajectory]:
    """Parse a ``t,<col>,...`` CSV into column labels and a trajectory."""
    reader = csv.reader(source)
    header = None
    times, rows = [], []
    for row in reader:
        if not row or all(not c.strip() for c in row):
            continue
        cells = [c.strip() for c in row]
        if header is None:
            if cells[0] != "t" or len(cells) < 2:
                raise ParseError(reader.line_num, "header must start with 't' followed by series columns")
            header = cells
            continue
        if len(cells) != len(header):
            raise ParseError(reader.line_num, f"expected {len(header)} fields, got {len(cells)}")
        try:
            values = [float(c) for c in cells]
        except ValueError as exc:
            raise ParseError(reader.line_num, str(exc)) from exc
        times.append(values[0])
        rows.append(values[1:])
    if header is None:
        raise ParseError(1, "empty series file")
    if not rows:
        raise FewerThanTwoSamples("series file has no data rows")
    return header[1:], Trajectory(np.array(times), np.array(rows))

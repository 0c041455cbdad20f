"""Parameter sweeps of psi(L) over scenarios, coordination numbers and densities."""
from __future__ import annotations

import csv
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence, TextIO

import numpy as np

from .bragg_williams import EXTENDED, THEORETICAL, bw_coefficients, grid, psi_bw
from .errors import ModelError, NonPositiveGestation, RangeViolation, SingularForm
from .model import InteractionParams, validate_params

log = logging.getLogger(__name__)

CARTESIAN = "cartesian"
ZIPPED = "zipped"
DEFAULT_L_RANGE = (0.0, 50.0, 0.1)
# the mid-range scenario row (alpha_pp = 0.6), 1-based
DEFAULT_SCENARIO = 3


def growth_rates_from_gestation(taus: Sequence[float]) -> float:
    """Growth rate as the sum of reciprocal gestation periods over neighbouring species."""
    taus = list(taus)
    if not taus:
        raise NonPositiveGestation("no gestation periods given")
    for tau in taus:
        if not tau > 0:
            raise NonPositiveGestation(f"gestation period must be positive, got {tau}")
    return sum(1.0 / tau for tau in taus)


@dataclass(frozen=True)
class SweepSpec:
    l_range: tuple[float, float, float] = DEFAULT_L_RANGE
    gamma_values: tuple[int, ...] = (3,)
    n_t_values: tuple[float, ...] = (4.1,)
    scenario_indices: tuple[int, ...] = (DEFAULT_SCENARIO,)
    pairing_mode: str = CARTESIAN
    per_capita: bool = False
    domain: str = EXTENDED

    def __post_init__(self):
        start, stop, step = self.l_range
        if not step > 0:
            raise ModelError(f"L step must be positive, got {step}")
        if not start < stop:
            raise ModelError(f"L range start {start} must be below stop {stop}")
        for name in ("gamma_values", "n_t_values", "scenario_indices"):
            if len(getattr(self, name)) == 0:
                raise ModelError(f"{name} must not be empty")
        if self.pairing_mode not in (CARTESIAN, ZIPPED):
            raise ModelError(f"unknown pairing mode {self.pairing_mode!r}")
        if self.pairing_mode == ZIPPED and len(self.gamma_values) != len(self.n_t_values):
            raise ModelError("zipped pairing needs as many gamma values as n_t values")
        if self.domain not in (THEORETICAL, EXTENDED):
            raise ModelError(f"unknown domain {self.domain!r}")
        if self.domain == THEORETICAL and (start < -1.0 or stop > 1.0):
            raise RangeViolation("L", (start, stop), "[-1, 1] in theoretical mode")

    def l_values(self) -> np.ndarray:
        return grid(*self.l_range)

    def gamma_nt_pairs(self) -> list[tuple[int, float]]:
        if self.pairing_mode == ZIPPED:
            return list(zip(self.gamma_values, self.n_t_values))
        return [(g, n) for g in self.gamma_values for n in self.n_t_values]

    @classmethod
    def from_json(cls, source: TextIO) -> "SweepSpec":
        raw = json.load(source)
        known = {"l_range", "gamma_values", "n_t_values", "scenario_indices", "pairing_mode", "per_capita", "domain"}
        unknown = set(raw) - known
        if unknown:
            raise ModelError(f"unknown sweep spec key(s): {', '.join(sorted(unknown))}")
        for key in ("l_range", "gamma_values", "n_t_values", "scenario_indices"):
            if key in raw:
                raw[key] = tuple(raw[key])
        return cls(**raw)


_FIG3_NT = tuple(float(x) for x in np.linspace(410.0, 41.0, 5))

PRESETS = {
    "fig1": SweepSpec(gamma_values=(1, 2, 3, 4, 5), n_t_values=(4.1,)),
    "fig2": SweepSpec(gamma_values=(3,), n_t_values=tuple(41.0 * k for k in range(1, 11)), per_capita=True),
    "fig3a": SweepSpec(gamma_values=(1, 2, 3, 4, 5), n_t_values=_FIG3_NT, pairing_mode=ZIPPED),
    "fig3b": SweepSpec(gamma_values=(5, 4, 3, 2, 1), n_t_values=_FIG3_NT, pairing_mode=ZIPPED),
    "fig4": SweepSpec(gamma_values=(3,), n_t_values=(41.0,), scenario_indices=(1, 2, 3, 4, 5)),
}


@dataclass(frozen=True)
class SweepRow:
    scenario: int
    gamma: int
    n_t: float
    l: float
    psi: float

    @property
    def psi_per_capita(self) -> float:
        return self.psi / self.n_t if self.n_t else float("nan")


@dataclass
class SweepResult:
    rows: list[SweepRow]
    skipped: list[tuple[int, str]] = field(default_factory=list)


def _evaluate_chunk(task):
    form, n_t, l_values = task
    return [psi_bw(l, n_t, form) for l in l_values]


def _chunks(curves, l_values, n_chunks):
    """Split every (curve, L) point into contiguous tasks of roughly equal size."""
    per_curve = max(1, -(-len(l_values) * len(curves) // max(1, n_chunks)))
    per_curve = min(per_curve, len(l_values))
    tasks = []
    for form, n_t in curves:
        for lo in range(0, len(l_values), per_curve):
            tasks.append((form, n_t, l_values[lo : lo + per_curve]))
    return tasks


def run_sweep(
    spec: SweepSpec,
    scenarios: Sequence[InteractionParams],
    out: TextIO | None = None,
    workers: int = 1,
) -> SweepResult:
    """Evaluate psi(L) for every (scenario, gamma, n_t, L) combination.

    Rows come out ordered scenario, gamma/n_t pair, L regardless of
    ``workers``; each value is computed independently, so output is
    bit-identical for any worker count. Scenarios with a singular prey form
    are skipped and logged once.
    """
    l_values = [float(x) for x in spec.l_values()]
    pairs = spec.gamma_nt_pairs()

    keys, curves, skipped = [], [], []
    for idx in spec.scenario_indices:
        if not 1 <= idx <= len(scenarios):
            raise ModelError(f"scenario index {idx} out of range 1..{len(scenarios)}")
        base = scenarios[idx - 1]
        try:
            validate_params(base)
            forms = [(g, n_t, bw_coefficients(base.replace(gamma=int(g)))) for g, n_t in pairs]
        except (SingularForm, RangeViolation) as exc:
            log.warning("skipping scenario %d: %s", idx, exc)
            skipped.append((idx, str(exc)))
            continue
        for g, n_t, form in forms:
            keys.append((idx, int(g), float(n_t)))
            curves.append((form, float(n_t)))

    if workers > 1 and curves:
        tasks = _chunks(curves, l_values, workers * 4)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = [v for chunk in pool.map(_evaluate_chunk, tasks) for v in chunk]
    else:
        values = [v for curve in curves for v in _evaluate_chunk((*curve, l_values))]

    rows = []
    it = iter(values)
    for idx, g, n_t in keys:
        for l in l_values:
            rows.append(SweepRow(idx, g, n_t, l, next(it)))
    result = SweepResult(rows, skipped)
    if out is not None:
        write_sweep_csv(result.rows, out, per_capita=spec.per_capita)
    return result


SWEEP_HEADER = ("scenario", "gamma", "n_t", "L", "psi")


def write_sweep_csv(rows: Iterable[SweepRow], out: TextIO, per_capita: bool = False):
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SWEEP_HEADER + (("psi_per_capita",) if per_capita else ()))
    for r in rows:
        cells = [str(r.scenario), str(r.gamma), f"{r.n_t:.12g}", f"{r.l:.12g}", f"{r.psi:.12g}"]
        if per_capita:
            cells.append(f"{r.psi_per_capita:.12g}")
        writer.writerow(cells)


def preset(name: str, **overrides) -> SweepSpec:
    try:
        spec = PRESETS[name]
    except KeyError:
        raise ModelError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    return replace(spec, **overrides) if overrides else spec

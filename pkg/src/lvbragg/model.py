"""Domain types, parameter validation and scenario/constant file loading."""
from __future__ import annotations

import csv
import dataclasses
import io
import math
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Mapping, TextIO

import numpy as np

from .errors import AntisymmetryViolation, DimensionMismatch, ModelError, ParseError, RangeViolation

SCENARIO_COLUMNS = ("alpha_pp", "alpha_dd", "lambda1", "lambda2", "xi_p", "xi_d")


@dataclass(frozen=True)
class InteractionParams:
    """Ecological parameter set of a two-role (prey ``p`` / predator ``d``) association.

    Encounter coefficients are per individual per month, growth rates per
    month. The predator-on-prey coefficient ``alpha_dp`` is not stored: it is
    always ``-alpha_pd``.
    """

    gamma: int = 3
    alpha_pp: float = 0.0
    alpha_dd: float = 0.0
    alpha_pd: float = 0.0
    beta_p: float = 1.0
    beta_d: float = 1.0
    lambda1: float = 1.0
    lambda2: float = 1.0
    xi_p: float = 1.0
    xi_d: float = 1.0
    nu: float = 1.0
    phi: float = 0.0
    eps_p: float = 0.0
    eps_d: float = 0.0

    @property
    def alpha_dp(self) -> float:
        return -self.alpha_pd

    @classmethod
    def from_mapping(cls, values: Mapping[str, float]) -> "InteractionParams":
        """Build from a plain mapping; an explicit ``alpha_dp`` must equal ``-alpha_pd``."""
        values = dict(values)
        if "alpha_dp" in values:
            alpha_dp = float(values.pop("alpha_dp"))
            if alpha_dp != -float(values.get("alpha_pd", 0.0)):
                raise AntisymmetryViolation(
                    f"alpha_dp={alpha_dp} must equal -alpha_pd={-float(values.get('alpha_pd', 0.0))}"
                )
        unknown = set(values) - {f.name for f in dataclasses.fields(cls)}
        if unknown:
            raise ModelError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
        if "gamma" in values:
            values["gamma"] = _as_int(values["gamma"], "gamma")
        return cls(**{k: (v if k == "gamma" else float(v)) for k, v in values.items()})

    def replace(self, **changes) -> "InteractionParams":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class ValidatedParams:
    """Parameters that passed :func:`validate_params`, annotated with which rate forms are usable."""

    params: InteractionParams
    prey_form_ok: bool
    predator_form_ok: bool
    singular: tuple[str, ...] = ()

    def __getattr__(self, name):
        # delegate field access so a ValidatedParams can stand in for its params
        try:
            params = self.__dict__["params"]
        except KeyError:
            raise AttributeError(name) from None
        return getattr(params, name)


def _as_int(value, name):
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return int(value)
    f = float(value)
    if not f.is_integer():
        raise RangeViolation(name, value, "positive integer")
    return int(f)


def _unit_interval_fields():
    return ("lambda1", "lambda2", "xi_p", "xi_d", "phi", "nu")


def validate_params(raw: InteractionParams | ValidatedParams) -> ValidatedParams:
    """Check every range invariant and flag singular rate forms.

    Raises on the first violated constraint. A singular prey or predator
    form is an annotation, not a failure.
    """
    if isinstance(raw, ValidatedParams):
        return validate_params(raw.params)
    p = raw

    if isinstance(p.gamma, bool) or not isinstance(p.gamma, (int, np.integer)) or p.gamma < 1:
        raise RangeViolation("gamma", p.gamma, "integer >= 1")
    for name in ("alpha_pp", "alpha_dd", "alpha_pd"):
        v = getattr(p, name)
        if not math.isfinite(v):
            raise RangeViolation(name, v, "finite")
    for name in ("alpha_pp", "alpha_dd"):
        if getattr(p, name) < 0:
            raise RangeViolation(name, getattr(p, name), "[0, inf)")
    for name in ("beta_p", "beta_d"):
        v = getattr(p, name)
        if not (v > 0 and math.isfinite(v)):
            raise RangeViolation(name, v, "(0, inf)")
    for name in _unit_interval_fields():
        v = getattr(p, name)
        if not 0.0 <= v <= 1.0:
            raise RangeViolation(name, v, "[0, 1]")
    for name in ("eps_p", "eps_d"):
        v = getattr(p, name)
        if not math.isfinite(v):
            raise RangeViolation(name, v, "finite")

    singular = []
    prey_zeros = [n for n, v in (("lambda1", p.lambda1), ("xi_d", p.xi_d)) if v == 0]
    pred_zeros = [n for n, v in (("lambda2*nu", p.lambda2 * p.nu), ("xi_p", p.xi_p)) if v == 0]
    if prey_zeros:
        singular.append("prey:" + ",".join(prey_zeros))
    if pred_zeros:
        singular.append("predator:" + ",".join(pred_zeros))
    return ValidatedParams(p, not prey_zeros, not pred_zeros, tuple(singular))


@dataclass(frozen=True)
class PopulationState:
    """Prey and predator densities (individuals/km^2)."""

    n_p: float
    n_d: float

    def __post_init__(self):
        if not (self.n_p >= 0 and self.n_d >= 0):
            raise RangeViolation("n_p/n_d", (self.n_p, self.n_d), "non-negative")

    @property
    def n_t(self) -> float:
        return self.n_p + self.n_d

    def counts(self, area: float) -> "PopulationState":
        """Densities converted to head counts over ``area`` km^2."""
        return PopulationState(self.n_p * area, self.n_d * area)


@dataclass(frozen=True)
class PairCounts:
    n_pp: float
    n_dd: float
    n_pd: float

    @property
    def n_dp(self) -> float:
        return self.n_pd


@dataclass(frozen=True)
class QuadraticForm:
    """Per-capita coefficients of ``psi(L) = n_t * (a*L**2 + b*L + c)``.

    ``notes`` carries annotations about the derivation, e.g. removable
    singularities in the printed grouping of a coefficient.
    """

    a: float
    b: float
    c: float
    notes: tuple[str, ...] = ()

    def psi(self, l: float, n_t: float) -> float:
        return n_t * (self.a * l * l + self.b * l + self.c)


@dataclass(frozen=True, eq=False)
class SpeciesSet:
    """Generalized multi-species Lotka-Volterra system.

    ``alpha[j, i]`` is the effect of an encounter with species ``j`` on the
    growth of species ``i``. Off-diagonal entries must be antisymmetric;
    the diagonal holds optional same-role self-interaction. Interaction
    sums run over species ``0 .. kappa-1`` (species are listed in order of
    biological proximity), so ``kappa == count`` is the untruncated system.
    """

    eps: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    kappa: int | None = None

    def __post_init__(self):
        eps = np.array(self.eps, dtype=float)
        alpha = np.array(self.alpha, dtype=float)
        beta = np.array(self.beta, dtype=float)
        n = eps.shape[0]
        if eps.ndim != 1 or alpha.shape != (n, n) or beta.shape != (n,):
            raise DimensionMismatch(
                f"eps {eps.shape}, alpha {alpha.shape}, beta {beta.shape} are inconsistent"
            )
        off = ~np.eye(n, dtype=bool)
        if np.any(alpha[off] != -alpha.T[off]):
            raise AntisymmetryViolation("alpha[i][j] must equal -alpha[j][i] for i != j")
        if np.any(beta <= 0):
            raise RangeViolation("beta", beta.tolist(), "(0, inf)")
        kappa = n if self.kappa is None else _as_int(self.kappa, "kappa")
        if not 1 <= kappa <= n:
            raise RangeViolation("kappa", kappa, f"[1, {n}]")
        for arr in (eps, alpha, beta):
            arr.flags.writeable = False
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "kappa", kappa)

    @property
    def count(self) -> int:
        return self.eps.shape[0]

    @classmethod
    def classic(cls, prey_growth, prey_loss, predator_death, predator_gain):
        """The textbook system ``x' = a x - b x y``, ``y' = -c y + d x y``.

        Built with unit Volterra numbers, so antisymmetry forces ``b == d``.
        """
        if prey_loss != predator_gain:
            raise AntisymmetryViolation("classic form with unit beta requires prey_loss == predator_gain")
        return cls(
            eps=[prey_growth, -predator_death],
            alpha=[[0.0, predator_gain], [-prey_loss, 0.0]],
            beta=[1.0, 1.0],
        )

    @classmethod
    def two_role(cls, params: InteractionParams) -> "SpeciesSet":
        """Species 0 is the prey role, species 1 the predator role."""
        return cls(
            eps=[params.eps_p, params.eps_d],
            alpha=[[params.alpha_pp, params.alpha_pd], [params.alpha_dp, params.alpha_dd]],
            beta=[params.beta_p, params.beta_d],
        )


@dataclass(frozen=True)
class GlobalConstants:
    """Constants shared by every scenario row (``key = value`` file)."""

    beta_p: float = 0.006456
    beta_d: float | None = None
    alpha_pd: float = 0.05
    nu: float = 0.05
    phi: float = 0.0
    eps_p: float = 0.34
    eps_d: float = 0.294
    gamma: int = 3
    n_p: float = 3.0
    n_d: float = 1.1
    area: float = 1.0

    def __post_init__(self):
        if self.beta_d is None:
            object.__setattr__(self, "beta_d", self.beta_p)

    @property
    def state(self) -> PopulationState:
        return PopulationState(self.n_p, self.n_d)

    def params_for(self, row: Mapping[str, float]) -> InteractionParams:
        values = {k: getattr(self, k) for k in ("beta_p", "beta_d", "alpha_pd", "nu", "phi", "eps_p", "eps_d", "gamma")}
        values.update(row)
        return InteractionParams.from_mapping(values)


def load_constants(source: TextIO) -> GlobalConstants:
    names = {f.name for f in dataclasses.fields(GlobalConstants)}
    values = {}
    for lineno, raw in enumerate(source, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(lineno, f"expected 'key = value', got {raw.strip()!r}")
        key, _, value = (part.strip() for part in line.partition("="))
        if key not in names:
            raise ParseError(lineno, f"unknown constant {key!r}")
        try:
            values[key] = _as_int(value, key) if key == "gamma" else float(value)
        except ValueError as exc:
            raise ParseError(lineno, f"bad value for {key}: {value!r}") from exc
    return GlobalConstants(**values)


def load_scenario_table(source: TextIO, constants: GlobalConstants | None = None) -> list[InteractionParams]:
    """Read scenario rows and merge each with the global constants, preserving order."""
    if constants is None:
        constants = bundled_constants()
    reader = csv.reader(source)
    header = None
    scenarios = []
    for row in reader:
        lineno = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        cells = [cell.strip() for cell in row]
        if header is None:
            missing = [c for c in SCENARIO_COLUMNS if c not in cells]
            if missing:
                raise ParseError(lineno, f"missing column(s): {', '.join(missing)}")
            header = cells
            continue
        if len(cells) != len(header):
            raise ParseError(lineno, f"expected {len(header)} fields, got {len(cells)}")
        try:
            values = {name: float(cell) for name, cell in zip(header, cells)}
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from exc
        scenarios.append(constants.params_for(values))
    return scenarios


def _data_text(name: str) -> str:
    return resources.files("lvbragg").joinpath("data").joinpath(name).read_text(encoding="utf-8")


def bundled_constants() -> GlobalConstants:
    return load_constants(io.StringIO(_data_text("serengeti.params")))


def bundled_scenarios(constants: GlobalConstants | None = None) -> list[InteractionParams]:
    return load_scenario_table(io.StringIO(_data_text("table1.csv")), constants or bundled_constants())


def scenario_rows(params: Iterable[InteractionParams]) -> list[dict]:
    return [{c: getattr(p, c) for c in SCENARIO_COLUMNS} for p in params]

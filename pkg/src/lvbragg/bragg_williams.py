"""Long-range-order substitution and the quadratic rate psi(L).

Under the Bragg-Williams assumption the short-range order is fixed by the
long-range order ``L``: the prey-pair fraction equals the squared prey
fraction, so ``N_pp = gamma * N_T * (L + 1)**2 / 8``. The total-population
rate then becomes a quadratic in ``L`` scaled by ``N_T``.
"""
from __future__ import annotations

import cmath
import csv
import math
from dataclasses import dataclass
from typing import Sequence, TextIO

import numpy as np

from .closure import predator_form_coefficients, psi_prey_form
from .errors import ModelError, RangeViolation, SingularForm
from .model import InteractionParams, QuadraticForm, validate_params

THEORETICAL = "theoretical"
EXTENDED = "extended"


@dataclass(frozen=True)
class OrderParameter:
    """Long-range order ``l``; ``extended`` mode allows values outside [-1, 1]."""

    l: float
    domain_mode: str = THEORETICAL

    def __post_init__(self):
        if self.domain_mode not in (THEORETICAL, EXTENDED):
            raise ModelError(f"unknown domain mode {self.domain_mode!r}")
        if not math.isfinite(self.l):
            raise RangeViolation("L", self.l, "finite")
        if self.domain_mode == THEORETICAL and not -1.0 <= self.l <= 1.0:
            raise RangeViolation("L", self.l, "[-1, 1]")

    @property
    def sigma(self) -> float:
        """Short-range order implied by ``l``: ``(l + 1)**2 / 2 - 1``."""
        return (self.l + 1.0) ** 2 / 2.0 - 1.0

    @property
    def exceeds_theoretical(self) -> bool:
        return not -1.0 <= self.l <= 1.0


def order_to_populations(l: float, n_t: float, gamma: int) -> tuple[float, float]:
    """``(n_p, n_pp)`` for long-range order ``l`` on a lattice of ``n_t`` sites."""
    if n_t < 0:
        raise RangeViolation("n_t", n_t, "[0, inf)")
    n_p = n_t * (l + 1.0) / 2.0
    n_pp = n_t * (gamma * l * l / 8.0 + (gamma / 4.0) * (l + 1.0) - gamma / 8.0)
    return n_p, n_pp


def bw_coefficients(params: InteractionParams) -> QuadraticForm:
    """Per-capita quadratic coefficients of the closed-form long-range rate.

    The linear coefficient's printed grouping divides by ``lambda2*nu`` inside
    a term that also multiplies by it; it is evaluated in the cleared form
    ``(alpha_dd/2) * (lambda2*nu*(1 - xi_p/2) - lambda1)`` so ``lambda2*nu == 0``
    is not singular. That case is recorded in ``notes``.
    """
    p = params
    zeros = [n for n, v in (("lambda1", p.lambda1), ("xi_d", p.xi_d)) if v == 0]
    if zeros:
        raise SingularForm("closed_form", zeros)
    g, bp, l1, l2, xp, xd, nu = p.gamma, p.beta_p, p.lambda1, p.lambda2, p.xi_p, p.xi_d, p.nu
    a_pp, a_dd, a_pd = p.alpha_pp, p.alpha_dd, p.alpha_pd
    l2nu = l2 * nu
    notes = ()
    if l2nu == 0:
        notes = ("b: removable lambda2*nu=0 denominator, evaluated in cleared form",)

    a = (g / bp) * (a_pp / 8.0 - (xp / l1) * (a_pd / 4.0 - a_dd * l2nu / (8.0 * xd)))

    dd_term = (a_dd / 2.0) * (l2nu * (1.0 - xp / 2.0) - l1)
    b = (p.eps_p - p.eps_d) / 2.0 + (g / (bp * l1)) * (
        a_pd * (1.0 - xp / 2.0) + (1.0 / xd) * (dd_term + a_pp * l1 * xd / 4.0)
    )

    c = ((p.eps_p - p.eps_d) / 2.0 + p.eps_d) + (g / bp) * (
        3.0 * a_pp / 8.0
        + (a_dd / xd) * (0.5 + l2nu / (2.0 * l1) - xp * l2nu / l1)
        + (a_pd / l1) * (1.0 - xp / 4.0)
    )
    return QuadraticForm(a, b, c, notes)


def bw_coefficients_predator(params: InteractionParams) -> QuadraticForm:
    """Quadratic in ``L`` from the predator form.

    Uses ``N_d = N_T (1 - L)/2`` and the mirrored pair identification
    ``N_dd = gamma N_T (1 - L)**2 / 8``. This is the only route for
    scenarios whose prey form is singular.
    """
    k_t, k_d, k_dd = predator_form_coefficients(params)
    g = params.gamma
    return QuadraticForm(
        a=k_dd * g / 8.0,
        b=-k_d / 2.0 - k_dd * g / 4.0,
        c=k_t + k_d / 2.0 + k_dd * g / 8.0,
        notes=("predator form",),
    )


def admissible_quadratic(params: InteractionParams) -> tuple[str, QuadraticForm]:
    """The closed-form prey quadratic when admissible, else the predator-form quadratic."""
    v = validate_params(params)
    if v.prey_form_ok:
        return "prey", bw_coefficients(params)
    if v.predator_form_ok:
        return "predator", bw_coefficients_predator(params)
    raise SingularForm("prey and predator", v.singular)


def psi_bw(l: float, n_t: float, form: QuadraticForm) -> float:
    return n_t * (form.a * l * l + form.b * l + form.c)


@dataclass(frozen=True)
class RootReport:
    """``kind`` is one of ``none``, ``linear``, ``real-distinct``, ``real-double``, ``complex-conjugate``."""

    kind: str
    discriminant: float | None
    roots: tuple

    @property
    def is_complex(self) -> bool:
        return self.kind == "complex-conjugate"


def bw_roots(form: QuadraticForm) -> RootReport:
    a, b, c = form.a, form.b, form.c
    if a == 0:
        if b == 0:
            return RootReport("none", None, ())
        return RootReport("linear", None, (-c / b,))
    disc = b * b - 4.0 * a * c
    if abs(disc) <= 1e-14 * max(b * b, abs(4.0 * a * c)):
        return RootReport("real-double", disc, (-b / (2.0 * a),) * 2)
    if disc < 0:
        root = (-b + cmath.sqrt(disc)) / (2.0 * a)
        return RootReport("complex-conjugate", disc, (root, root.conjugate()))
    # cancellation-free pair
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    r1, r2 = q / a, c / q
    return RootReport("real-distinct", disc, tuple(sorted((r1, r2))))


@dataclass(frozen=True)
class Extremum:
    """``kind`` is ``maximum``, ``minimum`` or ``linear``; a minimum is unbounded above."""

    kind: str
    l_star: float | None
    psi_star: float | None

    @property
    def unbounded_above(self) -> bool:
        return self.kind != "maximum"


def bw_extremum(form: QuadraticForm, n_t: float) -> Extremum:
    if form.a == 0:
        return Extremum("linear", None, None)
    l_star = -form.b / (2.0 * form.a)
    psi_star = n_t * (form.c - form.b * form.b / (4.0 * form.a))
    return Extremum("maximum" if form.a < 0 else "minimum", l_star, psi_star)


@dataclass(frozen=True, eq=False)
class SubstitutionReport:
    """Closed-form quadratic against direct substitution into the prey form."""

    l: np.ndarray
    psi_closed_form: np.ndarray
    psi_substitution: np.ndarray
    closed: QuadraticForm
    fitted: tuple[float, float, float] | None

    @property
    def abs_diff(self) -> np.ndarray:
        return np.abs(self.psi_closed_form - self.psi_substitution)

    @property
    def max_abs(self) -> float:
        return float(self.abs_diff.max())

    @property
    def max_rel(self) -> float:
        scale = np.maximum(np.abs(self.psi_closed_form), np.abs(self.psi_substitution))
        rel = np.divide(self.abs_diff, scale, out=np.zeros_like(scale), where=scale > 0)
        return float(rel.max())

    @property
    def deltas(self) -> tuple[float, float, float] | None:
        """Substitution-fit minus closed-form coefficients, per capita."""
        if self.fitted is None:
            return None
        return tuple(f - k for f, k in zip(self.fitted, (self.closed.a, self.closed.b, self.closed.c)))

    def agrees(self, rel_tol: float = 1e-9) -> bool:
        return self.max_rel <= rel_tol

    def write_csv(self, out: TextIO):
        out.write(f"# max_abs_diff = {self.max_abs:.12g}\n")
        out.write(f"# max_rel_diff = {self.max_rel:.12g}\n")
        out.write(f"# closed_form (a, b, c) = {self.closed.a:.12g}, {self.closed.b:.12g}, {self.closed.c:.12g}\n")
        if self.fitted is not None:
            fa, fb, fc = self.fitted
            da, db, dc = self.deltas
            out.write(f"# substitution_fit (a, b, c) = {fa:.12g}, {fb:.12g}, {fc:.12g}\n")
            out.write(f"# delta (a, b, c) = {da:.12g}, {db:.12g}, {dc:.12g}\n")
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["L", "psi_closed_form", "psi_substitution", "abs_diff"])
        for row in zip(self.l, self.psi_closed_form, self.psi_substitution, self.abs_diff):
            writer.writerow([f"{v:.12g}" for v in row])


def bw_vs_substitution_check(params: InteractionParams, l_grid: Sequence[float], n_t: float) -> SubstitutionReport:
    """Compare the closed-form quadratic with populations substituted into the prey form.

    Route B maps each ``L`` to ``(N_p, N_pp)`` and evaluates the prey-form
    rate, in which predator pairs are already eliminated via the closure
    relations. A least-squares quadratic fit of route B gives per-coefficient
    deltas when ``n_t > 0``.
    """
    closed = bw_coefficients(params)
    l = np.asarray(l_grid, dtype=float)
    psi_a = np.array([psi_bw(x, n_t, closed) for x in l])
    psi_b = np.empty_like(psi_a)
    for k, x in enumerate(l):
        n_p, n_pp = order_to_populations(x, n_t, params.gamma)
        psi_b[k] = psi_prey_form(n_p, n_pp, n_t, params)
    fitted = None
    if n_t > 0 and l.size >= 3:
        fa, fb, fc = np.polyfit(l, psi_b / n_t, 2)
        fitted = (float(fa), float(fb), float(fc))
    return SubstitutionReport(l, psi_a, psi_b, closed, fitted)


def grid(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive grid ``start, start+step, ..., <= stop``; each point is ``start + k*step``."""
    if not step > 0:
        raise ModelError(f"grid step must be positive, got {step}")
    if not start < stop:
        raise ModelError(f"grid start {start} must be below stop {stop}")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)

"""Lattice pair-closure relations and the prey/predator expansions of the total rate.

Pair counts can come from mass action (``N_pp = N_p**2`` and so on) or be
supplied directly, so pairs can also be treated as independent lattice state.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, TextIO

from .errors import SingularForm
from .model import InteractionParams, PairCounts, PopulationState


def _require(form, **denominators):
    zeros = [name for name, value in denominators.items() if value == 0]
    if zeros:
        raise SingularForm(form, zeros)


def pair_counts_mass_action(state: PopulationState) -> PairCounts:
    return PairCounts(
        n_pp=state.n_p * state.n_p,
        n_dd=state.n_d * state.n_d,
        n_pd=state.n_p * state.n_d,
    )


def n_dp_from_prey(n_p: float, n_pp: float, params: InteractionParams) -> float:
    """Cross-pair count implied by the prey closure ``gamma N_p = xi_p N_pp - lambda1 N_pd``."""
    _require("prey", lambda1=params.lambda1)
    return (params.xi_p / params.lambda1) * n_pp - (params.gamma / params.lambda1) * n_p


def n_dd_from_prey(n_p: float, n_pp: float, n_t: float, params: InteractionParams) -> float:
    """Predator-pair count after eliminating ``N_d`` and ``N_dp`` in favour of prey quantities."""
    _require("prey", lambda1=params.lambda1, xi_d=params.xi_d)
    g, l1, xd = params.gamma, params.lambda1, params.xi_d
    l2nu = params.lambda2 * params.nu
    return (g / xd) * n_t - (g / xd) * (1.0 + l2nu / l1) * n_p - (l2nu * params.xi_p) / (l1 * xd) * n_pp


def prey_form_coefficients(params: InteractionParams) -> tuple[float, float, float]:
    """``(k_t, k_p, k_pp)`` with ``psi = k_t*N_T + k_p*N_p - k_pp*N_pp`` (prey form)."""
    _require("prey", lambda1=params.lambda1, xi_d=params.xi_d)
    p = params
    g, bp, l1, xd, xp = p.gamma, p.beta_p, p.lambda1, p.xi_d, p.xi_p
    l2nu = p.lambda2 * p.nu
    k_t = p.eps_d + g * p.alpha_dd / (bp * xd)
    k_p = (p.eps_p - p.eps_d) + (g / bp) * (2.0 * p.alpha_pd / l1 - (p.alpha_dd / xd) * (1.0 - l2nu / l1))
    k_pp = (xp / (bp * l1)) * (2.0 * p.alpha_pd + p.alpha_dd * l2nu / xd) - p.alpha_pp / bp
    return k_t, k_p, k_pp


def predator_form_coefficients(params: InteractionParams) -> tuple[float, float, float]:
    """``(k_t, k_d, k_dd)`` with ``psi = k_t*N_T + k_d*N_d + k_dd*N_dd`` (predator form, scaled by ``beta_d``)."""
    _require("predator", **{"lambda2*nu": params.lambda2 * params.nu, "xi_p": params.xi_p})
    p = params
    g, bd, l1, xd, xp = p.gamma, p.beta_d, p.lambda1, p.xi_d, p.xi_p
    l2nu = p.lambda2 * p.nu
    k_t = p.eps_p + g * p.alpha_pp / (bd * xp)
    k_d = (p.eps_d - p.eps_p) + (g / bd) * ((p.alpha_pp / xp) * (l1 / l2nu - 1.0) - 2.0 * p.alpha_pd / l2nu)
    k_dd = (1.0 / bd) * (p.alpha_dd + (xd / l2nu) * (2.0 * p.alpha_pd - p.alpha_pp * l1 / xp))
    return k_t, k_d, k_dd


def psi_prey_form(n_p: float, n_pp: float, n_t: float, params: InteractionParams) -> float:
    """Total-population rate written in prey quantities only."""
    k_t, k_p, k_pp = prey_form_coefficients(params)
    return k_t * n_t + k_p * n_p - k_pp * n_pp


def psi_predator_form(n_d: float, n_dd: float, n_t: float, params: InteractionParams) -> float:
    """Total-population rate written in predator quantities only."""
    k_t, k_d, k_dd = predator_form_coefficients(params)
    return k_t * n_t + k_d * n_d + k_dd * n_dd


@dataclass(frozen=True)
class FormConsistency:
    n_p: float
    n_d: float
    psi_prey: float
    psi_pred: float

    @property
    def abs_diff(self) -> float:
        return abs(self.psi_prey - self.psi_pred)

    @property
    def rel_diff(self) -> float:
        scale = max(abs(self.psi_prey), abs(self.psi_pred))
        return self.abs_diff / scale if scale > 0 else 0.0


def form_consistency_report(state: PopulationState, params: InteractionParams) -> FormConsistency:
    """Evaluate both expansions on one state; disagreement is reported, not corrected.

    The prey form takes mass-action ``N_pp``; the predator form takes the
    ``N_dd`` implied by the prey closure.
    """
    pairs = pair_counts_mass_action(state)
    n_t = state.n_t
    n_dd = n_dd_from_prey(state.n_p, pairs.n_pp, n_t, params)
    psi_prey = psi_prey_form(state.n_p, pairs.n_pp, n_t, params)
    psi_pred = psi_predator_form(state.n_d, n_dd, n_t, params)
    return FormConsistency(state.n_p, state.n_d, psi_prey, psi_pred)


CONSISTENCY_HEADER = ("n_p", "n_d", "psi_prey", "psi_pred", "abs_diff", "rel_diff")


def write_consistency_csv(rows: Iterable[FormConsistency], out: TextIO):
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CONSISTENCY_HEADER)
    for r in rows:
        writer.writerow([f"{v:.12g}" for v in (r.n_p, r.n_d, r.psi_prey, r.psi_pred, r.abs_diff, r.rel_diff)])

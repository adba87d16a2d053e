"""Monogamy residuals of the steering measure and the residual Gaussian
steering (RGS) of pure three-mode states.

Two families of residuals are supported for any number of single-mode
parties: collective-steered minus pairwise-steered (focus party steered
by the rest) and the reverse direction (focus party steering the rest).
For pure three-mode states the minimum residual over permutations is the
same in both directions and has the closed form ln min{bc/a, ca/b,
ab/c}; that quantity, the RGS, is a quantifier of genuine tripartite
steering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InternalError, UsageError
from .states import PureThreeModeParams, ghz_network, local_invariants, OpticalNetworkParams
from .steering import gaussian_steering
from .symplectic import CovarianceMatrix, is_pure, partial_trace
from .tables import SweepTable, ordered_map

# Direction tags: the focus party is steered by the rest, or steers it.
STEERED_BY_REST = "steered-by-rest"
STEERS_REST = "steers-rest"


@dataclass(frozen=True)
class MonogamyReport:
    """One monogamy residual: collective term minus pairwise terms."""

    focus: int
    direction: str
    collective: float
    pairwise: tuple
    residual: float

    def to_dict(self) -> dict:
        return {
            "focus": self.focus,
            "direction": self.direction,
            "collective": self.collective,
            "pairwise": list(self.pairwise),
            "residual": self.residual,
        }


def _single_mode_parties(sigma: CovarianceMatrix, parties):
    out = []
    for p in parties:
        if isinstance(p, (int, np.integer)):
            p = (int(p),)
        p = tuple(sorted(set(int(m) for m in p)))
        if len(p) != 1:
            raise UsageError(
                f"monogamy residuals are defined for single-mode parties, got {p}"
            )
        out.append(p[0])
    if len(out) < 2:
        raise UsageError("need at least two parties")
    if len(set(out)) != len(out):
        raise UsageError("parties must be disjoint")
    if set(out) != set(range(sigma.n_modes)):
        raise UsageError(
            "parties must cover every mode of the state; trace out unused modes first"
        )
    return out


def _pairwise_term(sigma, mode_i, mode_j, direction):
    """G between two single-mode parties on their two-party marginal."""
    pair = sorted((mode_i, mode_j))
    marginal = partial_trace(sigma, pair)
    i, j = pair.index(mode_i), pair.index(mode_j)
    if direction == STEERED_BY_REST:
        return gaussian_steering(marginal, steering=[j], steered=[i]).value
    return gaussian_steering(marginal, steering=[i], steered=[j]).value


def monogamy_residual(sigma: CovarianceMatrix, parties, k: int, direction: str) -> MonogamyReport:
    """Monogamy residual for focus party ``k``.

    With modes m_k and rest = all other parties, the residual is

    * ``steered-by-rest``: G^{rest -> m_k} - sum_j G^{m_j -> m_k},
    * ``steers-rest``:     G^{m_k -> rest} - sum_j G^{m_k -> m_j},

    where each pairwise term is evaluated on the corresponding two-party
    marginal.  Both residuals are non-negative for every valid state.
    """
    modes = _single_mode_parties(sigma, parties)
    if not 0 <= k < len(modes):
        raise UsageError(f"focus index {k} out of range for {len(modes)} parties")
    if direction not in (STEERED_BY_REST, STEERS_REST):
        raise UsageError(f"unknown direction {direction!r}")
    focus = modes[k]
    rest = [m for m in modes if m != focus]
    if direction == STEERED_BY_REST:
        collective = gaussian_steering(sigma, steering=rest, steered=[focus]).value
    else:
        collective = gaussian_steering(sigma, steering=[focus], steered=rest).value
    pairwise = tuple(_pairwise_term(sigma, focus, j, direction) for j in rest)
    residual = collective - sum(pairwise)
    return MonogamyReport(
        focus=k,
        direction=direction,
        collective=float(collective),
        pairwise=pairwise,
        residual=float(residual),
    )


@dataclass(frozen=True)
class RgsValue:
    """Residual Gaussian steering with its per-permutation residuals.

    ``residuals`` maps (focus index, direction) to the residual value;
    all six are recorded, the value is their minimum, and the minima of
    the two directions agree for pure three-mode states.
    """

    value: float
    focus: int
    direction: str
    residuals: dict

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "focus": self.focus,
            "direction": self.direction,
            "residuals": {f"{k}:{d}": v for (k, d), v in self.residuals.items()},
        }


def rgs(sigma: CovarianceMatrix) -> RgsValue:
    """Residual Gaussian steering of a pure three-mode state.

    Evaluates the monogamy residual for every focus party in both
    directions (six residuals) and returns the minimum.  The two
    directional minima must agree to 1e-9, which is asserted.
    """
    if sigma.n_modes != 3:
        raise UsageError(f"rgs needs a 3-mode state, got {sigma.n_modes} modes")
    if not is_pure(sigma):
        raise DomainError("rgs is defined for pure three-mode states")
    residuals = {}
    for direction in (STEERED_BY_REST, STEERS_REST):
        for k in range(3):
            residuals[(k, direction)] = monogamy_residual(
                sigma, [0, 1, 2], k, direction
            ).residual
    min_steered = min(residuals[(k, STEERED_BY_REST)] for k in range(3))
    min_steering = min(residuals[(k, STEERS_REST)] for k in range(3))
    if abs(min_steered - min_steering) > 1e-9:
        raise InternalError(
            f"directional minima disagree: {min_steered} vs {min_steering}"
        )
    (focus, direction), value = min(residuals.items(), key=lambda kv: kv[1])
    return RgsValue(value=float(value), focus=focus, direction=direction, residuals=residuals)


def rgs_closed_form(params) -> float:
    """ln min{bc/a, ca/b, ab/c} for local invariants (a, b, c).

    Non-negative on the whole triangle region, since each ratio is >= 1
    there.
    """
    if not isinstance(params, PureThreeModeParams):
        params = PureThreeModeParams(*params)
    a, b, c = params.as_tuple()
    return math.log(min(b * c / a, c * a / b, a * b / c))


def fig1a_sweep(a: float, grid: int = 200, b_max: float = 5.0, threads: int = 1) -> SweepTable:
    """RGS over a (b, c) grid at fixed a, restricted to the triangle.

    Columns b, c, rgs; rows ordered by b then c.  The maximum over the
    grid is ln a, attained on the b = c diagonal with b >= a.
    """
    if grid < 2:
        raise UsageError("grid must have at least 2 points per axis")
    if b_max <= 1.0:
        raise UsageError("b_max must exceed 1")
    axis = np.linspace(1.0, b_max, grid)

    def row_block(b):
        rows = []
        for c in axis:
            if a <= b + c - 1.0 and b <= c + a - 1.0 and c <= a + b - 1.0:
                rows.append((float(b), float(c), rgs_closed_form((a, b, c))))
        return rows

    blocks = ordered_map(row_block, axis, threads)
    return SweepTable(("b", "c", "rgs"), [r for block in blocks for r in block])


def fig1b_sweep(r: float, grid: int = 1000, threads: int = 1) -> SweepTable:
    """RGS of the generation network versus reflectivity R at R' = 1/2.

    Columns R, a, b, c, rgs; R runs over [0, 1] inclusive.  With r > 0
    the maximum sits at R = 1/3, the permutationally invariant state.
    """
    if grid < 2:
        raise UsageError("grid must have at least 2 points")
    axis = np.linspace(0.0, 1.0, grid + 1)

    def one(R):
        sigma = ghz_network(OpticalNetworkParams(r=r, R=float(R), R_prime=0.5))
        a, b, c = local_invariants(sigma)
        return (float(R), a, b, c, rgs_closed_form((a, b, c)))

    return SweepTable(("R", "a", "b", "c", "rgs"), ordered_map(one, axis, threads))

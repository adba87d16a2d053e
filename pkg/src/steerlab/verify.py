"""Seeded Monte Carlo property campaigns behind `steerlab verify`.

Each suite samples random states, evaluates one family of inequalities,
and reports the count of violations together with the worst margin and
the state that produced it.  Sample i always derives its generator from
(master seed, i), so results are identical across runs and thread
counts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .monogamy import (
    STEERED_BY_REST,
    STEERS_REST,
    monogamy_residual,
    rgs,
    rgs_closed_form,
)
from .qss import LN_E_HALF, key_rate_mode_invariant
from .states import SamplerConfig, _mixed_sample, _params_sample, _pure_sample, standard_form_pure
from .steering import gaussian_steering, logdet_steering_bound_check
from .symplectic import conditional_log_det, partial_trace
from .tables import format_cell, ordered_map
from .errors import UsageError

# Inequality slack below this counts as a violation.
SLACK_TOL = 1e-9

SUITES = ("monogamy", "exclusivity", "logdet", "ssa", "rgs-consistency", "qss-bounds")


@dataclass
class SuiteResult:
    """Outcome of one property campaign."""

    name: str
    samples: int
    violations: int
    worst: float
    worst_label: str
    worst_case: dict = field(default_factory=dict)

    def summary_line(self) -> str:
        return (
            f"suite={self.name} samples={self.samples} "
            f"violations={self.violations} {self.worst_label}={format_cell(self.worst)}"
        )

    @property
    def passed(self) -> bool:
        return self.violations == 0


def _reduce_min(results):
    """Deterministic (value, index, payload) minimum; ties break on index."""
    best = None
    for i, (value, payload) in enumerate(results):
        if best is None or (value, i) < (best[0], best[1]):
            best = (value, i, payload)
    return best


def suite_monogamy(samples: int, seed: int, threads: int = 1) -> SuiteResult:
    """Collective-vs-pairwise steering residuals on random mixed states.

    Runs 3-party states at the full sample count and 4-party states at
    a tenth of it; every focus party, both directions.
    """
    cfg = SamplerConfig(seed=seed, count=1)
    four_party = max(1, samples // 10)

    def worst_residual(index, n_parties):
        sigma = _mixed_sample(n_parties, cfg.rng_for(index), r_max=1.0)
        worst = None
        for direction in (STEERED_BY_REST, STEERS_REST):
            for k in range(n_parties):
                rep = monogamy_residual(sigma, list(range(n_parties)), k, direction)
                if worst is None or rep.residual < worst[0]:
                    worst = (rep.residual, {
                        "state": sigma.to_dict(),
                        "focus": rep.focus,
                        "direction": rep.direction,
                        "residual": rep.residual,
                    })
        return worst

    results = ordered_map(lambda i: worst_residual(i, 3), range(samples), threads)
    results += ordered_map(
        lambda i: worst_residual(samples + i, 4), range(four_party), threads
    )
    worst_value, _, payload = _reduce_min(results)
    violations = sum(1 for v, _ in results if v < -SLACK_TOL)
    return SuiteResult(
        "monogamy", samples + four_party, violations, worst_value,
        "worst_residual", payload,
    )


def suite_exclusivity(samples: int, seed: int, threads: int = 1) -> SuiteResult:
    """No single-mode party is steered by two other parties at once.

    Alternates pure and mixed states, and single-mode versus two-mode
    steering parties; the metric is the smaller of the two steering
    values toward the shared single-mode target, which must vanish.
    """
    cfg = SamplerConfig(seed=seed, count=1)

    def min_steering(index):
        rng = cfg.rng_for(index)
        pure = index % 2 == 0
        wide_a = index % 4 < 2
        n = 4 if wide_a else 3
        sigma = _pure_sample(n, rng, 1.0) if pure else _mixed_sample(n, rng, 1.0)
        party_a = (0, 1) if wide_a else (0,)
        party_b = (2,) if wide_a else (1,)
        target = n - 1
        values = []
        for party in (party_a, party_b):
            marginal = partial_trace(sigma, party + (target,))
            order = sorted(party + (target,))
            values.append(
                gaussian_steering(
                    marginal,
                    steering=[order.index(m) for m in party],
                    steered=[order.index(target)],
                ).value
            )
        return (min(values), {
            "state": sigma.to_dict(),
            "party_a": list(party_a),
            "party_b": list(party_b),
            "steered_mode": target,
            "min_steering": min(values),
        })

    results = ordered_map(min_steering, range(samples), threads)
    worst = max(v for v, _ in results)
    payload = max(
        ((v, i, p) for i, (v, p) in enumerate(results)), key=lambda t: (t[0], -t[1])
    )[2]
    violations = sum(1 for v, _ in results if v > SLACK_TOL)
    return SuiteResult(
        "exclusivity", samples, violations, worst, "worst_min_steering", payload
    )


def suite_logdet(samples: int, seed: int, threads: int = 1) -> SuiteResult:
    """2 G >= M(sigma_steering) - M(sigma_full), plus single-mode tightness.

    Each sample checks the inequality with a two-mode steered party on a
    3-mode state, and the equality version on a 2-mode state (steered
    party one mode); samples with G = 0 are skipped, as the bound is
    only claimed for nonzero steering.
    """
    cfg = SamplerConfig(seed=seed, count=1)

    def margins(index):
        rng = cfg.rng_for(index)
        pure = index % 2 == 0
        tri = _pure_sample(3, rng, 1.0) if pure else _mixed_sample(3, rng, 1.0)
        rep = logdet_steering_bound_check(tri, steering=(0,), steered=(1, 2))
        slack = rep.slack if rep.applicable else None
        duo = _mixed_sample(2, rng, 1.0)
        rep1 = logdet_steering_bound_check(duo, steering=(0,), steered=(1,))
        eq_dev = abs(rep1.slack) if rep1.applicable else None
        # both sub-checks share the violation rule margin < -SLACK_TOL
        margin = min(
            slack if slack is not None else 0.0,
            -eq_dev if eq_dev is not None else 0.0,
        )
        return (margin, {
            "state": tri.to_dict(),
            "two_mode_steered_slack": slack,
            "single_mode_equality_deviation": eq_dev,
        })

    results = ordered_map(margins, range(samples), threads)
    worst_value, _, payload = _reduce_min(results)
    violations = sum(1 for v, _ in results if v < -SLACK_TOL)
    return SuiteResult(
        "logdet", samples, violations, worst_value, "worst_margin", payload
    )


def suite_ssa(samples: int, seed: int, threads: int = 1) -> SuiteResult:
    """Strong subadditivity of the log-determinant on tripartite states:
    I_{BC|A} <= I_{B|A} + I_{C|A}."""
    cfg = SamplerConfig(seed=seed, count=1)

    def slack(index):
        sigma = _mixed_sample(3, cfg.rng_for(index), r_max=1.0)
        value = (
            conditional_log_det(sigma, (1,), (0,))
            + conditional_log_det(sigma, (2,), (0,))
            - conditional_log_det(sigma, (1, 2), (0,))
        )
        return (value, {"state": sigma.to_dict(), "ssa_slack": value})

    results = ordered_map(slack, range(samples), threads)
    worst_value, _, payload = _reduce_min(results)
    violations = sum(1 for v, _ in results if v < -SLACK_TOL)
    return SuiteResult("ssa", samples, violations, worst_value, "worst_slack", payload)


def suite_rgs_consistency(samples: int, seed: int, threads: int = 1) -> SuiteResult:
    """Both directional residual minima equal the closed form on random
    pure standard-form states, and the RGS is non-negative."""
    cfg = SamplerConfig(seed=seed, count=1)

    def margin(index):
        params = _params_sample(cfg.rng_for(index), a_max=5.0, distribution="uniform")
        sigma = standard_form_pure(params)
        value = rgs(sigma)
        closed = rgs_closed_form(params)
        scale = max(1.0, abs(closed))
        dev = max(abs(r - closed) for r in (
            min(value.residuals[(k, STEERED_BY_REST)] for k in range(3)),
            min(value.residuals[(k, STEERS_REST)] for k in range(3)),
        ))
        # margin < -SLACK_TOL iff the deviation exceeds tolerance or the
        # RGS itself dips below -SLACK_TOL
        m = min(-dev / scale, value.value)
        return (m, {
            "params": list(params.as_tuple()),
            "state": sigma.to_dict(),
            "rgs": value.value,
            "closed_form": closed,
            "deviation": dev,
        })

    results = ordered_map(margin, range(samples), threads)
    worst_value, _, payload = _reduce_min(results)
    violations = sum(1 for v, _ in results if v < -SLACK_TOL)
    return SuiteResult(
        "rgs-consistency", samples, violations, worst_value, "worst_margin", payload
    )


def suite_qss_bounds(samples: int, seed: int, threads: int = 1) -> SuiteResult:
    """RGS/2 - ln(e/2) <= K_full^{A:B:C} <= RGS - ln(e/2) on random
    standard-form states."""
    cfg = SamplerConfig(seed=seed, count=1)

    def slack(index):
        params = _params_sample(cfg.rng_for(index), a_max=5.0, distribution="uniform")
        sigma = standard_form_pure(params)
        g = rgs_closed_form(params)
        k = key_rate_mode_invariant(sigma)
        lo = k - (g / 2.0 - LN_E_HALF)
        hi = (g - LN_E_HALF) - k
        return (min(lo, hi), {
            "params": list(params.as_tuple()),
            "state": sigma.to_dict(),
            "k_raw": k,
            "rgs": g,
            "slack_lower": lo,
            "slack_upper": hi,
        })

    results = ordered_map(slack, range(samples), threads)
    worst_value, _, payload = _reduce_min(results)
    violations = sum(1 for v, _ in results if v < -SLACK_TOL)
    return SuiteResult(
        "qss-bounds", samples, violations, worst_value, "worst_slack", payload
    )


_SUITE_FUNCTIONS = {
    "monogamy": suite_monogamy,
    "exclusivity": suite_exclusivity,
    "logdet": suite_logdet,
    "ssa": suite_ssa,
    "rgs-consistency": suite_rgs_consistency,
    "qss-bounds": suite_qss_bounds,
}


def run_suite(name: str, samples: int, seed: int, threads: int = 1):
    """Run one named suite, or every suite for name 'all'."""
    if samples < 1:
        raise UsageError(f"sample count must be >= 1, got {samples}")
    if name == "all":
        return [fn(samples, seed, threads) for fn in _SUITE_FUNCTIONS.values()]
    if name not in _SUITE_FUNCTIONS:
        raise UsageError(f"unknown suite {name!r}; choose from {SUITES + ('all',)}")
    return [_SUITE_FUNCTIONS[name](samples, seed, threads)]

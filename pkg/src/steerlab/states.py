"""Constructors and samplers for the Gaussian states used throughout.

Covers single-mode squeezed vacua, beamsplitter networks, pure
three-mode states in standard form parametrized by their local
symplectic invariants (a, b, c), and seeded random pure/mixed states
for Monte Carlo campaigns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InternalError, UsageError
from .symplectic import (
    CovarianceMatrix,
    apply_symplectic,
    is_pure,
    log_det,
    partial_trace,
    symplectic_eigenvalues,
)

# Slack accepted when checking the triangle condition on (a, b, c);
# boundary families sit exactly on the edge of the region.
TRIANGLE_ATOL = 1e-9

_LN10 = math.log(10.0)


def db_from_r(r: float) -> float:
    """Squeezing parameter to decibels, dB = 10 log10(e^{2r})."""
    return 20.0 * r / _LN10


def r_from_db(db: float) -> float:
    """Decibels to squeezing parameter, inverse of :func:`db_from_r`."""
    return db * _LN10 / 20.0


@dataclass(frozen=True)
class PureThreeModeParams:
    """Local symplectic invariants (a, b, c) of a pure three-mode state.

    a = sqrt(det sigma_A) and cyclically; a pure three-mode Gaussian
    state in standard form is fully determined by the triple.  Physical
    triples satisfy a, b, c >= 1 and the triangle condition
    |b - c| + 1 <= a <= b + c - 1 together with its cyclic permutations.
    """

    a: float
    b: float
    c: float

    def __post_init__(self):
        a, b, c = float(self.a), float(self.b), float(self.c)
        for name, v in (("a", a), ("b", b), ("c", c)):
            if not np.isfinite(v) or v < 1.0 - TRIANGLE_ATOL:
                raise DomainError(f"local invariant {name} = {v} must be >= 1")
        # the two lower triangle bounds |b-c|+1 <= a etc. are implied
        for name, hi, lo1, lo2 in (("a", a, b, c), ("b", b, c, a), ("c", c, a, b)):
            if hi > lo1 + lo2 - 1.0 + TRIANGLE_ATOL:
                raise DomainError(
                    f"triangle condition violated: {name} = {hi} exceeds "
                    f"{lo1} + {lo2} - 1"
                )
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    def as_tuple(self):
        return (self.a, self.b, self.c)


@dataclass(frozen=True)
class OpticalNetworkParams:
    """Squeezing r and beamsplitter reflectivities (R, R') of the
    three-mode generation network."""

    r: float
    R: float
    R_prime: float = 0.5

    def __post_init__(self):
        if not np.isfinite(self.r) or self.r < 0.0:
            raise UsageError(f"squeezing parameter r = {self.r} must be >= 0")
        for name, v in (("R", self.R), ("R'", self.R_prime)):
            if not 0.0 <= v <= 1.0:
                raise UsageError(f"reflectivity {name} = {v} must lie in [0, 1]")

    @property
    def squeezing_db(self) -> float:
        return db_from_r(self.r)


@dataclass(frozen=True)
class SamplerConfig:
    """Configuration for the seeded random-state samplers.

    ``seed`` is a 64-bit master seed; sample i derives its own generator
    from (seed, i), so streams are reproducible and order-independent.
    """

    seed: int = 42
    count: int = 1
    r_max: float = 1.0
    a_max: float = 5.0
    distribution: str = "uniform"

    def __post_init__(self):
        if self.count < 1:
            raise UsageError(f"count = {self.count} must be >= 1")
        if self.r_max < 0.0:
            raise UsageError(f"r_max = {self.r_max} must be >= 0")
        if self.a_max <= 1.0:
            raise UsageError(f"a_max = {self.a_max} must exceed 1")
        if self.distribution not in ("uniform", "log-uniform"):
            raise UsageError(f"unknown distribution tag {self.distribution!r}")

    def rng_for(self, index: int) -> np.random.Generator:
        """Generator for sample ``index``, independent of visit order."""
        return np.random.default_rng([self.seed, index])


def vacuum(n_modes: int) -> CovarianceMatrix:
    """Vacuum state of n modes, CM = identity."""
    if n_modes < 1:
        raise UsageError("n_modes must be >= 1")
    return CovarianceMatrix(n_modes, np.eye(2 * n_modes))


def squeezed_vacuum(r: float, squeezed_quadrature: str = "x") -> CovarianceMatrix:
    """Single-mode squeezed vacuum, diag(e^{-2r}, e^{+2r}) for x squeezing."""
    if r < 0.0:
        raise UsageError(f"squeezing parameter r = {r} must be >= 0")
    if squeezed_quadrature == "x":
        d = [math.exp(-2.0 * r), math.exp(2.0 * r)]
    elif squeezed_quadrature == "p":
        d = [math.exp(2.0 * r), math.exp(-2.0 * r)]
    else:
        raise UsageError(f"squeezed_quadrature must be 'x' or 'p', got {squeezed_quadrature!r}")
    return CovarianceMatrix(1, np.diag(d))


def two_mode_squeezed(r: float) -> CovarianceMatrix:
    """Two-mode squeezed vacuum with cosh 2r local blocks and
    +-sinh 2r cross correlations (x correlated, p anticorrelated)."""
    if r < 0.0:
        raise UsageError(f"squeezing parameter r = {r} must be >= 0")
    ch, sh = math.cosh(2.0 * r), math.sinh(2.0 * r)
    m = np.array(
        [
            [ch, 0.0, sh, 0.0],
            [0.0, ch, 0.0, -sh],
            [sh, 0.0, ch, 0.0],
            [0.0, -sh, 0.0, ch],
        ]
    )
    return CovarianceMatrix(2, m)


def beamsplitter(reflectivity: float, modes, n_modes: int) -> np.ndarray:
    """Symplectic (orthogonal) beamsplitter matrix on a mode pair.

    Acts as the rotation [[sqrt(1-R), sqrt(R)], [-sqrt(R), sqrt(1-R)]]
    identically on the x pair and the p pair of the two modes, identity
    elsewhere.
    """
    if not 0.0 <= reflectivity <= 1.0:
        raise UsageError(f"reflectivity {reflectivity} must lie in [0, 1]")
    i, j = (int(m) for m in modes)
    if i == j or not (0 <= i < n_modes and 0 <= j < n_modes):
        raise UsageError(f"beamsplitter needs two distinct in-range modes, got {(i, j)}")
    t, rt = math.sqrt(1.0 - reflectivity), math.sqrt(reflectivity)
    s = np.eye(2 * n_modes)
    for q in (0, 1):  # x row then p row, same rotation on both
        a, b = 2 * i + q, 2 * j + q
        s[a, a] = t
        s[a, b] = rt
        s[b, a] = -rt
        s[b, b] = t
    return s


def ghz_network(params: OpticalNetworkParams) -> CovarianceMatrix:
    """Three squeezed vacua through two beamsplitters (reflectivities R
    on modes 1-2, then R' on modes 2-3); output mode 1 is party A.

    Inputs are squeezed in (x, p, x) on modes (1, 2, 3).  This wiring is
    the unique assignment (over squeezing placements, beamsplitter
    orders, and port signs) for which R' = 1/2 yields the local
    invariants a = sqrt(1 + 2R(1-R)(cosh 4r - 1)) and
    b = c = sqrt([1 + R^2 - (R^2 - 1) cosh 4r] / 2), with the
    permutationally invariant a = b = c state at R = 1/3.
    """
    r = params.r
    sigma0 = np.zeros((6, 6))
    for mode, quad in enumerate(("x", "p", "x")):
        block = squeezed_vacuum(r, quad).matrix
        sigma0[2 * mode : 2 * mode + 2, 2 * mode : 2 * mode + 2] = block
    sigma = CovarianceMatrix(3, sigma0)
    sigma = apply_symplectic(sigma, beamsplitter(params.R, (0, 1), 3))
    sigma = apply_symplectic(sigma, beamsplitter(params.R_prime, (1, 2), 3))
    if not is_pure(sigma):
        raise InternalError("ghz_network output failed the purity check (convention bug)")
    return sigma


def _interblock(ai: float, aj: float, ak: float):
    """Diagonal entries (e_plus, e_minus) of the standard-form 2x2 cross
    block between the modes with invariants ai, aj, where ak is the
    remaining mode."""
    # radicands factored into linear terms, each non-negative over the
    # triangle region; squaring first would cancel catastrophically on
    # its boundary (where one factor vanishes) and lose half the digits
    d1 = (
        (aj + ak - 1.0 - ai)
        * (ak + ai - 1.0 - aj)
        * (aj + ak + 1.0 - ai)
        * (ak + ai + 1.0 - aj)
    )
    d2 = (
        (ai + aj - 1.0 - ak)
        * (ai + aj + 1.0 - ak)
        * (ai + aj + ak - 1.0)
        * (ai + aj + ak + 1.0)
    )
    s1 = math.sqrt(max(d1, 0.0))
    s2 = math.sqrt(max(d2, 0.0))
    root = math.sqrt(ai * aj)
    e_plus = (s1 + s2) / (4.0 * root)
    if s1 + s2 == 0.0:
        return 0.0, 0.0
    # e_minus = (s1 - s2) / (4 root) rewritten via d1 - d2 = -8 ai aj (ai^2
    # + aj^2 - ak^2 - 1) to avoid cancellation at large invariants
    e_minus = -2.0 * root * (ai * ai + aj * aj - ak * ak - 1.0) / (s1 + s2)
    return e_plus, e_minus


def standard_form_pure(params: PureThreeModeParams) -> CovarianceMatrix:
    """Pure three-mode CM in standard form from its local invariants.

    Local 2x2 blocks are a I, b I, c I; each inter-modal block is
    diag(e_plus, e_minus), the positive branch carrying the x
    correlations.  The closed-form entries are verified at construction:
    the output must be pure, have unit determinant, and reproduce
    (a, b, c), otherwise an internal error is raised.
    """
    if not isinstance(params, PureThreeModeParams):
        params = PureThreeModeParams(*params)
    a, b, c = params.as_tuple()
    m = np.zeros((6, 6))
    for mode, inv in enumerate((a, b, c)):
        m[2 * mode, 2 * mode] = inv
        m[2 * mode + 1, 2 * mode + 1] = inv
    triples = {(0, 1): (a, b, c), (0, 2): (a, c, b), (1, 2): (b, c, a)}
    for (i, j), (ai, aj, ak) in triples.items():
        ep, em = _interblock(ai, aj, ak)
        m[2 * i, 2 * j] = m[2 * j, 2 * i] = ep
        m[2 * i + 1, 2 * j + 1] = m[2 * j + 1, 2 * i + 1] = em
    sigma = CovarianceMatrix(3, m)
    if not is_pure(sigma):
        nu = symplectic_eigenvalues(sigma.matrix)
        raise InternalError(
            f"standard form for {params.as_tuple()} is not pure "
            f"(worst |nu - 1| = {np.max(np.abs(nu - 1.0)):.3e})"
        )
    if abs(log_det(sigma)) > 1e-8:
        raise InternalError(
            f"standard form for {params.as_tuple()} has ln det = {log_det(sigma):.3e}"
        )
    got = local_invariants(sigma)
    if max(abs(g - w) for g, w in zip(got, (a, b, c))) > 1e-9:
        raise InternalError(f"standard form reproduced invariants {got}, wanted {params.as_tuple()}")
    return sigma


def local_invariants(sigma: CovarianceMatrix):
    """(a, b, c) = square roots of the local 2x2 block determinants."""
    if sigma.n_modes != 3:
        raise UsageError(f"local_invariants needs a 3-mode state, got {sigma.n_modes} modes")
    m = sigma.matrix
    out = []
    for mode in range(3):
        block = m[2 * mode : 2 * mode + 2, 2 * mode : 2 * mode + 2]
        out.append(math.sqrt(float(np.linalg.det(block))))
    return tuple(out)


def _haar_orthogonal_symplectic(n: int, rng: np.random.Generator) -> np.ndarray:
    """Random orthogonal symplectic 2n x 2n matrix (interleaved order).

    Built from a Haar-distributed complex n x n unitary via QR with the
    phase convention of Mezzadri, then mapped to its real representation
    [[Re U, -Im U], [Im U, Re U]] and permuted from xxpp to interleaved
    ordering.  Orthogonal symplectic by construction.
    """
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    q = q * (diag / np.abs(diag))
    o = np.block([[q.real, -q.imag], [q.imag, q.real]])
    perm = np.empty(2 * n, dtype=int)
    perm[0::2] = np.arange(n)
    perm[1::2] = np.arange(n) + n
    return o[np.ix_(perm, perm)]


def _pure_sample(n_modes: int, rng: np.random.Generator, r_max: float) -> CovarianceMatrix:
    o = _haar_orthogonal_symplectic(n_modes, rng)
    r = rng.uniform(0.0, r_max, n_modes) if r_max > 0.0 else np.zeros(n_modes)
    z2 = np.empty(2 * n_modes)
    z2[0::2] = np.exp(2.0 * r)
    z2[1::2] = np.exp(-2.0 * r)
    # sigma = S S^T with S = O Z; the second orthogonal factor of the
    # Bloch-Messiah form cancels in S S^T, so O Z covers all pure CMs
    return CovarianceMatrix(n_modes, (o * z2) @ o.T)


def random_pure(n_modes: int, cfg: SamplerConfig):
    """Yield ``cfg.count`` seeded random pure n-mode states."""
    if n_modes < 1:
        raise UsageError("n_modes must be >= 1")
    for i in range(cfg.count):
        yield _pure_sample(n_modes, cfg.rng_for(i), cfg.r_max)


def _mixed_sample(n_parties: int, rng: np.random.Generator, r_max: float) -> CovarianceMatrix:
    ancillas = int(rng.integers(1, 3))
    pure = _pure_sample(n_parties + ancillas, rng, r_max)
    return partial_trace(pure, range(n_parties))


def random_mixed(n_parties: int, cfg: SamplerConfig):
    """Yield seeded random mixed states: partial traces of pure states
    with one or two extra ancilla modes."""
    if n_parties < 2:
        raise UsageError("n_parties must be >= 2")
    for i in range(cfg.count):
        yield _mixed_sample(n_parties, cfg.rng_for(i), cfg.r_max)


def _params_sample(rng: np.random.Generator, a_max: float, distribution: str) -> PureThreeModeParams:
    ln_amax = math.log(a_max)
    while True:
        if distribution == "uniform":
            a, b, c = rng.uniform(1.0, a_max, 3)
        else:
            a, b, c = np.exp(rng.uniform(0.0, ln_amax, 3))
        if a <= b + c - 1.0 and b <= c + a - 1.0 and c <= a + b - 1.0:
            return PureThreeModeParams(a, b, c)


def random_params(cfg: SamplerConfig):
    """Yield seeded random (a, b, c) triples, rejection-sampled from the
    triangle region."""
    for i in range(cfg.count):
        yield _params_sample(cfg.rng_for(i), cfg.a_max, cfg.distribution)

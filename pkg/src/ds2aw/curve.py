"""Leading-order spectral data of the perturbed genus-2N curve.

Each unstable mode of the background opens two handles of the spectral
curve: the two resonant pairs (tau_{2j-1}, tau_{2j}) and its negative on
the unit circle share both Bloch multipliers of the unperturbed 2-d Dirac
operator, and a perturbation of size eps splits each double point into a
pair of branch points at distance O(eps).  All quantities needed by the
theta-functional solution -- period matrix, frequency vectors, Abel
vectors, divisor transform, Riemann constants -- have closed forms on the
degenerate curve and are assembled here.

Everything is computed on the unit-background problem (a = 1); inputs with
a != 1 are rescaled first and the frequency vectors are mapped back, so
consumers never see the rescaling.
"""

from __future__ import annotations

import cmath
import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateSpectrumError, GenericityError
from .modes import Mode, check_genericity, enumerate_modes, min_search_radius, unstable_classes

# Pairs with a resonant point this close to the real axis are rejected:
# the matrix elements divide by Im(tau).
DEGENERATE_IM_TOL = 1e-9

# Genericity condition of the main theorem: alpha_j beta_j != 0.
DEGENERATE_AB_TOL = 1e-14

# Two resonant points closer than this belong to a non-generic collision.
DUPLICATE_TOL = 1e-9


@dataclass
class ResonantPair:
    """One resonant pair (tau_{2j-1}, tau_{2j}) and its handle data.

    tau_2 - tau_1 = k_x + i k_y and 1/tau_2 - 1/tau_1 = k_x - i k_y for the
    pair's mode, with Im(tau_1 / tau_2) > 0.  alpha/beta are the two-level
    matrix elements of the perturbation restricted to the pair's Bloch
    space; they are filled by :func:`alpha_beta`.
    """

    j: int
    tau_1: complex
    tau_2: complex
    theta_angle: float
    phi_angle: float
    mode: Mode
    alpha: complex | None = None
    beta: complex | None = None
    sqrt_alpha_beta: complex | None = None

    @property
    def q_1(self) -> float:
        return self.tau_1.imag

    @property
    def q_2(self) -> float:
        return self.tau_2.imag

    @property
    def im_cross(self) -> float:
        """Im(tau_2 * conj(tau_1)), the handle-opening denominator."""
        return (self.tau_2 * self.tau_1.conjugate()).imag


@dataclass
class BranchPoints:
    """Four branch points E_{4j-3..4j} of one opened handle."""

    E: tuple[complex, complex, complex, complex]


@dataclass
class SpectralData:
    """All leading-order data of the genus g = 2N curve.

    The frequency vectors are stored in the coordinates of the original
    problem (background a), i.e., already multiplied by the rescaling
    factors, so the theta-ratio formula can be evaluated directly at
    physical (x, y, t).
    """

    g: int
    pairs: list[ResonantPair]
    B: np.ndarray
    W_z: np.ndarray
    W_zbar: np.ndarray
    W_t: np.ndarray
    A_inf2: np.ndarray
    A_div: np.ndarray
    K: np.ndarray
    d: np.ndarray
    C0: complex = 0.0
    Cz: complex = 0.0
    Czbar: complex = 0.0
    Ct: complex = 0.0
    eps: float = 0.0
    u00: complex = 1.0
    L_x: float = 0.0
    L_y: float = 0.0
    a: float = 1.0

    def to_dict(self) -> dict:
        c = _c2l
        return {
            "g": self.g,
            "pairs": [
                {
                    "j": p.j,
                    "tau_1": c(p.tau_1),
                    "tau_2": c(p.tau_2),
                    "theta_angle": p.theta_angle,
                    "phi_angle": p.phi_angle,
                    "mode": {
                        "n_x": p.mode.n_x,
                        "n_y": p.mode.n_y,
                        "k_x": p.mode.k_x,
                        "k_y": p.mode.k_y,
                        "sigma": c(p.mode.sigma),
                        "unstable": p.mode.unstable,
                    },
                    "alpha": c(p.alpha),
                    "beta": c(p.beta),
                    "sqrt_alpha_beta": c(p.sqrt_alpha_beta),
                }
                for p in self.pairs
            ],
            "B": [[c(v) for v in row] for row in self.B],
            "W_z": [c(v) for v in self.W_z],
            "W_zbar": [c(v) for v in self.W_zbar],
            "W_t": [c(v) for v in self.W_t],
            "A_inf2": [c(v) for v in self.A_inf2],
            "A_div": [c(v) for v in self.A_div],
            "K": [c(v) for v in self.K],
            "d": [c(v) for v in self.d],
            "C0": c(self.C0),
            "Cz": c(self.Cz),
            "Czbar": c(self.Czbar),
            "Ct": c(self.Ct),
            "eps": self.eps,
            "u00": c(self.u00),
            "L_x": self.L_x,
            "L_y": self.L_y,
            "a": self.a,
        }


def _c2l(v) -> list[float] | None:
    if v is None:
        return None
    v = complex(v)
    return [v.real, v.imag]


@dataclass
class Rescaling:
    """Map between the original problem and its unit-background twin.

    If u solves DS2 with background a, then u~(x,y,t) = u(x/a, y/a, t/a^2)/a
    solves it with background 1 on the stretched torus.  Grid samples of the
    initial perturbation are reused verbatim: the grid stretches with the
    domain.
    """

    a: float
    L_x: float
    L_y: float
    eps: float
    v0: np.ndarray | None
    time_scale: float

    def to_scaled_time(self, t: float) -> float:
        return self.time_scale * t

    def to_original_time(self, t_scaled: float) -> float:
        return t_scaled / self.time_scale

    def to_original_field(self, u_scaled: np.ndarray) -> np.ndarray:
        return self.a * u_scaled


def rescale(a: float, L_x: float, L_y: float, eps: float, v0=None) -> Rescaling:
    """Rescale a background-a problem to background 1 (see Rescaling)."""
    if a <= 0.0:
        raise ConfigError("invalid-period", f"background must be positive, got {a}")
    v0 = None if v0 is None else np.asarray(v0, dtype=complex)
    return Rescaling(
        a=a, L_x=L_x * a, L_y=L_y * a, eps=eps / a, v0=v0, time_scale=a * a
    )


def resonant_pair(mode: Mode) -> tuple[ResonantPair, ResonantPair]:
    """Both resonant pairs of an unstable mode: (tau_1, tau_2) and its negative.

    tau_1 = (k/2)(-1 + i s), tau_2 = (k/2)(1 + i s) with k = k_x + i k_y and
    s = sqrt((4 - |k|^2)/|k|^2); this is the sign branch with
    Im(tau_1/tau_2) > 0.  The negated pair solves the resonance system of
    the mode (-k_x, -k_y) and is returned with that mode attached.
    """
    if not mode.unstable:
        raise ConfigError(
            "wrong-class", f"mode ({mode.n_x}, {mode.n_y}) is not unstable"
        )
    k = complex(mode.k_x, mode.k_y)
    k2 = mode.k_squared
    s = math.sqrt((4.0 - k2) / k2)
    tau_1 = 0.5 * k * (-1.0 + 1j * s)
    tau_2 = 0.5 * k * (1.0 + 1j * s)
    if abs(tau_1.imag) < DEGENERATE_IM_TOL or abs(tau_2.imag) < DEGENERATE_IM_TOL:
        raise DegenerateSpectrumError(
            "degenerate-pair",
            f"mode ({mode.n_x}, {mode.n_y}) has a resonant point on the real "
            "axis; the configuration is non-generic",
        )
    theta = math.atan2(mode.k_y, mode.k_x)
    phi = math.acos(math.sqrt(k2) / 2.0)
    neg_mode = Mode(-mode.n_x, -mode.n_y, -mode.k_x, -mode.k_y, mode.sigma, True)
    theta_neg = theta - math.pi if theta > 0 else theta + math.pi
    return (
        ResonantPair(0, tau_1, tau_2, theta, phi, mode),
        ResonantPair(0, -tau_1, -tau_2, theta_neg, phi, neg_mode),
    )


def stable_resonant_pair(mode: Mode) -> tuple[complex, complex]:
    """Resonant pair of a stable mode, off the unit circle (diagnostic only)."""
    if mode.unstable:
        raise ConfigError(
            "wrong-class", f"mode ({mode.n_x}, {mode.n_y}) is unstable"
        )
    k2 = mode.k_squared
    if k2 <= 4.0:
        raise ConfigError(
            "wrong-class",
            f"mode ({mode.n_x}, {mode.n_y}) is not outside the instability disk",
        )
    k = complex(mode.k_x, mode.k_y)
    tau_1 = 0.5 * k * (-1.0 + math.sqrt((k2 - 4.0) / k2))
    tau_2 = -1.0 / tau_1.conjugate()
    return tau_1, tau_2


def order_pairs(pairs: list[ResonantPair]) -> list[ResonantPair]:
    """Assign pair indices: odd points tau_1, tau_3, ... run clockwise.

    The sweep starts just below polar angle pi.  Because the point set is
    antipodally symmetric (every mode contributes a pair and its negative),
    this automatically places mirror pairs N apart: pair j+N = -pair j.
    """
    ordered = sorted(pairs, key=lambda p: cmath.phase(p.tau_1), reverse=True)
    pts = [(i, t) for i, p in enumerate(ordered) for t in (p.tau_1, p.tau_2)]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if pts[i][0] != pts[j][0] and abs(pts[i][1] - pts[j][1]) < DUPLICATE_TOL:
                raise DegenerateSpectrumError(
                    "duplicate-point",
                    "two resonant pairs share a point; periods are non-generic",
                )
    n = len(ordered) // 2
    for j in range(n):
        if abs(ordered[j].tau_1 + ordered[j + n].tau_1) > DUPLICATE_TOL:
            raise DegenerateSpectrumError(
                "duplicate-point",
                "pair set is not antipodally symmetric; expected 2 pairs per mode",
            )
    return [dataclasses.replace(p, j=i + 1) for i, p in enumerate(ordered)]


def perturbation_coefficients(v0_grid: np.ndarray, mode: Mode) -> tuple[complex, complex]:
    """Fourier coefficients (c_j, c_{-j}) of the mode in the convention
    v0(x, y) = sum_n c_n exp(i(k_x x + k_y y)).

    v0 must be sampled on a uniform grid v0[iy, ix] = v0(ix Lx/nx, iy Ly/ny)
    with zero mean; the grid must oversample the requested harmonic by 4x.
    """
    v0 = np.asarray(v0_grid, dtype=complex)
    if v0.ndim != 2:
        raise ConfigError("aliasing", "perturbation grid must be 2-d")
    ny, nx = v0.shape
    need = 4 * max(abs(mode.n_x), abs(mode.n_y), 1)
    if min(nx, ny) < need:
        raise ConfigError(
            "aliasing",
            f"grid {nx}x{ny} too small for harmonic ({mode.n_x}, {mode.n_y}); "
            f"need at least {need} points per direction",
        )
    mean = complex(v0.mean())
    if abs(mean) > 1e-10:
        raise ConfigError(
            "nonzero-mean", f"perturbation mean {abs(mean):.3e} exceeds 1e-10"
        )
    coeff = np.fft.fft2(v0) / (nx * ny)
    c_plus = complex(coeff[mode.n_y % ny, mode.n_x % nx])
    c_minus = complex(coeff[(-mode.n_y) % ny, (-mode.n_x) % nx])
    return c_plus, c_minus


def alpha_beta(pair: ResonantPair, c_j: complex, c_minus_j: complex) -> ResonantPair:
    """Fill the two-level matrix elements of the perturbation on the pair.

    alpha = -(conj(c_j) + conj(tau_1) tau_2 c_{-j}) / (2 Im tau_1)
    beta  =  (conj(c_{-j}) + conj(tau_2) tau_1 c_j) / (2 Im tau_2)

    The branch of sqrt(alpha beta) is fixed once: Re > 0, ties broken by
    Im >= 0; all downstream formulas use this value.
    """
    q1, q2 = pair.q_1, pair.q_2
    if abs(q1) < DEGENERATE_IM_TOL or abs(q2) < DEGENERATE_IM_TOL:
        raise DegenerateSpectrumError(
            "degenerate-pair", f"pair {pair.j}: resonant point on the real axis"
        )
    alpha = -(c_j.conjugate() + pair.tau_1.conjugate() * pair.tau_2 * c_minus_j) / (2.0 * q1)
    beta = (c_minus_j.conjugate() + pair.tau_2.conjugate() * pair.tau_1 * c_j) / (2.0 * q2)
    ab = alpha * beta
    if abs(ab) < DEGENERATE_AB_TOL:
        raise DegenerateSpectrumError(
            "degenerate-mode",
            f"alpha*beta vanishes for mode ({pair.mode.n_x}, {pair.mode.n_y}); "
            "the perturbation does not open this handle",
        )
    s = cmath.sqrt(ab)
    if s.real < 0.0 or (s.real == 0.0 and s.imag < 0.0):
        s = -s
    return dataclasses.replace(pair, alpha=alpha, beta=beta, sqrt_alpha_beta=s)


def branch_points(pair: ResonantPair, eps: float) -> BranchPoints:
    """Leading-order branch points around the pair's two resonant points.

    The displacements are +/- 2 tau_1 q_2 eps sqrt(ab) / (i Im(tau_2 conj
    tau_1)) around tau_1 and the q-swapped expression around tau_2.
    """
    if pair.sqrt_alpha_beta is None:
        raise DegenerateSpectrumError(
            "degenerate-mode", f"pair {pair.j}: matrix elements not computed"
        )
    if eps <= 0.0:
        raise DegenerateSpectrumError("degenerate-mode", "eps must be positive")
    denom = 1j * pair.im_cross
    d1 = 2.0 * pair.tau_1 * pair.q_2 * eps * pair.sqrt_alpha_beta / denom
    d2 = 2.0 * pair.tau_2 * pair.q_1 * eps * pair.sqrt_alpha_beta / denom
    return BranchPoints(
        (pair.tau_1 + d1, pair.tau_1 - d1, pair.tau_2 + d2, pair.tau_2 - d2)
    )


def period_matrix(pairs: list[ResonantPair], eps: float) -> np.ndarray:
    """Riemann period matrix: eps^2-log diagonal, cross-ratio off-diagonal.

    b_jj = Log[ tau_1 tau_2 q_1 q_2 eps^2 alpha beta
                / (Im^2(tau_2 conj tau_1) (tau_1 - tau_2)^2) ]
    b_jk = Log of the cross ratio of the four points of pairs j and k,
           which is real for concyclic points; a negative ratio is stored
           exactly as log|r| + i pi.
    """
    g = len(pairs)
    B = np.zeros((g, g), dtype=complex)
    for idx, p in enumerate(pairs):
        if p.alpha is None or p.beta is None:
            raise DegenerateSpectrumError(
                "degenerate-mode", f"pair {p.j}: matrix elements not computed"
            )
        arg = (
            p.tau_1
            * p.tau_2
            * p.q_1
            * p.q_2
            * eps
            * eps
            * p.alpha
            * p.beta
            / (p.im_cross**2 * (p.tau_1 - p.tau_2) ** 2)
        )
        B[idx, idx] = cmath.log(arg)
    for j in range(g):
        for k in range(j + 1, g):
            pj, pk = pairs[j], pairs[k]
            num = (pj.tau_2 - pk.tau_2) * (pj.tau_1 - pk.tau_1)
            den = (pj.tau_2 - pk.tau_1) * (pj.tau_1 - pk.tau_2)
            if abs(den) < DUPLICATE_TOL * DUPLICATE_TOL or abs(num) < DUPLICATE_TOL**2:
                raise DegenerateSpectrumError(
                    "cross-ratio-degenerate",
                    f"pairs {pj.j} and {pk.j} share a resonant point",
                )
            r = num / den
            # cross ratio of concyclic points is real; keep Im(b) in {0, pi}
            rr = r.real
            B[j, k] = B[k, j] = complex(math.log(abs(rr)), math.pi if rr < 0 else 0.0)
    return B


def frequency_vectors(pairs: list[ResonantPair]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """b-periods of the z, zbar and t differentials on the degenerate curve."""
    W_z = np.array(
        [0.5j * (p.tau_2.conjugate() - p.tau_1.conjugate()) for p in pairs]
    )
    W_zbar = np.array([0.5j * (p.tau_2 - p.tau_1) for p in pairs])
    W_t = np.array(
        [complex((p.tau_1**2 - p.tau_2**2).imag, 0.0) for p in pairs]
    )
    return W_z, W_zbar, W_t


def abel_infinity(pairs: list[ResonantPair]) -> np.ndarray:
    """Abel vector of the second marked point, A(inf_2); A(inf_1) = 0."""
    return np.array([cmath.log(p.tau_1 * p.tau_2.conjugate()) for p in pairs])


def divisor_and_constants(
    pairs: list[ResonantPair], B: np.ndarray, eps: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Divisor Abel transform, Riemann constants, theta-argument offset.

    A_div_j = Log(alpha_j / sqrt(alpha_j beta_j))   (handle-local transform,
    measured from the branch point E_{4j-3}; cross components are O(eps)
    and dropped).  K_j = b_jj/2 - i pi + A_j(E_{4j-3}) with

    A_j(E_{4j-3}) = -Log[ tau_2 q_2 eps sqrt(ab)
                          / (i Im(tau_2 conj tau_1)(tau_1 - tau_2)) ],

    and the theta-argument offset is d = -A_div - K.
    """
    g = len(pairs)
    A_div = np.zeros(g, dtype=complex)
    K = np.zeros(g, dtype=complex)
    for idx, p in enumerate(pairs):
        if p.sqrt_alpha_beta is None:
            raise DegenerateSpectrumError(
                "degenerate-mode", f"pair {p.j}: matrix elements not computed"
            )
        A_div[idx] = cmath.log(p.alpha / p.sqrt_alpha_beta)
        a_e = -cmath.log(
            p.tau_2
            * p.q_2
            * eps
            * p.sqrt_alpha_beta
            / (1j * p.im_cross * (p.tau_1 - p.tau_2))
        )
        K[idx] = 0.5 * B[idx, idx] - 1j * math.pi + a_e
    d = -A_div - K
    return A_div, K, d


def reality_residual(sd: SpectralData) -> float:
    """Defect of the leading-order reality condition across mirror pairs.

    The antiholomorphic involution sends the divisor point of handle j+N to
    handle j, which forces conj(alpha_{j+N}) tau_{2j} = -alpha_j tau_{2j-1}.
    Returns the worst relative residual; a correct construction satisfies
    it to rounding.
    """
    n = sd.g // 2
    worst = 0.0
    for j in range(n):
        p, m = sd.pairs[j], sd.pairs[j + n]
        lhs = m.alpha.conjugate() * p.tau_2
        rhs = -p.alpha * p.tau_1
        worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-300))
    return worst


def build_spectral_data(
    L_x: float,
    L_y: float,
    eps: float,
    v0_grid: np.ndarray,
    a: float = 1.0,
    search_radius: int | None = None,
) -> SpectralData:
    """Assemble the full leading-order spectral data for the Cauchy datum
    u(x, y, 0) = a + eps v0(x, y).

    Requires a generic configuration (no circle hits, no collisions, no
    marginal modes) and a zero-mean v0; every upstream degeneracy is
    re-raised with the offending mode attached.
    """
    if eps <= 0.0:
        raise DegenerateSpectrumError(
            "degenerate-mode", "eps = 0 gives alpha = beta = 0 on every handle"
        )
    v0_grid = np.asarray(v0_grid, dtype=complex)
    sc = rescale(a, L_x, L_y, eps, v0_grid)
    report = check_genericity(sc.L_x, sc.L_y, 1.0, search_radius)
    if not report.ok:
        raise GenericityError(
            "genericity",
            "periods are non-generic: "
            f"{len(report.on_circle_violations)} circle hits, "
            f"{len(report.multiplicity_violations)} collisions, "
            f"{len(report.marginal_modes)} marginal modes",
        )
    modes = enumerate_modes(sc.L_x, sc.L_y, 1.0, search_radius)
    classes = unstable_classes(modes)
    if not classes:
        raise DegenerateSpectrumError(
            "no-unstable-modes", "the instability disk contains no lattice mode"
        )
    grid_radius = max(
        min_search_radius(sc.L_x, sc.L_y, 1.0),
        search_radius or 0,
    )
    if min(v0_grid.shape) < 4 * grid_radius:
        raise ConfigError(
            "aliasing",
            f"perturbation grid {v0_grid.shape} cannot resolve harmonics up "
            f"to radius {grid_radius}; need >= {4 * grid_radius} per direction",
        )

    pairs = []
    for m in classes:
        c_plus, c_minus = perturbation_coefficients(v0_grid, m)
        p_pos, p_neg = resonant_pair(m)
        try:
            pairs.append(alpha_beta(p_pos, c_plus, c_minus))
            pairs.append(alpha_beta(p_neg, c_minus, c_plus))
        except DegenerateSpectrumError as err:
            raise DegenerateSpectrumError(
                err.code, f"mode ({m.n_x}, {m.n_y}): {err.message}"
            ) from err
    pairs = order_pairs(pairs)

    B = period_matrix(pairs, sc.eps)
    W_z, W_zbar, W_t = frequency_vectors(pairs)
    A_inf2 = abel_infinity(pairs)
    A_div, K, d = divisor_and_constants(pairs, B, sc.eps)
    u00 = a + eps * complex(v0_grid[0, 0])
    return SpectralData(
        g=len(pairs),
        pairs=pairs,
        B=B,
        W_z=W_z * a,
        W_zbar=W_zbar * a,
        W_t=W_t * a * a,
        A_inf2=A_inf2,
        A_div=A_div,
        K=K,
        d=d,
        eps=eps,
        u00=u00,
        L_x=L_x,
        L_y=L_y,
        a=a,
    )


def empty_spectral_data(L_x: float, L_y: float, a: float = 1.0) -> SpectralData:
    """Degenerate eps -> 0 limit: no handles, the field is the background."""
    zero = np.zeros(0, dtype=complex)
    return SpectralData(
        g=0,
        pairs=[],
        B=np.zeros((0, 0), dtype=complex),
        W_z=zero,
        W_zbar=zero.copy(),
        W_t=zero.copy(),
        A_inf2=zero.copy(),
        A_div=zero.copy(),
        K=zero.copy(),
        d=zero.copy(),
        eps=0.0,
        u00=complex(a),
        L_x=L_x,
        L_y=L_y,
        a=a,
    )

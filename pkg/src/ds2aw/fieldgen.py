"""Leading-order finite-gap field u(x, y, t) from spectral data.

The solution is a ratio of four theta values times the normalization
u(0, 0, 0):

    u = exp(z Cz + zbar Czbar + t Ct)
        * theta(A + w + d) theta(d) / (theta(A + d) theta(w + d)) * u00,

with w_j(z, t) = (W_z)_j z + (W_zbar)_j zbar + (W_t)_j t, A = A(inf_2) and
d the theta-argument offset; the C constants vanish at leading order.  The
spatial part of w is i(k_x x + k_y y) per handle, so the field is exactly
doubly periodic on the configured torus.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .curve import SpectralData
from .errors import ConfigError, DegenerateSpectrumError, NumericError
from .theta import ThetaParams, adaptive_radius, theta

# Grid points per work chunk; fixed so results do not depend on threading.
CHUNK = 8192

DENOM_FLOOR = 1e-300


@dataclass
class Field:
    """Doubly-periodic complex samples of u at one time.

    u[iy, ix] = u(ix * L_x / nx, iy * L_y / ny, t)
    """

    L_x: float
    L_y: float
    nx: int
    ny: int
    t: float
    u: np.ndarray

    def grid(self) -> tuple[np.ndarray, np.ndarray]:
        x = np.arange(self.nx) * (self.L_x / self.nx)
        y = np.arange(self.ny) * (self.L_y / self.ny)
        return np.meshgrid(x, y, indexing="xy")


def make_cauchy_field(
    L_x: float, L_y: float, a: float, eps: float, v0_grid: np.ndarray
) -> Field:
    """Sample the Cauchy datum a + eps v0 as a t = 0 Field."""
    u = a + eps * np.asarray(v0_grid, dtype=complex)
    ny, nx = u.shape
    return Field(L_x, L_y, nx, ny, 0.0, u)


def default_theta_params(
    sd: SpectralData, times, tail_tol: float = 1e-10
) -> ThetaParams:
    """Theta truncation certified for all arguments the formula visits.

    The spatial part of every theta argument is purely imaginary; the real
    parts are bounded component-wise by |Re d_j| + |Re A_j| + |W_t,j|
    max|t|, whose largest entry is the domain bound for the adaptive
    radius.
    """
    t_max = max((abs(float(t)) for t in times), default=0.0)
    re = np.abs(np.real(sd.d)) + np.abs(np.real(sd.A_inf2)) + np.abs(sd.W_t) * t_max
    z_bound = float(re.max()) if re.size else 0.0
    M = adaptive_radius(sd.B, z_bound, tail_tol)
    return ThetaParams(g=sd.g, B=sd.B, truncation_radius=M, tail_tolerance=tail_tol)


def _phase_args(sd: SpectralData, z: np.ndarray, t: float) -> np.ndarray:
    """w(z, t) for a batch of z, shape (npts, g)."""
    return (
        z[:, None] * sd.W_z[None, :]
        + np.conjugate(z)[:, None] * sd.W_zbar[None, :]
        + t * sd.W_t[None, :]
    )


def _ratio_chunk(
    sd: SpectralData,
    params: ThetaParams,
    w: np.ndarray,
    theta_d: complex,
    theta_ad: complex,
    coords,
) -> np.ndarray:
    th_num = theta(sd.A_inf2[None, :] + w + sd.d[None, :], params)
    th_den = theta(w + sd.d[None, :], params)
    bad = np.abs(th_den) < DENOM_FLOOR
    if np.any(bad):
        i = int(np.argmax(bad))
        x, y, t = coords(i)
        raise NumericError(
            "theta-zero",
            f"theta denominator vanishes at (x, y, t) = ({x:.6g}, {y:.6g}, {t:.6g}); "
            "the leading-order formula has a pole here",
        )
    return th_num * (theta_d / (theta_ad * th_den)) * sd.u00


def evaluate_batch(
    sd: SpectralData, z: np.ndarray, t: float, params: ThetaParams | None
) -> np.ndarray:
    """u at complex positions z = x + i y (flat array) and one time."""
    z = np.asarray(z, dtype=complex).ravel()
    if sd.g == 0:
        return np.full(z.shape, sd.u00, dtype=complex)
    if params is None:
        params = default_theta_params(sd, [t])
    theta_d = complex(theta(sd.d, params))
    theta_ad = complex(theta(sd.A_inf2 + sd.d, params))
    if abs(theta_ad) < DENOM_FLOOR:
        raise NumericError("theta-zero", "theta(A(inf2) + d) vanishes")
    w = _phase_args(sd, z, t)

    def coords(i):
        return z[i].real, z[i].imag, t

    return _ratio_chunk(sd, params, w, theta_d, theta_ad, coords)


def evaluate_u(
    x: float, y: float, t: float, sd: SpectralData, params: ThetaParams | None = None
) -> complex:
    """The finite-gap field at a single space-time point."""
    return complex(evaluate_batch(sd, np.array([complex(x, y)]), t, params)[0])


def _resolve_threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("DS2AW_THREADS", "0") or 0)
    if threads <= 0:
        threads = os.cpu_count() or 1
    return threads


def evaluate_grid(
    times,
    nx: int,
    ny: int,
    sd: SpectralData,
    params: ThetaParams | None = None,
    threads: int | None = None,
) -> list[Field]:
    """Sample the finite-gap field on the torus grid at each time.

    Work is split into fixed-size chunks of grid points, so the output is
    bit-identical regardless of the number of worker threads.
    """
    if nx < 8 or ny < 8:
        raise ConfigError("invalid-grid", f"grid {nx}x{ny} too small; need >= 8")
    if params is None and sd.g > 0:
        params = default_theta_params(sd, times)
    x = np.arange(nx) * (sd.L_x / nx)
    y = np.arange(ny) * (sd.L_y / ny)
    X, Y = np.meshgrid(x, y, indexing="xy")
    z = (X + 1j * Y).ravel()
    nthreads = _resolve_threads(threads)

    fields = []
    for t in times:
        t = float(t)
        u = np.empty(z.shape, dtype=complex)
        if sd.g == 0:
            u[:] = sd.u00
        else:
            theta_d = complex(theta(sd.d, params))
            theta_ad = complex(theta(sd.A_inf2 + sd.d, params))
            if abs(theta_ad) < DENOM_FLOOR:
                raise NumericError("theta-zero", "theta(A(inf2) + d) vanishes")
            spans = [(lo, min(lo + CHUNK, z.size)) for lo in range(0, z.size, CHUNK)]

            def work(span):
                lo, hi = span
                w = _phase_args(sd, z[lo:hi], t)

                def coords(i):
                    return z[lo + i].real, z[lo + i].imag, t

                u[lo:hi] = _ratio_chunk(sd, params, w, theta_d, theta_ad, coords)

            if nthreads > 1 and len(spans) > 1:
                with ThreadPoolExecutor(max_workers=nthreads) as pool:
                    list(pool.map(work, spans))
            else:
                for span in spans:
                    work(span)
        fields.append(Field(sd.L_x, sd.L_y, nx, ny, t, u.reshape(ny, nx)))
    return fields


def first_appearance_estimate(sd: SpectralData) -> float:
    """Coarse time of the first anomalous-wave peak.

    T1 = log(1 / (eps C)) / sigma_max with C = max_j |sqrt(alpha_j beta_j)|
    and sigma_max = max_j |W_t,j|: the time at which the fastest eps-size
    handle term reaches order one.  A scheduling hint, not certified.
    """
    if not sd.pairs:
        raise DegenerateSpectrumError("no-unstable-modes", "no pairs; nothing grows")
    c = max(abs(p.sqrt_alpha_beta) for p in sd.pairs)
    sigma_max = float(np.max(np.abs(sd.W_t)))
    eps_scaled = sd.eps / sd.a
    return math.log(1.0 / (eps_scaled * c)) / sigma_max

"""Sampling primitives, special functions, and covariance repair.

All samplers are deterministic transforms of uniforms taken from an
:class:`~partialid.rng.RngStream` — inverse-CDF wherever a quantile function
exists, never unbounded rejection — so a stream's uniform sequence maps to the
same variates on every platform.  Special functions are delegated to
``scipy.special``, which meets the 1e-10 absolute-accuracy requirement on the
unit interval.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy import special, stats

from .errors import ParameterError
from .rng import RngStream


def _as_float(x, size):
    """Collapse numpy scalars to Python floats when a scalar was requested."""
    return float(x) if size is None else np.asarray(x, dtype=float)


def sample_beta(a: float, b: float, rng: RngStream, size=None):
    """Beta(a, b) draws by inverting the regularized incomplete beta function."""
    if not (a > 0 and b > 0):
        raise ParameterError(f"beta shapes must be positive, got a={a}, b={b}")
    u = rng.uniform(size)
    return _as_float(special.betaincinv(a, b, u), size)


def sample_dirichlet(alpha, rng: RngStream) -> np.ndarray:
    """One draw from a Dirichlet distribution on the simplex.

    Uses the normalized-gamma construction with each gamma variate obtained
    by inverting the regularized incomplete gamma function.
    """
    alpha = np.asarray(alpha, dtype=float)
    if alpha.ndim != 1 or alpha.size == 0:
        raise ParameterError("alpha must be a nonempty 1-d vector")
    if np.any(alpha <= 0):
        raise ParameterError("all Dirichlet parameters must be positive")
    if alpha.size == 1:
        return np.ones(1)
    u = rng.uniform(size=alpha.size)
    g = special.gammaincinv(alpha, u)
    total = g.sum()
    if total <= 0:
        # all K uniforms underflowed at once; not reachable in practice
        raise ParameterError("degenerate Dirichlet draw: all gamma variates zero")
    return g / total


def sample_normal(mu: float, sigma2: float, rng: RngStream, size=None):
    """N(mu, sigma2) draws via the normal quantile transform (sigma2 is a variance)."""
    if not sigma2 > 0:
        raise ParameterError(f"variance must be positive, got {sigma2}")
    z = special.ndtri(rng.uniform(size))
    return _as_float(mu + np.sqrt(sigma2) * z, size)


def sample_mvnormal(mean, cov, rng: RngStream, size=None):
    """Multivariate normal draws: Cholesky factor applied to quantile-transformed uniforms.

    ``cov`` must be symmetric positive definite; run :func:`psd_repair` first
    if it is not.  Returns shape ``(d,)`` for ``size=None``, else ``(size, d)``.
    """
    mean = np.asarray(mean, dtype=float)
    cov = np.asarray(cov, dtype=float)
    if mean.ndim != 1 or cov.shape != (mean.size, mean.size):
        raise ParameterError(
            f"dimension mismatch: mean has shape {mean.shape}, cov has shape {cov.shape}"
        )
    if not np.array_equal(cov, cov.T):
        raise ParameterError("covariance matrix must be symmetric")
    try:
        chol = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        raise ParameterError(
            "covariance is not positive definite; apply psd_repair first"
        ) from None
    d = mean.size
    u = rng.uniform(size=d if size is None else (size, d))
    z = special.ndtri(u)
    return mean + z @ chol.T


def sample_truncated_normal(mu, sigma2, lo, hi, rng: RngStream, size=None):
    """N(mu, sigma2) conditioned on [lo, hi], drawn by inverse CDF."""
    if not lo < hi:
        raise ParameterError(f"need lo < hi, got [{lo}, {hi}]")
    if not sigma2 > 0:
        raise ParameterError(f"variance must be positive, got {sigma2}")
    sigma = np.sqrt(sigma2)
    a = (lo - mu) / sigma
    b = (hi - mu) / sigma
    u = rng.uniform(size)
    x = stats.truncnorm.ppf(u, a, b, loc=mu, scale=sigma)
    # ppf is exact at the ends; clip guards the last-ulp rounding
    return _as_float(np.clip(x, lo, hi), size)


def beta_cdf(x, a: float, b: float):
    """Regularized incomplete beta function I_x(a, b) on [0, 1]."""
    if not (a > 0 and b > 0):
        raise ParameterError(f"beta shapes must be positive, got a={a}, b={b}")
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or np.any(arr > 1):
        raise ParameterError("beta_cdf argument must lie in [0, 1]")
    out = special.betainc(a, b, arr)
    return float(out) if np.isscalar(x) else out


def gamma_cdf(x, shape: float, rate: float):
    """CDF of the Gamma(shape, rate) distribution (rate parameterization)."""
    if not (shape > 0 and rate > 0):
        raise ParameterError("gamma shape and rate must be positive")
    arr = np.asarray(x, dtype=float)
    out = np.where(arr <= 0, 0.0, special.gammainc(shape, rate * np.maximum(arr, 0.0)))
    return float(out) if np.isscalar(x) else out


def gamma_quantile(p, shape: float, rate: float):
    """Quantile of Gamma(shape, rate): the q with CDF(q) = p, for p in (0, 1)."""
    if not (shape > 0 and rate > 0):
        raise ParameterError("gamma shape and rate must be positive")
    arr = np.asarray(p, dtype=float)
    if np.any(arr <= 0) or np.any(arr >= 1):
        raise ParameterError("gamma_quantile probability must lie strictly in (0, 1)")
    out = special.gammaincinv(shape, arr) / rate
    return float(out) if np.isscalar(p) else out


class PsdRepair(NamedTuple):
    matrix: np.ndarray
    clipped: bool


def psd_repair(m, eigen_floor: float = 1e-6) -> PsdRepair:
    """Clip the spectrum of a symmetric matrix from below at ``eigen_floor``.

    Returns the repaired matrix together with a flag telling whether any
    eigenvalue actually had to be raised.  Inputs whose smallest eigenvalue
    already meets the floor are returned unchanged.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ParameterError(f"expected a square matrix, got shape {m.shape}")
    if not np.array_equal(m, m.T):
        raise ParameterError("matrix must be symmetric")
    if not eigen_floor > 0:
        raise ParameterError("eigen_floor must be positive")
    w, v = np.linalg.eigh(m)
    if w.min() >= eigen_floor:
        return PsdRepair(m.copy(), False)
    repaired = (v * np.maximum(w, eigen_floor)) @ v.T
    repaired = (repaired + repaired.T) / 2.0
    return PsdRepair(repaired, True)

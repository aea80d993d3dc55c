"""Symmetric eigenvalues, dominant eigenvalue and matrix norms.

Two independent routes to the largest eigenvalue are kept on purpose:
cyclic Jacobi (:func:`eig_sym`, full spectrum) and power iteration
(:func:`lambda_max`).  Tests cross-check one against the other.
"""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConvergenceError, ParameterError

__all__ = [
    "EigenSpectrum",
    "eig_sym",
    "frobenius_norm",
    "lambda_max",
    "power_iteration",
    "spectral_norm",
]

JACOBI_MAX_SWEEPS = 100
POWER_MAX_ITER = 100_000
# power iteration hands over to Jacobi after this many steps
POWER_FALLBACK_AFTER = 2_000
RQ_TOL = 1e-12
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class EigenSpectrum:
    eigenvalues: np.ndarray
    iterations_used: int

    @property
    def largest(self):
        return float(self.eigenvalues[0])


def _square(a):
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ParameterError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        raise ParameterError("empty matrix")
    if not np.all(np.isfinite(a)):
        raise ParameterError("matrix has non-finite entries")
    return a


def _off_norm(a):
    off = a - np.diag(np.diag(a))
    return math.sqrt(float(np.sum(off * off)))


def eig_sym(a, max_sweeps=JACOBI_MAX_SWEEPS):
    """All eigenvalues of a symmetric matrix by cyclic Jacobi rotations.

    Row-cyclic sweeps over the strict upper triangle.  Iteration stops once
    the Frobenius norm of the off-diagonal part drops below ``1e-12 * n``.

    Returns
    -------
    EigenSpectrum
        Eigenvalues sorted descending; ``iterations_used`` counts sweeps.

    Raises
    ------
    ConvergenceError
        If the off-diagonal mass is still above tolerance after
        ``max_sweeps`` sweeps.
    """
    a = _square(a)
    n = a.shape[0]
    a = (a + a.T) / 2
    tol = 1e-12 * n
    sweeps = 0
    while _off_norm(a) >= tol:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(off-diagonal norm {_off_norm(a):.3e})"
            )
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(1.0, theta))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                # A <- J^T A J with J the (p, q) plane rotation
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
    vals = np.sort(np.diag(a))[::-1].copy()
    return EigenSpectrum(vals, sweeps)


def _primes(count):
    out = []
    k = 2
    while len(out) < count:
        if all(k % q for q in out if q * q <= k):
            out.append(k)
        k += 1
    return out


def _perturbed_start(n):
    # square roots of distinct primes are linearly independent over the
    # rationals, so this start is not orthogonal to any +-1 sign vector
    v = np.sqrt(np.array(_primes(n), dtype=float))
    v[1::2] *= -1.0
    return v / np.linalg.norm(v)


def power_iteration(a, start=None, max_iter=POWER_MAX_ITER):
    """Dominant eigenpair estimate of a symmetric PSD matrix.

    Starts from the normalised all-ones vector unless ``start`` is given.
    Stops when successive Rayleigh quotients differ by less than ``1e-12``
    and the residual ``||Av - mu v||`` is below ``1e-10``.

    Returns
    -------
    (mu, v, iterations, converged)
    """
    a = _square(a)
    n = a.shape[0]
    v = np.ones(n) if start is None else np.asarray(start, dtype=float).copy()
    v /= np.linalg.norm(v)
    w = a @ v
    mu = float(v @ w)
    for it in range(1, max_iter + 1):
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0, v, it, True
        v = w / norm
        w = a @ v
        mu_new = float(v @ w)
        residual = np.linalg.norm(w - mu_new * v)
        if abs(mu_new - mu) < RQ_TOL and residual < RESIDUAL_TOL:
            return mu_new, v, it, True
        mu = mu_new
    return mu, v, max_iter, False


def lambda_max(a, max_iter=POWER_FALLBACK_AFTER):
    """Largest eigenvalue of a correlation matrix.

    Power iteration is run from the all-ones vector and again from a fixed
    perturbed start; the larger Rayleigh quotient wins, which recovers the
    dominant eigenvalue when the all-ones start sits on a non-dominant
    eigenvector.  The full Jacobi spectrum is used instead when either run
    has not converged after ``max_iter`` steps, or when the estimate falls
    below ``trace / n`` (a lower bound on the largest eigenvalue, 1 for a
    correlation matrix).
    """
    a = _square(a)
    n = a.shape[0]
    if n == 1:
        return float(a[0, 0])
    mu1, _, _, ok1 = power_iteration(a, max_iter=max_iter)
    if ok1:
        mu2, _, _, ok2 = power_iteration(a, start=_perturbed_start(n), max_iter=max_iter)
        mu = max(mu1, mu2)
        if ok2 and mu >= np.trace(a) / n - 1e-12 * max(1.0, abs(mu)):
            return mu
    return eig_sym(a).largest


def frobenius_norm(a):
    """Square root of the sum of squared entries (``sqrt(n)`` for I_n)."""
    a = _square(a)
    return math.sqrt(math.fsum((a * a).ravel()))


def spectral_norm(a):
    """Operator 2-norm, ``max ||Av||`` over unit ``v``.

    Computed as the square root of the largest eigenvalue of ``A^T A`` so
    the result does not lean on ``A`` being PSD; for a correlation matrix it
    coincides with :func:`lambda_max`.
    """
    a = _square(a)
    gram = a.T @ a
    gram = (gram + gram.T) / 2
    return math.sqrt(max(0.0, lambda_max(gram)))

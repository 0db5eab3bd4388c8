"""Simultaneous polynomial root finding (Aberth-Ehrlich) with Newton polishing."""

from __future__ import annotations

import numpy as np


class RootError(RuntimeError):
    pass


def _horner(coef_hi: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """p(z), p'(z) for coefficients ordered highest degree first."""
    p = np.zeros_like(z) + coef_hi[0]
    dp = np.zeros_like(z)
    for c in coef_hi[1:]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def aberth(coef_lo, max_iter: int = 500, tol: float = 1e-13, start_radius: float = 1.0) -> np.ndarray:
    """All complex roots of sum_j coef_lo[j] z^j.

    Starting points sit on a slightly perturbed circle of ``start_radius``;
    Lee-Yang polynomials have every root on the unit circle.
    """
    c = np.asarray(coef_lo, dtype=complex)
    while len(c) > 1 and c[-1] == 0:
        c = c[:-1]
    n = len(c) - 1
    if n < 1:
        raise RootError("polynomial has degree 0")
    hi = c[::-1] / c[-1]
    k = np.arange(n)
    z = start_radius * (1 + 0.01 * np.cos(2.1 * k)) * np.exp(1j * (2 * np.pi * k / n + 0.4 / n + 0.1))
    for _ in range(max_iter):
        p, dp = _horner(hi, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1)
            s = (1 / diff).sum(axis=1) - 1  # remove the diagonal 1/1
            w = ratio / (1 - ratio * s)
        w = np.where(np.isfinite(w), w, 0)
        z = z - w
        if np.all(np.abs(w) <= tol * np.maximum(1, np.abs(z))):
            break
    else:
        # stalled at the rounding floor is fine; a large backward error is not
        res = relative_residual(c, z).max()
        if res > 1e-10:
            raise RootError(f"Aberth iteration did not converge in {max_iter} steps (max residual {res:.3e})")
    return polish(c, z)


def relative_residual(coef_lo, z: np.ndarray) -> np.ndarray:
    """|p(z)| / sum_j |c_j| |z|^j, the backward error of each root."""
    c = np.asarray(coef_lo, dtype=complex)
    p, _ = _horner(c[::-1], z)
    scale, _ = _horner(np.abs(c[::-1]).astype(complex), np.abs(z).astype(complex))
    return np.abs(p) / np.abs(scale)


def polish(coef_lo, z: np.ndarray, steps: int = 3) -> np.ndarray:
    hi = np.asarray(coef_lo, dtype=complex)[::-1]
    for _ in range(steps):
        p, dp = _horner(hi, z)
        ok = dp != 0
        z = np.where(ok, z - np.where(ok, p / np.where(ok, dp, 1), 0), z)
    return z

"""Radon points of finite point sets in Euclidean space.

Radon's theorem guarantees that any r = d + 2 points in d-dimensional space
can be split into two disjoint subsets whose convex hulls intersect.  A point
in that intersection (a Radon point) is obtained from a non-zero solution of

    sum_i lam_i * s_i = 0      and      sum_i lam_i = 0,

by splitting the indices into I = {i : lam_i >= 0} and J = {j : lam_j < 0}
and forming the common convex combination

    point = sum_{i in I} (lam_i / L) * s_i = sum_{j in J} (-lam_j / L) * s_j,

where L = sum_{i in I} lam_i.  Every operation here is a pure function, so
calls are safe from any number of concurrent workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError, DegenerateSetError, ShapeError

# Residual tolerance for accepting a candidate coefficient vector, scaled by
# input magnitude; pivots below PIVOT_RTOL times the row scale count as zero.
RESIDUAL_RTOL = 1e-9
PIVOT_RTOL = 1e-12


@dataclass(frozen=True)
class RadonCertificate:
    """Checkable witness that ``point`` lies in both convex hulls.

    lam:        full coefficient vector, one entry per input point
    pos_idx:    indices with lam >= 0 (zero entries land here)
    neg_idx:    indices with lam < 0
    lambda_sum: L, the total positive mass; the convex weights are
                lam[pos_idx] / L and -lam[neg_idx] / L
    point:      the common point of the two convex combinations
    """

    lam: np.ndarray
    pos_idx: np.ndarray
    neg_idx: np.ndarray
    lambda_sum: float
    point: np.ndarray


def radon_number(dim: int) -> int:
    """Radon number of d-dimensional Euclidean space: d + 2."""
    if dim < 1:
        raise ConfigError(f"dimension must be >= 1, got {dim}")
    return dim + 2


def as_point_array(points) -> np.ndarray:
    """Validate and return points as a (count, dim) float64 array."""
    try:
        pts = np.asarray(points, dtype=np.float64)
    except ValueError as exc:
        raise ShapeError(f"points are not a rectangular numeric array: {exc}") from exc
    if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
        raise ShapeError(f"expected a 2-d array of points, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise DataError("points contain non-finite coordinates")
    return pts


def solve_radon_system(points) -> np.ndarray:
    """Return a non-zero coefficient vector for r = dim + 2 points.

    One coefficient is pinned to 1 and the remaining square system is solved
    by Gaussian elimination with scaled partial pivoting.  Colinear or
    duplicated inputs make the pinned system singular; free variables are
    then set to zero, and if the resulting candidate does not satisfy both
    defining equations (the pinned coefficient is zero in every solution),
    the next pin position is tried.  The first pin whose candidate passes
    the residual check wins, which makes the result a deterministic function
    of the input order.
    """
    pts = as_point_array(points)
    r, dim = pts.shape
    if r != dim + 2:
        raise ShapeError(f"need exactly {dim + 2} points in dimension {dim}, got {r}")

    # Rows: the dim coordinate equations plus the coefficient-sum equation.
    h_mat = np.vstack([pts.T, np.ones((1, r))])
    tol = RESIDUAL_RTOL * (1.0 + float(np.abs(pts).max()))

    for pin in range(r):
        a = np.delete(h_mat, pin, axis=1)
        b = -h_mat[:, pin]
        x = _solve_allowing_free_vars(a.copy(), b.copy())
        lam = np.insert(x, pin, 1.0)
        residual = float(np.abs(h_mat @ lam).max())
        if residual <= tol and np.any(lam < 0.0):
            return lam

    # Unreachable for finite inputs: r points in r-2 dimensions are always
    # affinely dependent, so some coordinate of some solution is non-zero.
    raise DegenerateSetError("no pin position yields a non-zero solution")


def _solve_allowing_free_vars(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a @ x = b in place, setting rank-deficient columns to zero.

    Scaled partial pivoting; a column whose best pivot is below PIVOT_RTOL
    times the owning row's scale is treated as free (x entry 0).  For
    inconsistent systems the returned x simply fails the caller's residual
    check.
    """
    n = b.size
    row_scale = np.maximum(np.abs(a).max(axis=1), 1e-300)
    pivot_row_of_col = np.full(n, -1, dtype=np.intp)
    row = 0
    for col in range(n):
        if row == n:
            break
        ratios = np.abs(a[row:, col]) / row_scale[row:]
        p = row + int(np.argmax(ratios))
        if np.abs(a[p, col]) <= PIVOT_RTOL * row_scale[p]:
            continue  # free column
        if p != row:
            a[[row, p]] = a[[p, row]]
            b[[row, p]] = b[[p, row]]
            row_scale[[row, p]] = row_scale[[p, row]]
        factors = a[row + 1:, col] / a[row, col]
        a[row + 1:, col:] -= np.outer(factors, a[row, col:])
        b[row + 1:] -= factors * b[row]
        pivot_row_of_col[col] = row
        row += 1

    x = np.zeros(n)
    for col in range(n - 1, -1, -1):
        rw = pivot_row_of_col[col]
        if rw < 0:
            continue
        x[col] = (b[rw] - a[rw, col + 1:] @ x[col + 1:]) / a[rw, col]
    return x


def radon_point(points) -> RadonCertificate:
    """Compute a Radon point of r = dim + 2 points, with its certificate."""
    pts = as_point_array(points)
    lam = solve_radon_system(pts)
    pos_idx = np.flatnonzero(lam >= 0.0)
    neg_idx = np.flatnonzero(lam < 0.0)
    lambda_sum = float(lam[pos_idx].sum())
    point = (lam[pos_idx] / lambda_sum) @ pts[pos_idx]
    return RadonCertificate(
        lam=lam,
        pos_idx=pos_idx,
        neg_idx=neg_idx,
        lambda_sum=lambda_sum,
        point=point,
    )


def certify(points, cert: RadonCertificate) -> float:
    """Largest violation of the certificate's defining conditions.

    Checks, independently of how the certificate was produced: sign
    conditions of the raw coefficients on each side, normalisation of both
    convex-weight vectors, and agreement of both convex combinations with
    the stated point.  Returns 0 (up to rounding) for a valid certificate.
    """
    pts = as_point_array(points)
    r = pts.shape[0]
    lam = np.asarray(cert.lam, dtype=np.float64)
    if lam.shape != (r,):
        raise ShapeError(f"coefficient vector has length {lam.size}, expected {r}")
    pos = np.asarray(cert.pos_idx, dtype=np.intp)
    neg = np.asarray(cert.neg_idx, dtype=np.intp)
    merged = np.sort(np.concatenate([pos, neg]))
    if not np.array_equal(merged, np.arange(r)):
        raise ShapeError("index sets do not partition the point set")
    point = np.asarray(cert.point, dtype=np.float64)
    if point.shape != (pts.shape[1],):
        raise ShapeError(f"certificate point has shape {point.shape}, expected ({pts.shape[1]},)")
    if not cert.lambda_sum > 0.0:
        return float("inf")

    scale = cert.lambda_sum
    violations = [0.0]
    if pos.size:
        violations.append(float(np.maximum(0.0, -lam[pos]).max()))
    if neg.size:
        violations.append(float(np.maximum(0.0, lam[neg]).max()))
    violations.append(abs(float(lam[pos].sum()) / scale - 1.0))
    violations.append(abs(float(-lam[neg].sum()) / scale - 1.0))
    pos_comb = (lam[pos] / scale) @ pts[pos]
    neg_comb = (-lam[neg] / scale) @ pts[neg]
    violations.append(float(np.abs(pos_comb - cert.point).max()))
    violations.append(float(np.abs(neg_comb - cert.point).max()))
    return max(violations)

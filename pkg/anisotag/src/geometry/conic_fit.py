"""Algebraic least-squares conic fit, used to cross-check the closed-form descriptor."""
import math
from typing import NamedTuple

import numpy as np

class FittedConic(NamedTuple):
    coefficients: np.ndarray  # A, B, C, D, E, F of Ax^2 + Bxy + Cy^2 + Dx + Ey + F = 0
    eccentricity: float
    center: np.ndarray
    foci: tuple[np.ndarray, np.ndarray]

def fit_conic(points: np.ndarray) -> FittedConic:
    """Fit a central conic (ellipse or hyperbola) through plane points.

    Points are centred and scaled before the SVD so the null vector is well
    conditioned; coefficients are returned in the original coordinates.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != 2 or len(points) < 5:
        raise ValueError(f"need at least 5 points of shape (N, 2), got {points.shape}")

    shift = points.mean(axis=0)
    scale = np.abs(points - shift).max()
    x, y = ((points - shift) / scale).T
    design = np.column_stack((x * x, x * y, y * y, x, y, np.ones_like(x)))
    _, _, vt = np.linalg.svd(design, full_matrices=False)
    a, b, c, d, e, f = vt[-1]

    quad = np.array([[a, b / 2], [b / 2, c]])
    lin = np.array([d, e])
    center_n = np.linalg.solve(2 * quad, -lin)
    f_center = f + 0.5 * lin @ center_n
    eigvals, eigvecs = np.linalg.eigh(quad)

    # semi-axis squares along each eigenvector, signed: positive where the curve crosses that axis
    semi = -f_center / eigvals
    if np.all(semi > 0):
        major = int(np.argmax(semi))
        minor = 1 - major
        ecc = math.sqrt(max(0.0, 1.0 - semi[minor] / semi[major]))
        focal = math.sqrt(max(0.0, semi[major] - semi[minor]))
    else:
        major = int(np.argmax(semi))
        minor = 1 - major
        ecc = math.sqrt(1.0 + (-semi[minor]) / semi[major])
        focal = math.sqrt(semi[major] - semi[minor])

    axis = eigvecs[:, major]
    center = center_n * scale + shift
    foci = (center + focal * scale * axis, center - focal * scale * axis)

    coefficients = np.array([
        a,
        b,
        c,
        d * scale - 2 * a * shift[0] - b * shift[1],
        e * scale - b * shift[0] - 2 * c * shift[1],
        0.0,
    ])
    coefficients[5] = (
        a * shift[0] ** 2 + b * shift[0] * shift[1] + c * shift[1] ** 2
        - d * scale * shift[0] - e * scale * shift[1] + f * scale * scale
    )
    return FittedConic(coefficients=coefficients, eccentricity=ecc, center=center, foci=foci)

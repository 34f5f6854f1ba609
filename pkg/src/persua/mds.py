"""Classical (Torgerson) multidimensional scaling into two dimensions.

Pairwise Euclidean distances are double-centered into a Gram matrix whose top
two eigenpairs give the coordinates. Negative eigenvalues are clamped to zero
and each eigenvector's sign is fixed by making its largest-magnitude entry
positive, so the embedding is deterministic and permutation-equivariant for
configurations with distinct top eigenvalues.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np


def pairwise_distances(vectors: np.ndarray) -> np.ndarray:
    diff = vectors[:, None, :] - vectors[None, :, :]
    return np.sqrt((diff**2).sum(axis=2))


def mds_project(vectors: Sequence[Sequence[float]]) -> list[tuple[float, float]]:
    """Embed vectors into the plane preserving pairwise Euclidean distances.

    Parameters
    ----------
    vectors : sequence of equal-length real vectors (n >= 1).

    Returns
    -------
    list of (x, y) coordinates, centered on the origin. Any configuration of
    intrinsic dimension <= 2 is reproduced isometrically; a single input maps
    to (0, 0).
    """
    arr = np.asarray([np.asarray(v, dtype=np.float64) for v in vectors])
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ValueError("mds_project needs at least one vector")
    n = arr.shape[0]
    dist = pairwise_distances(arr)
    centering = np.eye(n) - np.ones((n, n)) / n
    gram = -0.5 * centering @ (dist**2) @ centering
    eigenvalues, eigenvectors = np.linalg.eigh(gram)
    order = np.argsort(eigenvalues)[::-1][:2]
    coords = np.zeros((n, 2))
    for axis, idx in enumerate(order):
        value = max(eigenvalues[idx], 0.0)
        vec = eigenvectors[:, idx]
        top = int(np.argmax(np.abs(vec)))
        if vec[top] < 0:
            vec = -vec
        coords[:, axis] = np.sqrt(value) * vec
    return [(float(x), float(y)) for x, y in coords]


def place_point(distances: Sequence[float], coords: Sequence[tuple[float, float]]) -> tuple[float, float]:
    """Least-squares placement of a new point among embedded ones.

    Subtracting the mean of the squared-distance equations eliminates the
    unknown ``||p||^2`` and leaves the linear system ``2 (y_i - mean y) . p =
    (||y_i||^2 - mean||y||^2) - (d_i^2 - mean d^2)``, solved in least squares.
    With a single reference point the direction is undetermined and the
    minimum-norm solution is returned.
    """
    d = np.asarray(distances, dtype=np.float64)
    y = np.asarray(coords, dtype=np.float64).reshape(len(d), 2)
    if d.shape[0] == 0:
        raise ValueError("place_point needs at least one reference point")
    sq_norms = (y**2).sum(axis=1)
    rhs = (sq_norms - sq_norms.mean()) - (d**2 - (d**2).mean())
    solution, *_ = np.linalg.lstsq(2.0 * (y - y.mean(axis=0)), rhs, rcond=None)
    return float(solution[0]), float(solution[1])

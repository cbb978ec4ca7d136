"""Spectral sensitivity: the norm of the sensitivity-graph adjacency matrix.

The sensitivity graph G_f joins hypercube neighbours with different f-values.
Its adjacency matrix A_f is never materialized: the matrix-vector product is

    (A_f v)(x) = sum over i with f(x) != f(x xor e_i) of v(x xor e_i),

which numpy evaluates per direction by an axis flip.  Because every edge
crosses input parity the graph is bipartite and the spectrum is symmetric,
so plain power iteration on A_f could oscillate; we iterate A_f^2 (PSD, top
eigenvalue lambda^2) and report the square root.  The start vector is the
deterministic all-ones plus a small linear ramp, which breaks orthogonality
to the top eigenvector in structured graphs while keeping runs reproducible.

Float arithmetic throughout: spectral norms are generally irrational, and
certified enclosures are out of scope.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .boolfn import BooleanFunction
from .errors import BudgetError

_SPECTRAL_MAX_ARITY = 22
_ITERATION_CAP = 100_000


@dataclass(frozen=True)
class SpectralResult:
    lam: float
    iterations: int
    residual: float
    arity: int
    converged: bool = True

    def to_json(self) -> dict:
        return {"lambda": self.lam, "iterations": self.iterations,
                "residual": self.residual, "arity": self.arity,
                "converged": self.converged}


def _diff_masks(f: BooleanFunction) -> list:
    """Per direction i, the boolean array of x with f(x) != f(x xor e_i)."""
    bits = f.bits()
    masks = []
    for i in range(f.arity):
        flipped = bits.reshape(-1, 2, 1 << i)[:, ::-1, :].reshape(-1)
        masks.append(bits != flipped)
    return masks


def _matvec(v: np.ndarray, masks: list) -> np.ndarray:
    out = np.zeros_like(v)
    for i, mask in enumerate(masks):
        flipped = v.reshape(-1, 2, 1 << i)[:, ::-1, :].reshape(-1)
        out += np.where(mask, flipped, 0.0)
    return out


def spectral_sensitivity(f: BooleanFunction, tol: float = 1e-12,
                         max_iterations: int = _ITERATION_CAP) -> SpectralResult:
    """Top singular value of A_f via power iteration on A_f^2.

    Converged when successive Rayleigh estimates of lambda differ by < tol
    on three consecutive iterations.  Non-convergence inside the iteration
    cap returns the best estimate with converged=False.
    """
    if f.arity > _SPECTRAL_MAX_ARITY:
        raise BudgetError(f"spectral sensitivity capped at arity {_SPECTRAL_MAX_ARITY}")
    if f.arity == 0 or f.is_constant():
        return SpectralResult(lam=0.0, iterations=0, residual=0.0, arity=f.arity)
    masks = _diff_masks(f)
    if not any(m.any() for m in masks):
        return SpectralResult(lam=0.0, iterations=0, residual=0.0, arity=f.arity)

    size = 1 << f.arity
    v = 1.0 + np.arange(size, dtype=np.float64) / size * 1e-2
    v /= np.linalg.norm(v)
    estimate = 0.0
    stable = 0
    for it in range(1, max_iterations + 1):
        av = _matvec(v, masks)
        w = _matvec(av, masks)
        # v is unit, so v.w = |A v|^2 is the Rayleigh quotient of A^2.
        rayleigh = float(v @ w)
        new_estimate = math.sqrt(max(rayleigh, 0.0))
        residual = abs(new_estimate - estimate)
        estimate = new_estimate
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return SpectralResult(lam=0.0, iterations=it, residual=0.0, arity=f.arity)
        v = w / norm
        if residual < tol:
            stable += 1
            if stable >= 3:
                return SpectralResult(lam=estimate, iterations=it,
                                      residual=residual, arity=f.arity)
        else:
            stable = 0
    return SpectralResult(lam=estimate, iterations=max_iterations,
                          residual=residual, arity=f.arity, converged=False)


def max_sensitivity(f: BooleanFunction) -> int:
    """Max over x of the number of sensitive directions (graph max degree)."""
    if f.arity == 0:
        return 0
    masks = _diff_masks(f)
    degree = np.zeros(1 << f.arity, dtype=np.int64)
    for mask in masks:
        degree += mask
    return int(degree.max())


def sensitivity_edges(f: BooleanFunction) -> Iterator[tuple]:
    """Edges (x, x xor e_i) with x < partner, as table indices."""
    masks = _diff_masks(f)
    for i, mask in enumerate(masks):
        xs = np.nonzero(mask)[0]
        for x in xs:
            partner = int(x) ^ (1 << i)
            if x < partner:
                yield int(x), partner


def write_edge_list(f: BooleanFunction, target):
    """CSV export of the sensitivity graph for small n."""
    own = isinstance(target, (str, bytes))
    fh = open(target, "w", newline="", encoding="utf-8") if own else target
    try:
        writer = csv.writer(fh)
        writer.writerow(["x", "x_flip"])
        for x, y in sensitivity_edges(f):
            writer.writerow([x, y])
    finally:
        if own:
            fh.close()

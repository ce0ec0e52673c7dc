"""Average consensus with the single-parameter weight matrix W = I - alpha * L.

With the optimal step size alpha* = 2 / (l_2 + l_N) the nontrivial
eigenvalues of W shrink to at most gamma2 = (1 - gamma) / (1 + gamma) in
magnitude (gamma = l_2 / l_N), so the distance to the average contracts at
least geometrically: ||x_i - xbar|| <= ||x_0 - xbar|| * gamma2^i.  For a
non-optimal alpha the same bound holds with the actual contraction factor
max(|1 - alpha*l_2|, |1 - alpha*l_N|).

Optional per-node additive noise models imperfect exchange: after each
multiply, node n receives N(0, noise_std[n]^2), drawn node-major from one
PCG64 stream per run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .graph import Graph
from .spectral import extreme_laplacian_eigenvalues

__all__ = [
    "ConsensusConfig",
    "ConsensusRun",
    "weight_matrix",
    "optimal_alpha",
    "run_consensus",
    "convergence_time",
]


@dataclass(frozen=True)
class ConsensusConfig:
    """Run settings: iteration count, step size, optional noise, seed.

    ``alpha=None`` selects the optimal step size from the graph spectrum.
    ``noise_std`` is a scalar or per-node sequence of standard deviations;
    None or 0 means noiseless.  ``seed`` feeds the noise stream only.
    """

    n_iterations: int
    alpha: float | None = None
    noise_std: float | tuple[float, ...] | None = None
    seed: int | None = None


@dataclass(frozen=True)
class ConsensusRun:
    """States and diagnostics of one consensus run.

    ``states[i]`` is the state vector after i iterations; ``target_mean``
    is the average of the initial state; ``deviation_norms[i]`` is the
    Euclidean distance of states[i] from the consensus vector; and
    ``bound_values[i]`` is the geometric envelope
    deviation_norms[0] * contraction_factor**i, which dominates the
    deviations in noiseless runs.
    """

    states: np.ndarray
    target_mean: float
    deviation_norms: np.ndarray
    bound_values: np.ndarray
    alpha: float
    contraction_factor: float


def optimal_alpha(g: Graph) -> float:
    """The ratio-optimal step size 2 / (l_2 + l_N)."""
    if not g.is_connected():
        raise ValueError("optimal step size is undefined for a disconnected graph")
    lam2, lam_n = _extremes(g)
    return 2.0 / (lam2 + lam_n)


def weight_matrix(g: Graph, alpha: float) -> np.ndarray:
    """Dense consensus weight matrix W = I - alpha * L."""
    return np.eye(g.n_vertices) - alpha * g.laplacian()


def _extremes(g: Graph) -> tuple[float, float]:
    from .spectral import DENSE_EIG_CUTOFF

    lap = g.laplacian() if g.n_vertices <= DENSE_EIG_CUTOFF else g.laplacian_csr()
    return extreme_laplacian_eigenvalues(lap)


def run_consensus(g: Graph, x0: np.ndarray, config: ConsensusConfig) -> ConsensusRun:
    """Iterate x <- W x (+ noise) and record deviation diagnostics.

    The state update uses the sparse Laplacian, so each iteration costs
    O(edges).  In noiseless runs the node average is conserved exactly (up
    to roundoff) and the deviation norms obey the geometric bound.
    """
    if not g.is_connected():
        raise ValueError("consensus requires a connected graph")
    x0 = np.asarray(x0, dtype=np.float64)
    if x0.shape != (g.n_vertices,):
        raise ValueError(f"x0 must have shape ({g.n_vertices},), got {x0.shape}")
    if config.n_iterations < 0:
        raise ValueError(f"iteration count must be non-negative, got {config.n_iterations}")

    lam2, lam_n = _extremes(g)
    alpha = config.alpha if config.alpha is not None else 2.0 / (lam2 + lam_n)
    contraction = max(abs(1.0 - alpha * lam2), abs(1.0 - alpha * lam_n))

    noise = config.noise_std
    if noise is not None:
        noise_vec = np.broadcast_to(np.asarray(noise, dtype=np.float64), (g.n_vertices,))
        if np.all(noise_vec == 0.0):
            noise = None
    rng = np.random.default_rng(config.seed) if noise is not None else None

    lap = g.laplacian_csr()
    t = config.n_iterations
    states = np.empty((t + 1, g.n_vertices))
    states[0] = x0
    x = x0.copy()
    for i in range(1, t + 1):
        x = x - alpha * (lap @ x)
        if rng is not None:
            x = x + rng.standard_normal(g.n_vertices) * noise_vec
        states[i] = x

    target = float(x0.mean())
    deviations = np.linalg.norm(states - target, axis=1)
    bounds = deviations[0] * contraction ** np.arange(t + 1)
    states.flags.writeable = False
    deviations.flags.writeable = False
    bounds.flags.writeable = False
    return ConsensusRun(
        states=states,
        target_mean=target,
        deviation_norms=deviations,
        bound_values=bounds,
        alpha=float(alpha),
        contraction_factor=float(contraction),
    )


def convergence_time(run: ConsensusRun, rel_tol: float) -> int | None:
    """First iteration whose deviation is within rel_tol of the initial one.

    Returns the smallest i with deviation_norms[i] <= rel_tol *
    deviation_norms[0], or None when the run never got there.
    """
    if rel_tol < 0:
        raise ValueError(f"relative tolerance must be non-negative, got {rel_tol}")
    hits = np.nonzero(run.deviation_norms <= rel_tol * run.deviation_norms[0])[0]
    return int(hits[0]) if hits.size else None

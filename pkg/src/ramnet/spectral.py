"""Laplacian spectra, the eigenvalue-ratio figure of merit, and Ramanujan checks.

For a connected graph the Laplacian eigenvalues 0 = l_1 < l_2 <= ... <= l_N
enter everything downstream through the ratio gamma = l_2 / l_N: the optimal
consensus step size is 2 / (l_2 + l_N) and the per-step contraction factor is
gamma2 = (1 - gamma) / (1 + gamma).  A connected k-regular graph is Ramanujan
when every adjacency eigenvalue other than +/-k has magnitude at most
2*sqrt(k-1); such graphs pin gamma above (k - 2*sqrt(k-1)) / (k + 2*sqrt(k-1)).

Eigensolves are dense (LAPACK) up to ``DENSE_EIG_CUTOFF`` vertices and
Lanczos (ARPACK, deterministic start vector) beyond, with the dense path
kept as the small-scale oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .graph import Graph

__all__ = [
    "DENSE_EIG_CUTOFF",
    "EigensolveError",
    "extreme_laplacian_eigenvalues",
    "SpectralSummary",
    "spectral_summary",
    "RamanujanCertificate",
    "ramanujan_certificate",
    "ramanujan_gamma_lower_bound",
    "AsymptoticGammaBounds",
    "asymptotic_gamma_upper_bounds",
]

DENSE_EIG_CUTOFF = 1024

# Multiplicity band for recognizing the trivial +/-k adjacency eigenvalues.
_K_BAND = 1e-6


class EigensolveError(RuntimeError):
    """Raised when the iterative eigensolver fails to converge."""


def _arpack_start(n: int) -> np.ndarray:
    # Fixed generic start vector keeps ARPACK runs reproducible.
    return np.random.default_rng(0).standard_normal(n)


def extreme_laplacian_eigenvalues(
    lap,
    dense_cutoff: int = DENSE_EIG_CUTOFF,
    maxiter: int | None = None,
    tol: float = 0.0,
) -> tuple[float, float]:
    """Return (l_2, l_N) of a graph Laplacian.

    ``lap`` may be a dense symmetric array or any scipy sparse matrix.
    Matrices of order <= ``dense_cutoff`` go through a full dense solve;
    larger ones use two Lanczos runs: one for l_N and one for l_2 on the
    rank-one shifted operator L + (l_N + 1) * (ones ones^T / N), which moves
    the null eigenvector out of the way.  Non-convergence raises
    :class:`EigensolveError` naming the iteration budget.
    """
    n = lap.shape[0]
    if lap.shape[0] != lap.shape[1]:
        raise ValueError(f"Laplacian must be square, got shape {lap.shape}")
    if n < 2:
        raise ValueError("extreme eigenvalues need at least 2 vertices")

    if n <= dense_cutoff:
        dense = lap.toarray() if sp.issparse(lap) else np.asarray(lap, dtype=np.float64)
        vals = np.linalg.eigvalsh(dense)
        return float(vals[1]), float(vals[-1])

    lap = sp.csr_array(lap)
    v0 = _arpack_start(n)
    budget = maxiter if maxiter is not None else n * 100
    try:
        lam_n = float(spla.eigsh(lap, k=1, which="LA", v0=v0, maxiter=budget, tol=tol)[0][0])
        shift = lam_n + 1.0

        def shifted(x: np.ndarray) -> np.ndarray:
            return lap @ x + (shift / n) * x.sum()

        op = spla.LinearOperator((n, n), matvec=shifted, dtype=np.float64)
        lam_2 = float(spla.eigsh(op, k=1, which="SA", v0=v0, maxiter=budget, tol=tol)[0][0])
    except spla.ArpackNoConvergence as exc:
        raise EigensolveError(
            f"Lanczos failed to converge within maxiter={budget} Arnoldi updates"
        ) from exc
    return lam_2, lam_n


@dataclass(frozen=True)
class SpectralSummary:
    """Spectral quantities of one connected graph.

    ``adjacency_second`` is the largest adjacency-eigenvalue magnitude away
    from the trivial +/-k ones; it and ``is_ramanujan`` are populated for
    regular graphs of degree >= 2 only.
    """

    n_vertices: int
    lambda2: float
    lambda_n: float
    gamma: float
    gamma2: float
    alpha_star: float
    adjacency_second: float | None
    is_ramanujan: bool | None


def spectral_summary(g: Graph, dense_cutoff: int = DENSE_EIG_CUTOFF) -> SpectralSummary:
    """Compute the consensus-relevant spectral summary of a connected graph."""
    if g.n_vertices < 2:
        raise ValueError("spectral summary needs at least 2 vertices")
    if not g.is_connected():
        raise ValueError("graph is disconnected: lambda_2 = 0 and gamma is undefined")
    lap = g.laplacian() if g.n_vertices <= dense_cutoff else g.laplacian_csr()
    lam2, lam_n = extreme_laplacian_eigenvalues(lap, dense_cutoff=dense_cutoff)
    gamma = lam2 / lam_n
    gamma2 = (1.0 - gamma) / (1.0 + gamma)
    alpha_star = 2.0 / (lam2 + lam_n)

    profile = g.degree_profile()
    adjacency_second = None
    holds = None
    if profile.is_regular and profile.min_degree >= 2:
        cert = ramanujan_certificate(g, dense_cutoff=dense_cutoff)
        adjacency_second = cert.lambda_g
        holds = cert.holds
    return SpectralSummary(
        n_vertices=g.n_vertices,
        lambda2=lam2,
        lambda_n=lam_n,
        gamma=gamma,
        gamma2=gamma2,
        alpha_star=alpha_star,
        adjacency_second=adjacency_second,
        is_ramanujan=holds,
    )


@dataclass(frozen=True)
class RamanujanCertificate:
    degree: int
    lambda_g: float
    bound: float
    holds: bool


def ramanujan_certificate(
    g: Graph,
    degree: int | None = None,
    slack: float = 1e-9,
    dense_cutoff: int = DENSE_EIG_CUTOFF,
) -> RamanujanCertificate:
    """Check |lambda| <= 2*sqrt(k-1) for the nontrivial adjacency spectrum.

    Exactly one adjacency eigenvalue equal to +k (within a 1e-6 band) is
    excluded as trivial, plus one equal to -k when the graph is bipartite.
    Up to ``dense_cutoff`` vertices the full spectrum is computed densely;
    beyond that only the relevant spectral edges are found with Lanczos
    runs.  A disconnected regular graph keeps its extra +k copies and is
    correctly reported as failing.

    Pass ``degree`` for a graph whose loops were stripped at build time
    (degree = the pre-removal degree): the check then runs on k*I - L,
    which restores the loop contributions on the adjacency diagonal, and
    so certifies the same operator the loop-free Laplacian came from.
    For graphs that are k-regular as stored, k*I - L is the adjacency
    matrix itself and ``degree`` is redundant.
    """
    profile = g.degree_profile()
    if degree is None:
        if not profile.is_regular:
            raise ValueError(
                "Ramanujan certificate is defined for regular graphs only; for a "
                "loop-stripped build, pass its pre-removal degree explicitly"
            )
        k = profile.min_degree
    else:
        k = degree
        if k < profile.max_degree:
            raise ValueError(
                f"claimed degree {k} is below the maximum stored degree {profile.max_degree}"
            )
    if k < 2:
        raise ValueError(f"Ramanujan certificate needs degree >= 2, got k={k}")
    # Vertices short of degree k get that many loops back on the diagonal;
    # any loop makes the operator non-bipartite.
    bipartite = g.is_bipartite() and profile.min_degree == k

    if g.n_vertices <= dense_cutoff:
        operator = k * np.eye(g.n_vertices) - g.laplacian()
        vals = np.linalg.eigvalsh(operator)
        # lambda_max(k I - L) = k exactly; anything else is solver trouble
        if abs(vals[-1] - k) > _K_BAND:
            raise EigensolveError(
                f"eigensolver inconsistency: top eigenvalue {vals[-1]} is not the degree {k}"
            )
        rest = vals[:-1]
        if bipartite:
            if abs(rest[0] + k) > _K_BAND:
                raise EigensolveError("bipartite regular graph is missing its -k eigenvalue")
            rest = rest[1:]
        lambda_g = float(np.abs(rest).max()) if rest.size else 0.0
    else:
        operator = (k * sp.identity(g.n_vertices, format="csr") - g.laplacian_csr()).tocsr()
        v0 = _arpack_start(g.n_vertices)
        budget = g.n_vertices * 100
        try:
            top = np.sort(spla.eigsh(operator, k=2, which="LA", v0=v0, maxiter=budget)[0])
            bot = np.sort(
                spla.eigsh(operator, k=2 if bipartite else 1, which="SA", v0=v0, maxiter=budget)[0]
            )
        except spla.ArpackNoConvergence as exc:
            raise EigensolveError(
                f"Lanczos failed to converge within maxiter={budget} Arnoldi updates"
            ) from exc
        if abs(top[-1] - k) > _K_BAND:
            raise EigensolveError(
                f"eigensolver inconsistency: top eigenvalue {top[-1]} is not the degree {k}"
            )
        candidates = [top[0]]
        if bipartite:
            if abs(bot[0] + k) > _K_BAND:
                raise EigensolveError("bipartite regular graph is missing its -k eigenvalue")
            candidates.append(bot[1])
        else:
            candidates.append(bot[0])
        lambda_g = float(max(abs(c) for c in candidates))
    bound = 2.0 * sqrt(k - 1.0)
    return RamanujanCertificate(degree=k, lambda_g=lambda_g, bound=bound, holds=lambda_g <= bound + slack)


def ramanujan_gamma_lower_bound(k: int) -> float:
    """gamma >= (k - 2*sqrt(k-1)) / (k + 2*sqrt(k-1)) for k-regular Ramanujan graphs."""
    if k < 2:
        raise ValueError(f"degree must be at least 2, got k={k}")
    s = 2.0 * sqrt(k - 1.0)
    return (k - s) / (k + s)


class AsymptoticGammaBounds(NamedTuple):
    """Large-N ceilings on gamma for any k-regular family.

    ``two_sided`` applies when the top of the Laplacian spectrum reaches its
    k + 2*sqrt(k-1) extreme; ``one_sided`` only uses l_N >= k and so holds
    unconditionally.  No family can asymptotically beat Ramanujan graphs by
    more than these ratios allow.
    """

    two_sided: float
    one_sided: float


def asymptotic_gamma_upper_bounds(k: int) -> AsymptoticGammaBounds:
    if k < 2:
        raise ValueError(f"degree must be at least 2, got k={k}")
    s = 2.0 * sqrt(k - 1.0)
    return AsymptoticGammaBounds(two_sided=(k - s) / (k + s), one_sided=(k - s) / k)

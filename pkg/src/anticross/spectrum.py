"""Annealing Hamiltonian H(s) = (1-s) H0 + s H1, its two lowest eigenpairs and gap scans.

H0 = -sum_i X_i acts on the free qubits of a :class:`~anticross.maxcut.CostModel`;
H1 is the diagonal of cut energies. Everything is matrix-free: a state is a
dense float (or complex) vector of length ``2**n_qubits``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ._io import text_sink, write_config_line
from .maxcut import CostModel, spectrum_stats

INV_PHI = (math.sqrt(5) - 1) / 2
MAX_QUBITS = 24


class EigenSolverError(RuntimeError):
    def __init__(self, message: str, residual: float | None = None, s: float | None = None):
        self.residual = residual
        self.s = s
        super().__init__(message)


class AnnealHamiltonian:
    """Matrix-free H(s) for a cost model.

    >>> from anticross.graphs import Graph
    >>> h = AnnealHamiltonian(CostModel(Graph(2, ((0, 1),))))
    >>> h.apply(1.0, np.array([0.0, 1.0]))
    array([ 0., -1.])
    """

    def __init__(self, model: CostModel, max_qubits: int = MAX_QUBITS):
        if model.n_qubits > max_qubits:
            raise ValueError(f"{model.n_qubits} qubits exceeds the state-vector limit {max_qubits}")
        self.model = model
        self.n_qubits = model.n_qubits
        self.dim = model.dim
        self.diagonal = model.energies().astype(np.float64)
        self.scale = float(self.n_qubits + model.graph.n_edges)

    def mixer(self, v: np.ndarray, out: np.ndarray | None = None) -> np.ndarray:
        """Sum over single bit flips, i.e. ``-H0 @ v``."""
        if out is None:
            out = np.zeros_like(v)
        else:
            out[...] = 0
        for j in range(self.n_qubits):
            shape = (-1, 2, 1 << j)
            out.reshape(shape)[...] += v.reshape(shape)[:, ::-1, :]
        return out

    def apply(self, s: float, v: np.ndarray, out: np.ndarray | None = None) -> np.ndarray:
        if v.shape != (self.dim,):
            raise ValueError(f"state has shape {v.shape}, expected ({self.dim},)")
        out = self.mixer(v, out)
        out *= -(1.0 - s)
        out += s * self.diagonal * v
        return out

    def operator(self, s: float) -> Callable[[np.ndarray], np.ndarray]:
        return lambda v: self.apply(s, v)

    def expectation(self, s: float, v: np.ndarray) -> float:
        return float(np.real(np.vdot(v, self.apply(s, v))) / np.real(np.vdot(v, v)))


def dense_hamiltonian(model: CostModel, s: float) -> np.ndarray:
    """Explicit H(s) built from Kronecker products of Pauli X (test oracle, small sizes only)."""
    nq = model.n_qubits
    if nq > 12:
        raise ValueError("dense oracle limited to 12 qubits")
    x = np.array([[0.0, 1.0], [1.0, 0.0]])
    h0 = np.zeros((1 << nq, 1 << nq))
    for i in range(nq):
        # qubit i is bit i of the index, i.e. the i-th factor from the right
        op = np.array([[1.0]])
        for j in reversed(range(nq)):
            op = np.kron(op, x if j == i else np.eye(2))
        h0 -= op
    return (1 - s) * h0 + s * np.diag(model.energies().astype(float))


# ---------------------------------------------------------------- eigensolver

@dataclass
class EigenResult:
    values: np.ndarray
    vectors: np.ndarray  # shape (nev, dim)
    residuals: np.ndarray
    n_matvec: int
    n_restarts: int


def _orthonormalize(w: np.ndarray, basis: np.ndarray) -> float:
    for _ in range(2):
        w -= (basis @ w) @ basis
    return float(np.linalg.norm(w))


def lanczos_lowest(apply: Callable[[np.ndarray], np.ndarray], dim: int, nev: int = 2,
                   v0: np.ndarray | None = None, tol: float = 1e-8, max_krylov: int = 400,
                   mem_bytes: int = 400 * 2**20, max_matvec: int = 50_000,
                   check_every: int = 10, seed: int = 0) -> EigenResult:
    """Lowest ``nev`` eigenpairs of a real symmetric operator.

    Lanczos with full reorthogonalization and thick restarts: when the basis
    is full, the lowest Ritz vectors (half the basis) are kept and the
    residual direction continues the recurrence. The basis size is capped by
    ``max_krylov``, ``dim`` and the ``mem_bytes`` budget. Converged when every
    wanted Ritz pair has ``||A x - theta x|| <= tol``. An invariant subspace
    is extended with a fresh random vector, so a start vector confined to a
    symmetry sector does not hide the other sectors.
    """
    rng = np.random.default_rng(seed)
    nev = min(nev, dim)
    m = int(min(max_krylov, dim, max(nev + 8, mem_bytes // (8 * dim) - 1)))
    m = max(m, nev)
    V = np.zeros((m + 1, dim))
    T = np.zeros((m, m))
    q = rng.standard_normal(dim) if v0 is None else np.array(v0, dtype=float)
    if not np.linalg.norm(q) > 0:
        q = rng.standard_normal(dim)
    V[0] = q / np.linalg.norm(q)
    k = 0
    n_matvec = 0
    restarts = 0
    best = math.inf

    def ritz(size, beta):
        theta, Y = np.linalg.eigh(T[:size, :size])
        return theta, Y, np.abs(beta * Y[size - 1, :nev])

    def done(theta, Y, resid, size):
        vecs = Y[:, :nev].T @ V[:size]
        vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
        return EigenResult(theta[:nev].copy(), vecs, resid, n_matvec, restarts)

    while True:
        fresh = False
        for j in range(k, m):
            w = apply(V[j])
            n_matvec += 1
            h = V[: j + 1] @ w
            w -= h @ V[: j + 1]
            h2 = V[: j + 1] @ w
            w -= h2 @ V[: j + 1]
            h += h2
            T[j, : j + 1] = h
            T[: j + 1, j] = h
            beta = float(np.linalg.norm(w))
            size = j + 1
            if beta <= 1e-12 * max(1.0, abs(h[j])):
                beta = 0.0
                if size == dim:
                    return done(*ritz(size, 0.0), size)
                # invariant subspace: continue with a random orthogonal direction
                w = rng.standard_normal(dim)
                V[size] = w / _orthonormalize(w, V[:size])
                fresh = True
            else:
                V[size] = w / beta
                fresh = False
            if size >= nev and (size == m or (size - k) % check_every == 0):
                theta, Y, resid = ritz(size, beta)
                best = min(best, float(resid.max()))
                # a random direction that was just added has not been explored yet
                if resid.max() <= tol and not fresh:
                    return done(theta, Y, resid, size)
        if n_matvec >= max_matvec:
            raise EigenSolverError(
                f"Lanczos did not converge after {n_matvec} products (best residual {best:.3e})",
                residual=best)
        # thick restart: keep the lowest half of the Ritz vectors
        p = min(max(nev + 1, m // 2), m - 1)
        chunk = max(1, (32 * 2**20) // (8 * m))
        Yp = Y[:, :p].T
        for lo in range(0, dim, chunk):
            V[:p, lo:lo + chunk] = Yp @ V[:m, lo:lo + chunk]
        V[p] = V[m]
        T[:] = 0.0
        T[np.arange(p), np.arange(p)] = theta[:p]
        k = p
        restarts += 1


@dataclass
class LowestTwo:
    s: float
    e0: float
    e1: float
    vec0: np.ndarray
    vec1: np.ndarray
    residual: float
    n_matvec: int

    @property
    def gap(self) -> float:
        return self.e1 - self.e0


def lowest_two(ham: AnnealHamiltonian, s: float, v0: np.ndarray | None = None,
               rtol: float = 1e-9, seed: int = 0, **kwargs) -> LowestTwo:
    """Two lowest eigenpairs of H(s).

    Residual target is ``rtol * (n_qubits + n_edges)`` in the 2-norm; the
    returned ``residual`` is recomputed explicitly from the vectors.
    """
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"s must lie in [0, 1], got {s}")
    tol = rtol * ham.scale
    try:
        res = lanczos_lowest(ham.operator(s), ham.dim, nev=2, v0=v0, tol=tol, seed=seed, **kwargs)
    except EigenSolverError as err:
        raise EigenSolverError(f"{err} at s={s}", residual=err.residual, s=s) from None
    if ham.dim == 1:
        raise EigenSolverError("one-dimensional space has no gap", s=s)
    x0, x1 = res.vectors
    r0 = np.linalg.norm(ham.apply(s, x0) - res.values[0] * x0)
    r1 = np.linalg.norm(ham.apply(s, x1) - res.values[1] * x1)
    resid = float(max(r0, r1))
    if resid > 100 * max(tol, 1e-13 * ham.scale):
        raise EigenSolverError(f"eigenpairs lost accuracy at s={s}: residual {resid:.3e}",
                               residual=resid, s=s)
    e0, e1 = float(res.values[0]), float(res.values[1])
    if s == 1.0 and e1 - e0 < 1e-12:
        raise EigenSolverError("degenerate ground level at s=1; break the symmetry first", s=s)
    return LowestTwo(s, e0, e1, x0, x1, resid, res.n_matvec + 2)


# ---------------------------------------------------------------- gap scans

def golden_section_min(f: Callable[[float], float], a: float, b: float,
                       tol: float = 1e-4, max_iter: int = 200) -> tuple[float, float, int]:
    """Minimize a unimodal ``f`` on ``[a, b]`` until the bracket is narrower than ``tol``."""
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    n = 2
    while b - a > tol and n < max_iter:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
        n += 1
    return (x1, f1, n) if f1 <= f2 else (x2, f2, n)


@dataclass
class GapScan:
    s_grid: np.ndarray
    e0: np.ndarray
    e1: np.ndarray
    s_min: float
    gap_min: float
    eigvec0: list | None = field(default=None, repr=False)
    eigvec1: list | None = field(default=None, repr=False)
    n_matvec: int = 0

    @property
    def gap(self) -> np.ndarray:
        return self.e1 - self.e0

    def write_csv(self, path, config: dict | None = None) -> None:
        with text_sink(path) as fh:
            write_config_line(fh, config)
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["s", "e0", "e1", "gap"])
            for row in zip(self.s_grid, self.e0, self.e1, self.gap):
                w.writerow([f"{x:.17g}" for x in row])

    def minimum_dict(self) -> dict:
        return {"s_min": self.s_min, "gap_min": self.gap_min}


def _warm(prev: LowestTwo | None, rng: np.random.Generator) -> np.ndarray | None:
    if prev is None:
        return None
    noise = rng.standard_normal(prev.vec0.shape)
    noise *= 0.1 / np.linalg.norm(noise)
    return prev.vec0 + prev.vec1 + noise


def gap_scan(ham: AnnealHamiltonian, grid_points: int = 201, refine: bool = True,
             s_tol: float = 1e-4, keep_vectors: bool = False, rtol: float = 1e-9,
             seed: int = 0, s_grid: Sequence[float] | None = None,
             progress: Callable[[int, int], None] | None = None) -> GapScan:
    """Sample the gap on a uniform grid, then golden-section refine around its minimum."""
    if s_grid is None:
        if grid_points < 2:
            raise ValueError("a gap scan needs at least 2 grid points")
        s_grid = np.linspace(0.0, 1.0, grid_points)
    s_grid = np.asarray(sorted(s_grid), dtype=float)
    rng = np.random.default_rng(seed)
    sols: list[LowestTwo] = []
    prev = None
    n_mv = 0
    for i, s in enumerate(s_grid):
        sol = lowest_two(ham, float(s), v0=_warm(prev, rng), rtol=rtol, seed=seed + i)
        n_mv += sol.n_matvec
        sols.append(sol)
        prev = sol
        if progress:
            progress(i + 1, len(s_grid))
    e0 = np.array([x.e0 for x in sols])
    e1 = np.array([x.e1 for x in sols])
    gaps = e1 - e0
    i_min = int(np.argmin(gaps))
    s_min, g_min = float(s_grid[i_min]), float(gaps[i_min])
    if refine and len(s_grid) >= 3:
        lo = s_grid[max(i_min - 1, 0)]
        hi = s_grid[min(i_min + 1, len(s_grid) - 1)]
        anchor = sols[i_min]
        counter = [0]

        def f(s):
            sol = lowest_two(ham, float(s), v0=_warm(anchor, rng), rtol=rtol, seed=seed + 7919)
            counter[0] += sol.n_matvec
            return sol.gap

        s_ref, g_ref, _ = golden_section_min(f, float(lo), float(hi), tol=s_tol)
        n_mv += counter[0]
        if g_ref < g_min:
            s_min, g_min = s_ref, g_ref
    return GapScan(
        s_grid=s_grid, e0=e0, e1=e1, s_min=s_min, gap_min=g_min,
        eigvec0=[x.vec0 for x in sols] if keep_vectors else None,
        eigvec1=[x.vec1 for x in sols] if keep_vectors else None,
        n_matvec=n_mv,
    )


@dataclass(frozen=True)
class ScalingFit:
    points: tuple[tuple[float, float], ...]
    rate: float
    prefactor: float
    r_squared: float

    def to_dict(self) -> dict:
        return {"points": [list(p) for p in self.points], "rate": self.rate,
                "prefactor": self.prefactor, "r_squared": self.r_squared}


def scaling_fit(points: Sequence[tuple[float, float | GapScan]]) -> ScalingFit:
    """Least-squares fit of ``gap_min ~ a * exp(-rate * r)`` on a log scale."""
    pts = [(float(r), float(g.gap_min if isinstance(g, GapScan) else g)) for r, g in points]
    if len(pts) < 3:
        raise ValueError("an exponential fit needs at least 3 points")
    if any(g <= 0 for _, g in pts):
        raise ValueError("minimum gaps must be positive")
    r = np.array([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    slope, intercept = np.polyfit(r, y, 1)
    fitted = slope * r + intercept
    ss_res = float(((y - fitted) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return ScalingFit(tuple(pts), float(-slope), float(math.exp(intercept)), r2)


def variational_bound(model: CostModel, s) -> np.ndarray:
    """Energy of the uniform superposition, an upper bound on e0(s)."""
    stats = spectrum_stats(model)
    s = np.asarray(s, dtype=float)
    return -(1 - s) * model.n_qubits + s * float(stats.mean_H1)

"""Schrödinger evolution under the linear schedule and instantaneous-eigenstate overlaps."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._io import text_sink, write_config_line
from .maxcut import CostModel, spectrum_stats
from .spectrum import AnnealHamiltonian, lowest_two

MAX_DYNAMICS_QUBITS = 20
NORM_TOL = 1e-6


class DynamicsError(RuntimeError):
    pass


def default_dt(model: CostModel) -> float:
    return min(0.05, 0.1 / (model.n_qubits + model.graph.n_edges))


@dataclass
class EvolutionResult:
    t_max: float
    p_gs: float
    norm_drift: float
    dt: float
    n_steps: int
    # rows of (t, p_gs, <H(t/T)>) when recording was requested
    trajectory: list[tuple[float, float, float]] = field(default_factory=list, repr=False)


def evolve(model: CostModel, t_max: float, record_every: float | None = None,
           dt: float | None = None, ham: AnnealHamiltonian | None = None,
           norm_tol: float = NORM_TOL) -> EvolutionResult:
    """Integrate ``i dpsi/dt = H(t / t_max) psi`` from the uniform superposition with RK4.

    The step is ``dt`` (default ``min(0.05, 0.1 / (n_qubits + n_edges))``),
    shrunk so that an integer number of steps ends exactly at ``t_max``. The
    state is never renormalized; a norm drift above ``norm_tol`` raises
    :class:`DynamicsError`.
    """
    if t_max <= 0:
        raise ValueError(f"t_max must be positive, got {t_max}")
    if model.n_qubits > MAX_DYNAMICS_QUBITS:
        raise ValueError(f"{model.n_qubits} qubits exceeds the dynamics limit {MAX_DYNAMICS_QUBITS}")
    ham = ham or AnnealHamiltonian(model)
    gs = spectrum_stats(model).ground_config
    dt = default_dt(model) if dt is None else float(dt)
    n_steps = max(1, math.ceil(t_max / dt - 1e-9))
    h = t_max / n_steps

    psi = np.full(ham.dim, 1 / math.sqrt(ham.dim), dtype=np.complex128)
    tmp = np.empty_like(psi)
    ks = [np.empty_like(psi) for _ in range(4)]

    def rhs(s, v, out):
        ham.apply(s, v, out)
        out *= -1j
        return out

    traj = []
    next_rec = 0.0 if record_every else math.inf
    for step in range(n_steps):
        t = step * h
        if t >= next_rec - 1e-12:
            traj.append((t, float(abs(psi[gs]) ** 2), ham.expectation(t / t_max, psi)))
            next_rec += record_every
        s0, s_half, s1 = t / t_max, (t + h / 2) / t_max, min((t + h) / t_max, 1.0)
        k1, k2, k3, k4 = ks
        rhs(s0, psi, k1)
        np.multiply(k1, h / 2, out=tmp)
        tmp += psi
        rhs(s_half, tmp, k2)
        np.multiply(k2, h / 2, out=tmp)
        tmp += psi
        rhs(s_half, tmp, k3)
        np.multiply(k3, h, out=tmp)
        tmp += psi
        rhs(s1, tmp, k4)
        k2 += k3
        k2 *= 2
        k1 += k2
        k1 += k4
        k1 *= h / 6
        psi += k1
    p_gs = float(abs(psi[gs]) ** 2)
    if record_every:
        traj.append((t_max, p_gs, ham.expectation(1.0, psi)))
    drift = abs(float(np.vdot(psi, psi).real) - 1.0)
    if drift > norm_tol:
        raise DynamicsError(f"norm drift {drift:.2e} exceeds {norm_tol:.0e} at t_max={t_max}; "
                            "use a smaller dt")
    return EvolutionResult(t_max, p_gs, drift, h, n_steps, traj)


def write_evolution_csv(results: Sequence[EvolutionResult], path, config: dict | None = None):
    with text_sink(path) as fh:
        write_config_line(fh, config)
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t_max", "p_gs", "norm_drift"])
        for r in results:
            w.writerow([f"{r.t_max:.17g}", f"{r.p_gs:.17g}", f"{r.norm_drift:.17g}"])


@dataclass
class OverlapCurves:
    s_grid: np.ndarray
    g0: np.ndarray
    g1: np.ndarray

    def write_csv(self, path, config: dict | None = None):
        with text_sink(path) as fh:
            write_config_line(fh, config)
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["s", "g0", "g1"])
            for row in zip(self.s_grid, self.g0, self.g1):
                w.writerow([f"{x:.17g}" for x in row])


def overlap_curves(model: CostModel, s_grid: Sequence[float],
                   ham: AnnealHamiltonian | None = None, seed: int = 0) -> OverlapCurves:
    """Squared overlaps of the two lowest instantaneous eigenvectors with the ground configuration."""
    ham = ham or AnnealHamiltonian(model)
    gs = spectrum_stats(model).ground_config
    s_grid = np.asarray(sorted(s_grid), dtype=float)
    rng = np.random.default_rng(seed)
    g0, g1 = [], []
    prev = None
    for i, s in enumerate(s_grid):
        v0 = None
        if prev is not None:
            noise = rng.standard_normal(ham.dim)
            v0 = prev.vec0 + prev.vec1 + 0.1 * noise / np.linalg.norm(noise)
        sol = lowest_two(ham, float(s), v0=v0, seed=seed + i)
        g0.append(sol.vec0[gs] ** 2)
        g1.append(sol.vec1[gs] ** 2)
        prev = sol
    return OverlapCurves(s_grid, np.array(g0), np.array(g1))

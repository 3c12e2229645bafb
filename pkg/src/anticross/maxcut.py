"""MaxCut as a diagonal cost Hamiltonian with the global bit-flip symmetry removed.

One node (``fixed_node``) is pinned to side L and dropped from the register,
so a configuration of the remaining ``n_qubits = n_nodes - 1`` free nodes is a
packed integer: bit ``i`` is the side of the ``i``-th free node in increasing
node order. Edges at the pinned node become single-bit terms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .graphs import Graph

DEFAULT_ENUM_CAP = 26


class SpectrumError(ValueError):
    """Enumeration cap exceeded, or the cost spectrum is unusable."""


def fraction_to_json(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


@dataclass(frozen=True, eq=False)
class CostModel:
    graph: Graph
    fixed_node: int = 0
    enum_cap: int = DEFAULT_ENUM_CAP
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not 0 <= self.fixed_node < self.graph.n_nodes:
            raise ValueError(f"fixed node {self.fixed_node} out of range")

    @property
    def n_qubits(self) -> int:
        return self.graph.n_nodes - 1

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    @property
    def free_nodes(self) -> list[int]:
        return [v for v in range(self.graph.n_nodes) if v != self.fixed_node]

    def bit_of(self, node: int) -> int | None:
        """Register position of ``node``; ``None`` for the pinned node."""
        if node == self.fixed_node:
            return None
        return node if node < self.fixed_node else node - 1

    def energies(self) -> np.ndarray:
        """E_x for every configuration, as a read-only int32 array of length 2**n_qubits."""
        if "energies" not in self._cache:
            if self.n_qubits > self.enum_cap:
                raise SpectrumError(
                    f"{self.n_qubits} free bits exceeds the enumeration cap {self.enum_cap}")
            x = np.arange(self.dim, dtype=np.uint32)
            e = np.zeros(self.dim, dtype=np.int32)
            for u, v in self.graph.edges:
                bu, bv = self.bit_of(u), self.bit_of(v)
                if bu is None:
                    cut = (x >> bv) & 1
                elif bv is None:
                    cut = (x >> bu) & 1
                else:
                    cut = ((x >> bu) ^ (x >> bv)) & 1
                e -= cut.astype(np.int32)
            e.flags.writeable = False
            self._cache["energies"] = e
        return self._cache["energies"]

    def config_to_sides(self, x: int) -> list[int]:
        """Side (0 = L, 1 = R) of every graph node for packed configuration ``x``."""
        sides = []
        for v in range(self.graph.n_nodes):
            b = self.bit_of(v)
            sides.append(0 if b is None else (x >> b) & 1)
        return sides


def _as_int(model: CostModel, x) -> int:
    if isinstance(x, (int, np.integer)):
        x = int(x)
        if not 0 <= x < model.dim:
            raise ValueError(f"configuration {x} out of range for {model.n_qubits} bits")
        return x
    bits = list(x)
    if len(bits) != model.n_qubits:
        raise ValueError(f"expected {model.n_qubits} bits, got {len(bits)}")
    if any(b not in (0, 1) for b in bits):
        raise ValueError("bits must be 0 or 1")
    return sum(int(b) << i for i, b in enumerate(bits))


def cut_energy(model: CostModel, x: int | Sequence[int]) -> int:
    """Minus the number of cut edges; ``x`` is a packed int or a bit sequence (bit i first)."""
    sides = model.config_to_sides(_as_int(model, x))
    return -sum(1 for u, v in model.graph.edges if sides[u] != sides[v])


@dataclass(frozen=True)
class SpectrumStats:
    E_gs: int
    E_fs: int
    delta_H1: int
    mean_H1: Fraction
    gs_degeneracy: int
    fs_degeneracy: int
    ground_config: int

    def to_dict(self) -> dict:
        return {
            "E_gs": self.E_gs,
            "E_fs": self.E_fs,
            "delta_H1": self.delta_H1,
            "mean_H1": fraction_to_json(self.mean_H1),
            "gs_degeneracy": self.gs_degeneracy,
            "fs_degeneracy": self.fs_degeneracy,
            "ground_config": self.ground_config,
        }


def spectrum_stats(model: CostModel) -> SpectrumStats:
    e = model.energies()
    levels, counts = np.unique(e, return_counts=True)
    if len(levels) < 2:
        raise SpectrumError("cost function is constant; no first excited level")
    total = int(e.sum(dtype=np.int64))
    return SpectrumStats(
        E_gs=int(levels[0]),
        E_fs=int(levels[1]),
        delta_H1=int(levels[1] - levels[0]),
        mean_H1=Fraction(total, model.dim),
        gs_degeneracy=int(counts[0]),
        fs_degeneracy=int(counts[1]),
        ground_config=int(np.argmin(e)),
    )


def loc_set(model: CostModel) -> np.ndarray:
    """Configurations at the first excited energy, ascending."""
    e = model.energies()
    stats = spectrum_stats(model)
    return np.flatnonzero(e == stats.E_fs).astype(np.int64)


def alpha_T(stats: SpectrumStats, n_for_theorem: int) -> tuple[Fraction, Fraction]:
    """Return ``(alpha_T, n_for_theorem * alpha_T)`` as exact rationals.

    ``alpha_T = delta_H1 / (mean_H1 - E_gs)``.
    """
    denom = stats.mean_H1 - stats.E_gs
    assert denom > 0, "mean energy must exceed the ground energy"
    a = Fraction(stats.delta_H1) / denom
    return a, n_for_theorem * a

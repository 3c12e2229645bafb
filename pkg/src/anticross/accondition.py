"""First-order energy lines, their crossing times, and the avoided-crossing regime test."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .graphs import GrkParams
from .locgraph import LocGraph, build_gloc
from .maxcut import CostModel, SpectrumStats, alpha_T, fraction_to_json, spectrum_stats
from .perturbation import validity_report

AC = "AC"
NO_AC = "NO_AC"
UNDEFINED = "UNDEFINED"
REGIMES = (AC, NO_AC, UNDEFINED)

NODE_COUNT = "node_count"
QUBIT_COUNT = "qubit_count"

GUARD = 1e-8


@dataclass(frozen=True)
class EnergyLines:
    """Affine energy estimates on s in [0, 1].

    ``deg_avg_loc``/``deg_max_loc`` are those of the G_loc component that
    carries ``lambda0``, so ``deg_avg_loc <= lambda0 <= deg_max_loc``.
    """

    n_deloc: int
    mean_H1: Fraction
    E_gs: int
    E_fs: int
    lambda0: float
    deg_avg_loc: Fraction
    deg_max_loc: int

    @classmethod
    def from_model(cls, model: CostModel, locgraph: LocGraph,
                   stats: SpectrumStats | None = None) -> "EnergyLines":
        stats = stats or spectrum_stats(model)
        maj = locgraph.major_component
        return cls(
            n_deloc=model.n_qubits,
            mean_H1=stats.mean_H1,
            E_gs=stats.E_gs,
            E_fs=stats.E_fs,
            lambda0=locgraph.lambda0,
            deg_avg_loc=maj.deg_avg if maj else Fraction(0),
            deg_max_loc=maj.deg_max if maj else 0,
        )

    @property
    def delta_H1(self) -> int:
        return self.E_fs - self.E_gs

    def deloc(self, s):
        s = np.asarray(s, dtype=float)
        return -(1 - s) * self.n_deloc + s * float(self.mean_H1)

    def glob(self, s):
        return np.asarray(s, dtype=float) * self.E_gs

    def loc(self, s):
        s = np.asarray(s, dtype=float)
        return s * self.E_fs - (1 - s) * self.lambda0

    def loc_minus(self, s):
        s = np.asarray(s, dtype=float)
        return s * self.E_fs - (1 - s) * self.deg_max_loc

    def loc_plus(self, s):
        s = np.asarray(s, dtype=float)
        return s * self.E_fs - (1 - s) * float(self.deg_avg_loc)


@dataclass(frozen=True)
class CrossingTimes:
    s_dg: float | None
    s_dl: float | None
    s_lg: float | None
    s_lg_plus: float | None
    s_lg_minus: float | None
    flags: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return dict(s_dg=self.s_dg, s_dl=self.s_dl, s_lg=self.s_lg,
                    s_lg_plus=self.s_lg_plus, s_lg_minus=self.s_lg_minus, flags=list(self.flags))


def _ratio(num: float, den: float, name: str, flags: list) -> float | None:
    if den == 0 or not math.isfinite(num / den):
        flags.append(f"{name}-undefined")
        return None
    val = num / den
    if not -1e-12 <= val <= 1 + 1e-12:
        flags.append(f"{name}-outside-unit-interval")
    return val


def crossing_times(lines: EnergyLines) -> CrossingTimes:
    n = lines.n_deloc
    lam = lines.lambda0
    mean = float(lines.mean_H1)
    dh = lines.delta_H1
    avg = float(lines.deg_avg_loc)
    mx = lines.deg_max_loc
    flags: list[str] = []
    return CrossingTimes(
        s_dg=_ratio(n, n + mean - lines.E_gs, "s_dg", flags),
        s_dl=_ratio(n - lam, n - lam + mean - lines.E_fs, "s_dl", flags),
        s_lg=_ratio(lam, dh + lam, "s_lg", flags),
        s_lg_plus=_ratio(avg, dh + avg, "s_lg_plus", flags),
        s_lg_minus=_ratio(mx, dh + mx, "s_lg_minus", flags),
        flags=tuple(flags),
    )


def theorem_regime(lam: float, n_alpha: Fraction) -> tuple[str, bool]:
    """Compare lambda0 with n*alpha_T. Returns ``(regime, on_boundary)``."""
    target = float(n_alpha)
    if abs(lam - target) < GUARD * max(1.0, target):
        return UNDEFINED, True
    return (AC if lam > target else NO_AC), False


def corollary_regime(deg_avg: Fraction, deg_max: int, n_alpha: Fraction) -> tuple[str, bool]:
    """Degree-bound version of the test, in exact arithmetic."""
    if deg_avg > n_alpha:
        return AC, False
    if deg_max < n_alpha:
        return NO_AC, False
    return UNDEFINED, (deg_avg == n_alpha or deg_max == n_alpha)


@dataclass(frozen=True)
class AcVerdict:
    regime: str
    corollary: str
    n_convention: str
    via_theorem: dict
    via_corollary: dict
    n_alpha: dict
    alpha: Fraction
    lambda0: float
    deg_avg_loc: Fraction
    deg_max_loc: int
    delta_H1: int
    times: CrossingTimes
    s_lg: float | None
    s_lg_interval: tuple[float, float] | None
    flags: tuple[str, ...]
    validity: dict | None = field(default=None)

    @property
    def hypothesis_ok(self) -> bool:
        return not {"gs-degenerate", "fs-nondegenerate"} & set(self.flags)

    def to_dict(self) -> dict:
        return {
            "regime": self.regime,
            "corollary_regime": self.corollary,
            "n_convention": self.n_convention,
            "via_theorem": dict(self.via_theorem),
            "via_corollary": dict(self.via_corollary),
            "n_alpha_T": {k: fraction_to_json(v) for k, v in self.n_alpha.items()},
            "n_alpha_T_float": {k: float(v) for k, v in self.n_alpha.items()},
            "alpha_T": fraction_to_json(self.alpha),
            "lambda0": self.lambda0,
            "deg_avg_loc": fraction_to_json(self.deg_avg_loc),
            "deg_max_loc": self.deg_max_loc,
            "delta_H1": self.delta_H1,
            "crossing_times": self.times.to_dict(),
            "s_lg": self.s_lg,
            "s_lg_interval": list(self.s_lg_interval) if self.s_lg_interval else None,
            "flags": list(self.flags),
            "hypothesis_ok": self.hypothesis_ok,
            "validity": self.validity,
        }


def classify(model: CostModel, locgraph: LocGraph | None = None,
             n_convention: str = NODE_COUNT, validity: bool = True) -> AcVerdict:
    """Regime of the avoided-crossing test for ``model``.

    The primary regime compares lambda0 of G_loc against n*alpha_T with a
    relative guard band of 1e-8 (inside it: UNDEFINED, flagged
    ``boundary-equality``). The degree-bound regime uses the major
    component's average and maximum degree in exact arithmetic. Both are
    given for ``n`` = node count and ``n`` = free-qubit count; ``regime`` and
    ``corollary`` follow ``n_convention``.

    When the ground level is degenerate or the first excited level is not,
    the hypotheses fail: the regime is NO_AC and the matching flag is set.
    With ``validity`` the second-order report is attached as a dict.
    """
    if n_convention not in (NODE_COUNT, QUBIT_COUNT):
        raise ValueError(f"unknown n convention {n_convention!r}")
    stats = spectrum_stats(model)
    locgraph = locgraph if locgraph is not None else build_gloc(model)
    lines = EnergyLines.from_model(model, locgraph, stats)
    times = crossing_times(lines)

    flags: list[str] = []
    if stats.gs_degeneracy > 1:
        flags.append("gs-degenerate")
    if stats.fs_degeneracy == 1:
        flags.append("fs-nondegenerate")
    if locgraph.major_tie:
        flags.append("major-component-tie")
    flags.extend(locgraph.flags)
    flags.extend(times.flags)

    alpha, _ = alpha_T(stats, 1)
    n_alpha = {NODE_COUNT: model.graph.n_nodes * alpha, QUBIT_COUNT: model.n_qubits * alpha}
    via_thm, via_cor = {}, {}
    for conv, na in n_alpha.items():
        via_thm[conv], b1 = theorem_regime(lines.lambda0, na)
        via_cor[conv], b2 = corollary_regime(lines.deg_avg_loc, lines.deg_max_loc, na)
        if conv == n_convention:
            if b1:
                flags.append("boundary-equality")
            if b2:
                flags.append("corollary-boundary-equality")

    regime = via_thm[n_convention]
    corollary = via_cor[n_convention]
    if stats.gs_degeneracy > 1 or stats.fs_degeneracy == 1:
        regime = NO_AC
    interval = None
    if regime == AC and times.s_lg_plus is not None and times.s_lg_minus is not None:
        interval = (times.s_lg_plus, times.s_lg_minus)
    return AcVerdict(
        regime=regime,
        corollary=corollary,
        n_convention=n_convention,
        via_theorem=via_thm,
        via_corollary=via_cor,
        n_alpha=n_alpha,
        alpha=alpha,
        lambda0=lines.lambda0,
        deg_avg_loc=lines.deg_avg_loc,
        deg_max_loc=lines.deg_max_loc,
        delta_H1=stats.delta_H1,
        times=times,
        s_lg=times.s_lg if regime == AC else None,
        s_lg_interval=interval,
        flags=tuple(flags),
        validity=validity_report(model, locgraph).to_dict() if validity else None,
    )


@dataclass(frozen=True)
class GrkInequality:
    holds: bool
    k: Fraction
    bound: Fraction | None  # 2(r+l) / (r(r-2) + l(l-2)); None when the denominator vanishes
    deg_avg_loc: Fraction  # 4(1 - 1/(k+1)), lattice component
    n_alpha: Fraction  # 4 * deg_min(G) / deg_avg(G) with deg_min = 2

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "k": fraction_to_json(self.k),
            "bound": fraction_to_json(self.bound) if self.bound is not None else None,
            "deg_avg_loc": fraction_to_json(self.deg_avg_loc),
            "n_alpha_T": fraction_to_json(self.n_alpha),
        }


def grk_ac_inequality(p: GrkParams) -> GrkInequality:
    """Closed-form degree test for the two-block family, ``k > 2(r+l)/(r(r-2)+l(l-2))``."""
    r, l, k = p.r, p.l, p.k
    den = r * (r - 2) + l * (l - 2)
    bound = Fraction(2 * (r + l), den) if den else None
    holds = bound is not None and Fraction(k) > bound
    deg_avg_g = Fraction(2 * k + r * r + l * l + 2, k + r + l)
    return GrkInequality(holds, Fraction(k), bound, 4 * (1 - Fraction(1, k + 1)), 8 / deg_avg_g)

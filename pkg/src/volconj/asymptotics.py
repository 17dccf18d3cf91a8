"""Growth rates of Jones values, limit extrapolation and the saddle-point amplitude."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np

from .jones import FULL, SumWindow, diagonal_colors, jones_value
from .links import IteratedDoubleFigEight, LinkFamily, parse_link
from .numeric import EvalPoint, make_eval_point
from .potential import build_potential, e_factor_wd0, eval_potential, hess
from .special import qd_corner_factor


@dataclass(frozen=True)
class DiagonalN:
    pass


@dataclass(frozen=True)
class RatioTargets:
    ratios: tuple

    def __post_init__(self):
        object.__setattr__(self, "ratios", tuple(float(s) for s in self.ratios))
        if not self.ratios or any(not 0 < s <= 1 for s in self.ratios):
            raise ValueError("ratio targets must lie in (0, 1]")

    def colors(self, N: int, k: int):
        rs = self.ratios if len(self.ratios) == k else self.ratios * k if len(self.ratios) == 1 else None
        if rs is None or len(rs) != k:
            raise ValueError(f"need 1 or {k} ratio targets")
        return tuple(min(N, max(1, round(s * (N + 0.5)))) for s in rs)


@dataclass(frozen=True)
class GrowthSample:
    N: int
    r: int
    colors: tuple
    target_ratio: tuple
    achieved_ratio: tuple
    log_abs_j: float
    g: float


@dataclass
class GrowthFit:
    limit: float
    c_logN_over_N: float
    c_over_N: float
    residual: float
    used: int


@dataclass
class GrowthTable:
    samples: list
    fit: GrowthFit | None
    predicted_limit: float | None = None
    extra: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["N", "r", "target_ratio", "achieved_ratio", "log_abs_j", "g", "predicted_limit", "gap"])
        for s in self.samples:
            pred = "" if self.predicted_limit is None else f"{self.predicted_limit:.12g}"
            gap = "" if self.predicted_limit is None else f"{s.g - self.predicted_limit:.12g}"
            w.writerow([
                s.N, s.r,
                ";".join(f"{x:.6f}" for x in s.target_ratio),
                ";".join(f"{x:.6f}" for x in s.achieved_ratio),
                f"{s.log_abs_j:.15g}", f"{s.g:.15g}", pred, gap,
            ])
        return buf.getvalue()


def fit_growth(Ns, gs) -> GrowthFit:
    """Least squares g(N) = v + a log(N)/N + b/N over the finite samples."""
    pts = sorted((int(n), float(g)) for n, g in zip(Ns, gs) if math.isfinite(g))
    if len(pts) < 3:
        raise ValueError("need at least three finite samples to fit")
    N = np.array([p[0] for p in pts], dtype=float)
    y = np.array([p[1] for p in pts])
    A = np.column_stack([np.ones_like(N), np.log(N) / N, 1 / N])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    res = float(np.sqrt(np.mean((A @ coef - y) ** 2)))
    return GrowthFit(float(coef[0]), float(coef[1]), float(coef[2]), res, len(pts))


def _sample(args):
    spec, N, digits, rule, eta, budget = args
    link = parse_link(spec)
    ep = make_eval_point(N, digits)
    k = 1 if isinstance(rule, DiagonalN) else len(diagonal_colors(link, N))
    if isinstance(rule, DiagonalN):
        colors = diagonal_colors(link, N)
        targets = (1.0,) * len(colors)
    else:
        colors = rule.colors(N, k)
        targets = rule.ratios if len(rule.ratios) == k else rule.ratios * k
    J = jones_value(link, colors, ep, SumWindow(eta), budget)
    with ep.workdps():
        a = abs(J)
        log_abs = float(mp.log(a)) if a != 0 else -math.inf
    g = 2 * math.pi / (N + 0.5) * log_abs
    achieved = tuple(m / (N + 0.5) for m in colors)
    return GrowthSample(N, ep.r, colors, tuple(targets), achieved, log_abs, g)


def growth_sequence(link: LinkFamily, color_rule=None, N_list=(), win: SumWindow = FULL,
                    precision=None, budget: int | None = None, workers: int = 1,
                    predicted_limit=None) -> GrowthTable:
    """g(N) = (2 pi/(N+1/2)) log|J| over ``N_list`` plus the extrapolated limit."""
    rule = DiagonalN() if color_rule is None else color_rule
    Ns = sorted(set(int(n) for n in N_list))
    if not Ns:
        raise ValueError("empty N list")
    digits = make_eval_point(1, precision).digits
    tasks = [(link.spec(), N, digits, rule, win.eta, budget) for N in Ns]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            samples = list(pool.map(_sample, tasks))
    else:
        samples = [_sample(t) for t in tasks]
    fit = fit_growth([s.N for s in samples], [s.g for s in samples]) if len(samples) >= 3 else None
    return GrowthTable(samples, fit, None if predicted_limit is None else float(predicted_limit))


# --------------------------------------------------------------------------
# saddle point


def _saddle_pieces(dps: int):
    with mp.workdps(dps):
        spec = build_potential(IteratedDoubleFigEight(0))
        z = [mp.mpf(1) / 2, mp.mpf(1) / 4, mp.mpf(5) / 6]
        H = hess(spec, z)
        crit = eval_potential(spec, z, with_shift=True)
        E = e_factor_wd0(*z)
        return H, crit, E


def saddle_prediction(ep: EvalPoint, link: LinkFamily | None = None):
    """Leading saddle-point term for J_N(W_{0,1,1,0}(4_1)).

    -(N+1/2)/pi * exp(-(r/4 pi i) phi_r(pi/r)) * (N+1/2)^{3/2} e^{-23 pi i/12}
      * (2 pi)^{3/2} E / sqrt(-det Hess) * exp((N+1/2) Phi_crit)
    with the principal square root.  Phi_crit is the computed critical value
    of the shifted potential, (V + i CS)/(2 pi).
    """
    if link is not None and link != IteratedDoubleFigEight(0):
        raise ValueError("the saddle prediction is implemented for W_{0,1,1,0}(4_1) only")
    with ep.workdps():
        H, crit, E = _saddle_pieces(ep.digits)
        s = ep.scale
        corner = qd_corner_factor(ep.r)
        amp = (-s / mp.pi * corner * s ** mp.mpf(1.5) * mp.expjpi(-mp.mpf(23) / 12)
               * (2 * mp.pi) ** mp.mpf(1.5) * E / mp.sqrt(-mp.det(H)))
        return amp * mp.exp(s * crit)


def compare_report(direct, predicted, Ns=None):
    """Per-sample ratio, modulus ratio and phase difference."""
    direct, predicted = list(direct), list(predicted)
    if len(direct) != len(predicted):
        raise ValueError("direct and predicted sequences differ in length")
    Ns = list(Ns) if Ns is not None else list(range(len(direct)))
    rows = []
    for n, d, p in zip(Ns, direct, predicted):
        ratio = mp.mpc(d) / mp.mpc(p)
        rows.append({
            "N": n,
            "ratio_re": float(mp.re(ratio)),
            "ratio_im": float(mp.im(ratio)),
            "modulus_ratio": float(abs(ratio)),
            "phase_diff": float(mp.arg(ratio)),
        })
    return rows


def report_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "ratio_re", "ratio_im", "modulus_ratio", "phase_diff"])
    for r in rows:
        w.writerow([r["N"]] + [f"{r[k]:.12g}" for k in ("ratio_re", "ratio_im", "modulus_ratio", "phase_diff")])
    return buf.getvalue()

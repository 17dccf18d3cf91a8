"""Dilogarithm, Lobachevsky function and the quantum dilogarithm phi_r.

``dilog`` reduces its argument into a region where either the power series
or the Bernoulli series in -log(1-z) converges quickly.  ``quantum_dilog``
integrates the defining contour integral with fixed node sets: the two
infinite tails are swung onto straight rays in the direction of fastest
decay (capped at 45 degrees so the rays stay clear of the poles on the
imaginary axis) and summed with an exp-sinh rule, and the semicircle uses
Gauss-Legendre nodes.  The z-independent part of the integrand is cached
per node set, so each evaluation costs one exponential per node.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp


class BranchCutWarning(UserWarning):
    """Argument on (1, inf); the upper-edge limit was returned."""


class DomainError(ValueError):
    pass


# --------------------------------------------------------------------------
# classical dilogarithm

def _li2_series(z):
    total = mp.mpc(0)
    term = z
    k = 1
    eps = mp.eps
    while True:
        add = term / (k * k)
        total += add
        if abs(add) < eps * abs(total) or abs(add) == 0:
            return total
        k += 1
        term *= z


@lru_cache(maxsize=8)
def _bernoulli_table(dps: int):
    with mp.workdps(dps):
        out = []
        n = 0
        while True:
            b = mp.bernoulli(n)
            out.append(b / mp.factorial(n + 1))
            # |u| < 2.5 in this branch; stop once (2.5/2pi)^n drops below eps
            if n > 10 and (2.5 / (2 * math.pi)) ** n < 10 ** (-dps - 5):
                return tuple(out)
            n += 1


def _li2_bernoulli(z):
    u = -mp.log(1 - z)
    coeffs = _bernoulli_table(mp.mp.dps)
    total = mp.mpc(0)
    up = u
    for c in coeffs:
        if c:
            total += c * up
        up *= u
    return total


def _li2(z):
    if z == 0:
        return mp.mpc(0)
    if z == 1:
        return mp.pi ** 2 / 6
    az = abs(z)
    if az <= 0.5:
        return _li2_series(z)
    if az > 1:
        w = 1 / z
        # inversion; log(-z) on the principal branch, with the upper edge
        # of the cut (Im z = +0) mapped to arg(-z) = -pi
        if mp.im(z) == 0 and mp.re(z) > 1:
            lg = mp.log(mp.re(z)) - 1j * mp.pi
            w = mp.mpc(mp.re(w), -mp.mpf(0))
            inner = mp.conj(_li2(mp.mpc(mp.re(w), 0)))
            return -mp.pi ** 2 / 6 - lg ** 2 / 2 - inner
        return -mp.pi ** 2 / 6 - mp.log(-z) ** 2 / 2 - _li2(w)
    if abs(1 - z) < 0.5:
        return mp.pi ** 2 / 6 - mp.log(z) * mp.log(1 - z) - _li2(1 - z)
    return _li2_bernoulli(z)


def dilog(z):
    """Principal branch Li_2(z) = -int_0^z log(1-u)/u du."""
    z = mp.mpc(z)
    if mp.im(z) == 0 and mp.re(z) > 1:
        warnings.warn(f"dilog argument {z} lies on the branch cut", BranchCutWarning, stacklevel=2)
    with mp.workdps(mp.mp.dps + 10):
        out = _li2(z)
    return +out


def lobachevsky(theta):
    """Lambda(theta) = -int_0^theta log|2 sin u| du = (1/2) Im Li_2(e^{2 i theta})."""
    theta = mp.mpf(theta)
    with mp.workdps(mp.mp.dps + 10):
        val = mp.im(_li2(mp.expj(2 * theta))) / 2
    return +val


# --------------------------------------------------------------------------
# quantum dilogarithm

@dataclass(frozen=True)
class ContourConfig:
    epsilon: float = 0.5
    quad_points: int = 0      # Gauss-Legendre nodes on the semicircle; 0 = from precision
    cutoff: float = 0.0       # tail truncation in units of the ray decay length; 0 = from precision
    step: float = 0.0         # exp-sinh step; 0 = from precision

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")


DEFAULT_CONTOUR = ContourConfig()
_ANGLES = 16          # ray directions are multiples of (pi/4)/_ANGLES


def _resolve(cfg: ContourConfig, dps: int):
    step = cfg.step or 0.55 / (dps + 8)
    cutoff = cfg.cutoff or (dps + 15) * math.log(10) + 10
    gl_degree = 1
    want = cfg.quad_points or 3 * (dps + 12)
    while 3 * 2 ** (gl_degree - 1) < want:
        gl_degree += 1
    return step, cutoff, gl_degree


@lru_cache(maxsize=16)
def _exp_sinh_nodes(step: float, cutoff: float, dps: int):
    """Nodes and weights for int_0^inf F(u) du with F ~ e^{-u}."""
    with mp.workdps(dps):
        h = mp.mpf(step)
        lo = mp.mpf(10) ** (-dps - 5)
        pts = []
        for direction in (1, -1):
            k = 0 if direction == 1 else -1
            while True:
                tk = k * h
                x = mp.exp(mp.pi / 2 * mp.sinh(tk))
                if x > cutoff or x < lo:
                    break
                pts.append((x, h * mp.pi / 2 * mp.cosh(tk) * x))
                k += direction
        return tuple(pts)


def _kernel(x, r):
    e1 = mp.exp(mp.pi * x)
    e2 = mp.exp(2 * mp.pi * x / r)
    return 1 / (x * (e1 - 1 / e1) * (e2 - 1 / e2))


@lru_cache(maxsize=256)
def _ray_table(r: int, angle_idx: int, scale_exp: int, eps: float, step: float,
               cutoff: float, dps: int):
    """Points x_j on eps + e^{i theta}[0, inf) and weights w_j/(4 x sinh sinh)."""
    with mp.workdps(dps):
        theta = mp.pi / 4 * angle_idx / _ANGLES
        e = mp.expj(theta)
        kappa = mp.mpf(2) ** scale_exp
        xs, ws = [], []
        for u, w in _exp_sinh_nodes(step, cutoff, dps):
            x = mp.mpf(eps) + e * u / kappa
            xs.append(x)
            ws.append(w * e / kappa * _kernel(x, r))
        return tuple(xs), tuple(ws)


@lru_cache(maxsize=64)
def _semicircle_table(r: int, eps: float, degree: int, dps: int):
    with mp.workdps(dps):
        raw = mp.calculus.quadrature.GaussLegendre(mp.mp).calc_nodes(degree, mp.mp.prec)
        xs, ws = [], []
        for s, w in raw:
            th = mp.pi / 2 * (s + 1)
            x = mp.mpf(eps) * mp.expj(th)
            xs.append(x)
            # d x = i x d theta; the semicircle runs from -eps to +eps (theta: pi -> 0)
            ws.append(-mp.pi / 2 * w * 1j * x * _kernel(x, r))
        return tuple(xs), tuple(ws)


def _ray_choice(c, b):
    """Quantized direction and scale for a tail whose integrand decays like e^{(-c+ib)x}."""
    theta = math.atan2(b, c)
    cap = math.pi / 4
    theta = max(-cap, min(cap, theta))
    idx = int(round(theta / cap * _ANGLES))
    th = cap * idx / _ANGLES
    kappa = c * math.cos(th) + b * math.sin(th)
    if kappa <= 0:
        raise DomainError("contour tail does not decay")
    return idx, math.floor(math.log2(kappa))


def _phi_strip(z, r: int, cfg: ContourConfig, dps: int):
    step, cutoff, degree = _resolve(cfg, dps)
    eps = float(cfg.epsilon)
    w = 2 * z - mp.pi
    a = float(mp.re(w))
    b = float(mp.im(w))
    top = math.pi + 2 * math.pi / r
    # right tail e^{w x}; left tail contributes -e^{-w y} on y in [eps, inf)
    ir, sr = _ray_choice(top - a, b)
    il, sl = _ray_choice(top + a, -b)
    xr, wr = _ray_table(r, ir, sr, eps, step, cutoff, dps)
    xl, wl = _ray_table(r, il, sl, eps, step, cutoff, dps)
    xs, ws = _semicircle_table(r, eps, degree, dps)
    acc = mp.fsum(wj * mp.exp(w * xj) for xj, wj in zip(xr, wr))
    acc -= mp.fsum(wj * mp.exp(-w * xj) for xj, wj in zip(xl, wl))
    acc += mp.fsum(wj * mp.exp(w * xj) for xj, wj in zip(xs, ws))
    return 4j * mp.pi / r * acc


def quantum_dilog(z, r: int, cfg: ContourConfig = DEFAULT_CONTOUR, continue_outside: bool = False):
    """phi_r(z) = (4 pi i/r) int_Omega e^{(2z-pi)x} / (4x sinh(pi x) sinh(2 pi x/r)) dx.

    The integral converges for -pi/r < Re z < pi + pi/r.  With
    ``continue_outside`` the value to the right of the strip is obtained
    from the difference equation
    phi_r(z) = phi_r(z - 2pi/r) - (4 pi i/r) log(1 - e^{2i(z - pi/r)}),
    which fixes one holomorphic continuation (principal log at every step).
    """
    if r < 3 or r % 2 == 0:
        raise ValueError("r must be an odd integer >= 3")
    z = mp.mpc(z)
    dps = mp.mp.dps
    lo, hi = -math.pi / r, math.pi + math.pi / r
    re = float(mp.re(z))
    with mp.workdps(dps + 12):
        if lo < re < hi:
            out = _phi_strip(z, r, cfg, dps + 12)
        elif continue_outside and re >= hi:
            shift = 2 * mp.pi / r
            steps = int(math.floor((re - math.pi / 2) / (2 * math.pi / r)))
            base = z - steps * shift
            out = _phi_strip(base, r, cfg, dps + 12)
            for j in range(1, steps + 1):
                zj = base + j * shift
                out -= 4j * mp.pi / r * mp.log(1 - mp.expj(2 * (zj - mp.pi / r)))
        else:
            raise DomainError(f"Re z = {re} outside ({lo}, {hi})")
    return +out


def qd_corner_factor(r: int, mirror: bool = False, cfg: ContourConfig = DEFAULT_CONTOUR):
    """exp(-(r/4 pi i) phi_r(pi/r)), or exp(+(r/4 pi i) phi_r(pi - pi/r)) when mirrored."""
    if r < 3:
        raise ValueError("r must be >= 3")
    with mp.workdps(mp.mp.dps + 5):
        if mirror:
            val = mp.exp(r / (4j * mp.pi) * quantum_dilog(mp.pi - mp.pi / r, r, cfg))
        else:
            val = mp.exp(-r / (4j * mp.pi) * quantum_dilog(mp.pi / r, r, cfg))
    return +val

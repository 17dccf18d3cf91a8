"""Colored Jones polynomials of the link families at t = exp(2 pi i/(N+1/2)).

Every family is assembled from three kernels:

* ``C0(n; K)``, the prefactor-free clasp coefficient
  sum_l t^{-K(l+n)} (t)_{K-l-1}(t)_{l+n} / ((t)_n (t)_{K-l-n-1} (t)_l);
* the framed version ``C(n; K) = t^{K^2 - K/2 - 1/2} C0(n; K)``;
* the figure-eight values ``[M] J'_M(4_1)``.

Iterated Whitehead doubles are evaluated by the recursion
F_0(K) = [K] J'_K(4_1),  F_{p+1}(K) = sum_n C(n; K) F_p(2n+1),
which visits exactly the tuples of the nested sum but shares the inner
sums between outer indices.  Colors may exceed r at inner levels of a full
sum; Gaussian binomials are then reduced with the q-Lucas theorem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import mpmath as mp

from .numeric import EvalPoint, qbinom, quantum_int

DEFAULT_BUDGET = 2 * 10 ** 8

N_RATIO = mp.mpf(1) / 2
L_RATIO = mp.mpf(1) / 4
K_RATIO = mp.mpf(5) / 6


class BudgetExceeded(RuntimeError):
    """Full summation would exceed the term budget; use a restricted window."""


@dataclass(frozen=True)
class SumWindow:
    eta: float | None = None

    def __post_init__(self):
        if self.eta is not None and not 0 < self.eta < 0.25:
            raise ValueError("window eta must lie in (0, 1/4)")

    @property
    def full(self) -> bool:
        return self.eta is None

    def bounds(self, center, scale, lo: int, hi: int):
        """Inclusive integer range, rounded outward, clipped to [lo, hi]."""
        if self.eta is None:
            return lo, hi
        a = math.floor((float(center) - self.eta) * float(scale))
        b = math.ceil((float(center) + self.eta) * float(scale))
        return max(lo, a), min(hi, b)


FULL = SumWindow()


def restricted(eta: float) -> SumWindow:
    return SumWindow(float(eta))


# --------------------------------------------------------------------------
# figure-eight knot

def jones_fig8_normalized(M: int, ep: EvalPoint):
    """Habiro sum for J'_M(4_1) from the Pochhammer table (M <= N)."""
    if not 1 <= M <= ep.N:
        raise ValueError(f"color {M} outside [1, {ep.N}]")
    with ep.workdps():
        P = ep.pochhammer
        total = mp.mpc(0)
        for k in range(M):
            total += ep.tpow(-k * M) * P[M + k] / P[M - k - 1]
        return total / (1 - ep.tpow(M))


def _fig8_product(M: int, ep: EvalPoint, klo: int = 0, khi: int | None = None):
    """sum_k t^{-kM} prod_{j<=k} (1 - t^{M-j})(1 - t^{M+j}), any M >= 1."""
    khi = M - 1 if khi is None else min(khi, M - 1)
    total = mp.mpc(0)
    prod = mp.mpc(1)
    for k in range(0, khi + 1):
        if k:
            prod *= (1 - ep.tpow(M - k)) * (1 - ep.tpow(M + k))
            if prod == 0:
                break
        if k >= klo:
            total += ep.tpow(-k * M) * prod
    return total


def jones_fig8_any(M: int, ep: EvalPoint):
    """J'_M(4_1) for any color M >= 1 (product form of the Habiro sum)."""
    if M < 1:
        raise ValueError("color must be positive")
    with ep.workdps():
        return _fig8_product(M, ep)


def jones_fig8(M: int, ep: EvalPoint):
    """Unnormalized J_M(4_1) = [M] J'_M(4_1)."""
    with ep.workdps():
        return quantum_int(M, ep) * _fig8_product(M, ep)


# --------------------------------------------------------------------------
# clasp coefficients

def _c0_ratio(n, K, ep, lo, hi):
    P = ep.pochhammer
    total = mp.mpc(0)
    for l in range(lo, hi + 1):
        total += (ep.tpow(-K * (l + n)) * P[K - l - 1] * P[l + n]
                  / (P[n] * P[K - l - n - 1] * P[l]))
    return total


def _c0_lucas(n, K, ep, lo, hi):
    pn = ep.poch(n)
    if pn == 0:
        return mp.mpc(0)
    total = mp.mpc(0)
    for l in range(lo, hi + 1):
        total += ep.tpow(-K * (l + n)) * qbinom(K - l - 1, n, ep) * qbinom(l + n, n, ep)
    return pn * total


def _c0(n, K, ep, win: SumWindow = FULL):
    lo, hi = win.bounds(L_RATIO, ep.scale, 0, K - 1 - n)
    if lo > hi:
        return mp.mpc(0)
    if K <= ep.r - 1:
        return _c0_ratio(n, K, ep, lo, hi)
    return _c0_lucas(n, K, ep, lo, hi)


def cable_coeff(n: int, K: int, ep: EvalPoint, mirrored: bool = False, win: SumWindow = FULL):
    """C(n, t; K) without global prefactor; ``mirrored`` evaluates at 1/t."""
    if K < 1 or not 0 <= n <= K - 1:
        raise ValueError(f"need 0 <= n <= K-1, got n={n}, K={K}")
    if mirrored:
        ep = ep.conjugate()
    with ep.workdps():
        return _c0(n, K, ep, win)


def _framing(K, ep):
    # t^{K^2 - K/2 - 1/2} = t_half^{2K^2 - K - 1}
    return ep.hpow(2 * K * K - K - 1)


class _Kernels:
    """Per-evaluation memo of C(n; K) and [K] J'_K."""

    def __init__(self, ep: EvalPoint, win: SumWindow):
        self.ep = ep
        self.win = win
        self._c = {}
        self._f = {}
        self.terms = 0

    def n_range(self, K):
        return self.win.bounds(N_RATIO, self.ep.scale, 0, K - 1)

    def c_full(self, n, K):
        key = (n, K)
        v = self._c.get(key)
        if v is None:
            lo, hi = self.win.bounds(L_RATIO, self.ep.scale, 0, K - 1 - n)
            self.terms += max(0, hi - lo + 1)
            v = _framing(K, self.ep) * _c0(n, K, self.ep, self.win)
            self._c[key] = v
        return v

    def fig8(self, K):
        v = self._f.get(K)
        if v is None:
            ep = self.ep
            klo, khi = self.win.bounds(K_RATIO, ep.scale, 0, K - 1)
            self.terms += max(0, khi - klo + 1)
            v = quantum_int(K, ep) * _fig8_product(K, ep, klo, khi)
            self._f[K] = v
        return v

    def chain_step(self, dist: dict) -> dict:
        """One Whitehead doubling: weights on colors K -> weights on 2n+1."""
        out = {}
        for K in sorted(dist):
            w = dist[K]
            lo, hi = self.n_range(K)
            for n in range(lo, hi + 1):
                c = self.c_full(n, K)
                key = 2 * n + 1
                out[key] = out.get(key, 0) + w * c
        return out


def _ensure_budget(estimate: float, budget: int | None, what: str):
    budget = DEFAULT_BUDGET if budget is None else budget
    if estimate > budget:
        raise BudgetExceeded(
            f"{what}: about {estimate:.3g} terms exceeds the budget {budget}; use a restricted window"
        )


# --------------------------------------------------------------------------
# link families

def jones_whitehead_link(M1: int, M2: int, ep: EvalPoint, win: SumWindow = FULL):
    """J_{M1,M2}(WL) = sum_n [M1 (2n+1)] C(n; M2)."""
    for M in (M1, M2):
        if not 1 <= M <= ep.N:
            raise ValueError(f"color {M} outside [1, {ep.N}]")
    with ep.workdps():
        ker = _Kernels(ep, win)
        return _whitehead(ker, M1, M2)


def _whitehead(ker: _Kernels, A: int, B: int):
    ep = ker.ep
    lo, hi = ker.n_range(B)
    total = mp.mpc(0)
    for n in range(lo, hi + 1):
        total += quantum_int(A * (2 * n + 1), ep) * ker.c_full(n, B)
    return total


def jones_cabled_chain(a: int, c: int, d: int, ep: EvalPoint, win: SumWindow = FULL):
    """J_N(W_{a,1,c,d}(4_1)) with every color equal to N."""
    if c < 0 or d < 0 or c + d < 1:
        raise ValueError("need c, d >= 0 and c + d >= 1")
    N = ep.N
    with ep.workdps():
        epc = ep.conjugate()
        lo, hi = win.bounds(N_RATIO, ep.scale, 0, N - 1)
        if lo > hi:
            raise ValueError("empty summation window")
        total = mp.mpc(0)
        for n in range(lo, hi + 1):
            term = ep.tpow(a * n * (n + 1))
            if c:
                term *= _c0(n, N, ep, win) ** c
            if d:
                term *= _c0(n, N, epc, win) ** d
            if term == 0:
                continue
            M = 2 * n + 1
            klo, khi = win.bounds(K_RATIO, ep.scale, 0, M - 1)
            # (t)_{M+k}/(t)_{M-k-1} built up from the k = 0 value 1 - t^M
            tail = mp.mpc(0)
            prod = 1 - ep.tpow(M)
            for k in range(0, khi + 1):
                if k:
                    prod *= (1 - ep.tpow(M - k)) * (1 - ep.tpow(M + k))
                if k >= klo:
                    tail += ep.tpow(-n - k - 2 * n * k) * prod
            total += term * tail
        # t^{(N^2-1)/2 + (c-d) N(N-1)/2}
        pre = ep.hpow(N * N - 1 + (c - d) * N * (N - 1))
        return pre * total / (1 - ep.t)


def iterated_double_estimate(p: int, N: int) -> float:
    dim = 2 * p + 3
    return float(N) ** dim / math.factorial(dim)


def jones_iterated_double(p: int, ep: EvalPoint, win: SumWindow = FULL, budget: int | None = None):
    """J_N of the (p+1)-fold Whitehead double of 4_1."""
    if p < 0:
        raise ValueError("p must be nonnegative")
    if win.full:
        _ensure_budget(iterated_double_estimate(p, ep.N), budget, f"iterated double p={p}")
    with ep.workdps():
        ker = _Kernels(ep, win)
        return _iterated(ker, p, ep.N)


def _iterated(ker: _Kernels, p: int, M: int):
    dist = {M: mp.mpc(1)}
    for _ in range(p + 1):
        dist = ker.chain_step(dist)
    total = mp.mpc(0)
    for K in sorted(dist):
        total += dist[K] * ker.fig8(K)
    return total


def w_alpha_beta_estimate(alpha: int, beta: int, N: int) -> float:
    dim = 2 * (alpha + beta)
    return float(N) ** dim / math.factorial(dim)


def jones_w_alpha_beta(alpha: int, beta: int, M1: int, M2: int, ep: EvalPoint,
                       win: SumWindow = FULL, budget: int | None = None):
    """J_{M1,M2}(W^alpha_beta), the Hopf link with its components doubled alpha and beta times."""
    if alpha < 0 or beta < 0 or alpha + beta < 1:
        raise ValueError("need alpha, beta >= 0 and alpha + beta >= 1")
    for M in (M1, M2):
        if not 1 <= M <= ep.N:
            raise ValueError(f"color {M} outside [1, {ep.N}]")
    if alpha == 0:
        alpha, beta, M1, M2 = beta, alpha, M2, M1
    if win.full:
        _ensure_budget(w_alpha_beta_estimate(alpha, beta, ep.N), budget, "W^alpha_beta")
    with ep.workdps():
        ker = _Kernels(ep, win)
        left = {M1: mp.mpc(1)}
        for _ in range(alpha - 1):
            left = ker.chain_step(left)
        right = {M2: mp.mpc(1)}
        for _ in range(beta):
            right = ker.chain_step(right)
        total = mp.mpc(0)
        for B in sorted(left):
            for A in sorted(right):
                total += left[B] * right[A] * _whitehead(ker, A, B)
        return total


def jones_hopf_union_abs(jM1, jM2, M1: int, M2: int, ep: EvalPoint):
    """|[M1 M2] / ([M1][M2])| |J_{M1}(K1)| |J_{M2}(K2)|."""
    with ep.workdps():
        num = quantum_int(M1 * M2, ep)
        if num == 0:
            return mp.mpf(0)
        den = quantum_int(M1, ep) * quantum_int(M2, ep)
        return abs(num / den) * abs(jM1) * abs(jM2)


# --------------------------------------------------------------------------
# growth envelopes

def growth_envelope_g(M: int, k: int, ep: EvalPoint):
    """|(t)_{M+k} / (t)_{M-k-1}|."""
    if not (0 <= k <= M - 1 and M + k <= ep.r - 2):
        raise ValueError("index outside the envelope range")
    with ep.workdps():
        return abs(ep.pochhammer[M + k] / ep.pochhammer[M - k - 1])


def growth_envelope_c(M: int, n: int, l: int, ep: EvalPoint):
    """|(t)_{M-l-1}(t)_{l+n} / ((t)_n (t)_{M-l-n-1} (t)_l)|."""
    if not (0 <= n and 0 <= l and n + l <= M - 1 and M <= ep.r - 1):
        raise ValueError("index outside the envelope range")
    P = ep.pochhammer
    with ep.workdps():
        return abs(P[M - l - 1] * P[l + n] / (P[n] * P[M - l - n - 1] * P[l]))


def _log_abs_table(ep: EvalPoint):
    return [float(mp.log(abs(x))) for x in ep.pochhammer]


def argmax_envelope_g(M: int, ep: EvalPoint):
    L = _log_abs_table(ep)
    best = max(range(M), key=lambda k: L[M + k] - L[M - k - 1] if M + k <= ep.r - 2 else -math.inf)
    return best


def argmax_envelope_c(M: int, ep: EvalPoint):
    L = _log_abs_table(ep)
    best, arg = -math.inf, (0, 0)
    for n in range(M):
        for l in range(M - n):
            v = L[M - l - 1] + L[l + n] - L[n] - L[M - l - n - 1] - L[l]
            if v > best:
                best, arg = v, (n, l)
    return arg


JonesFn = Callable[[EvalPoint], object]


# --------------------------------------------------------------------------
# dispatch by family

class UnsupportedColoring(ValueError):
    """The family is only implemented for a subset of color vectors."""


def jones_knot(link, M: int, ep: EvalPoint, win: SumWindow = FULL, budget: int | None = None):
    """Unnormalized J_M of a knot family at any color M >= 1."""
    from .links import FigureEight, IteratedDoubleFigEight, Unknot

    if M < 1:
        raise ValueError("color must be positive")
    if isinstance(link, Unknot):
        return quantum_int(M, ep)
    if isinstance(link, FigureEight):
        return jones_fig8(M, ep)
    if isinstance(link, IteratedDoubleFigEight):
        if win.full:
            _ensure_budget(iterated_double_estimate(link.p, M), budget, f"iterated double p={link.p}")
        with ep.workdps():
            return _iterated(_Kernels(ep, win), link.p, M)
    raise UnsupportedColoring(f"{link.spec()} is not a knot family with arbitrary colors")


def jones_value(link, colors, ep: EvalPoint, win: SumWindow = FULL, budget: int | None = None):
    """J_colors(link) at t = exp(2 pi i/(N+1/2)); ``colors`` has one entry per colored component."""
    from .links import (HopfUnion, WAlphaBeta, WhiteheadChainCabledFigEight, WhiteheadLink)

    colors = tuple(int(m) for m in colors)
    if isinstance(link, WhiteheadLink):
        _want(colors, 2, link)
        return jones_whitehead_link(colors[0], colors[1], ep, win)
    if isinstance(link, WAlphaBeta):
        _want(colors, 2, link)
        return jones_w_alpha_beta(link.alpha, link.beta, colors[0], colors[1], ep, win, budget)
    if isinstance(link, HopfUnion):
        _want(colors, 2, link)
        M1, M2 = colors
        j1 = jones_knot(link.left, M1, ep, win, budget)
        j2 = jones_knot(link.right, M2, ep, win, budget)
        with ep.workdps():
            num = quantum_int(M1 * M2, ep)
            if num == 0:
                return mp.mpc(0)
            return num * j1 * j2 / (quantum_int(M1, ep) * quantum_int(M2, ep))
    if isinstance(link, WhiteheadChainCabledFigEight):
        if any(m != ep.N for m in colors):
            raise UnsupportedColoring("the cabled family is implemented for the diagonal coloring only")
        return jones_cabled_chain(link.a, link.c, link.d, ep, win)
    _want(colors, 1, link)
    return jones_knot(link, colors[0], ep, win, budget)


def _want(colors, k, link):
    if len(colors) != k:
        raise ValueError(f"{link.spec()} needs {k} color(s), got {len(colors)}")


def diagonal_colors(link, N: int):
    from .links import WhiteheadChainCabledFigEight

    if isinstance(link, WhiteheadChainCabledFigEight):
        return (N,)
    return (N,) * link.components

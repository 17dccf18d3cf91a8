"""Root-of-unity evaluation points, quantum integers and q-Pochhammer tables.

Everything here runs on mpmath.  An :class:`EvalPoint` carries its own
working precision and every routine that does arithmetic on its entries
enters ``mp.workdps`` with that precision, so callers never need to touch
the global mpmath context.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath as mp

DEFAULT_DIGITS = 64
MIN_DIGITS = 30
PRECISION_ENV = "VOLCONJ_PRECISION"


@dataclass(frozen=True)
class Precision:
    decimal_digits: int = DEFAULT_DIGITS

    def __post_init__(self):
        if int(self.decimal_digits) < MIN_DIGITS:
            raise ValueError(
                f"precision must be at least {MIN_DIGITS} digits, got {self.decimal_digits}"
            )

    @classmethod
    def default(cls) -> "Precision":
        raw = os.environ.get(PRECISION_ENV)
        return cls(int(raw)) if raw else cls()


def as_precision(prec) -> Precision:
    if prec is None:
        return Precision.default()
    if isinstance(prec, Precision):
        return prec
    return Precision(int(prec))


@dataclass(frozen=True, eq=False)
class EvalPoint:
    """The level r = 2N+1 and t = exp(2 pi i/(N+1/2)) with power tables.

    ``tp[k] = t^k`` for ``0 <= k < r`` and ``hp[k] = t_half^k`` for
    ``0 <= k < 2r``; all other exponents are reduced before lookup.
    ``conjugated`` flips t to its complex conjugate, which is how the
    mirror-image and integrality checks are run.
    """

    N: int
    r: int
    digits: int
    conjugated: bool
    t: mp.mpc
    t_half: mp.mpc
    pochhammer: tuple
    hp: tuple = field(repr=False)
    tp: tuple = field(repr=False)

    def tpow(self, m: int):
        return self.tp[m % self.r]

    def hpow(self, m: int):
        return self.hp[m % (2 * self.r)]

    def poch(self, m: int):
        """(t)_m for every m >= 0, including (t)_{r-1} = r and zero beyond."""
        if m < 0:
            raise ValueError("negative Pochhammer index")
        if m <= self.r - 2:
            return self.pochhammer[m]
        if m == self.r - 1:
            return mp.mpc(self.r)
        return mp.mpc(0)

    @property
    def scale(self):
        return mp.mpf(self.N) + mp.mpf(1) / 2

    def workdps(self):
        return mp.workdps(self.digits)

    def conjugate(self) -> "EvalPoint":
        return make_eval_point(self.N, self.digits, conjugate=not self.conjugated)


@lru_cache(maxsize=64)
def _build(N: int, digits: int, conjugate: bool) -> EvalPoint:
    r = 2 * N + 1
    with mp.workdps(digits + 10):
        sign = -1 if conjugate else 1
        hp = [mp.expjpi(mp.mpf(2 * sign * k) / r) for k in range(2 * r)]
        tp = [hp[(2 * k) % (2 * r)] for k in range(r)]
        poch = [mp.mpc(1)]
        for k in range(1, r - 1):
            poch.append(poch[-1] * (1 - tp[k]))
    with mp.workdps(digits):
        hp = tuple(+x for x in hp)
        tp = tuple(+x for x in tp)
        poch = tuple(+x for x in poch)
    return EvalPoint(
        N=N, r=r, digits=digits, conjugated=conjugate,
        t=tp[1], t_half=hp[1], pochhammer=poch, hp=hp, tp=tp,
    )


def make_eval_point(N: int, prec=None, conjugate: bool = False) -> EvalPoint:
    if int(N) != N or N < 1:
        raise ValueError(f"N must be a positive integer, got {N!r}")
    return _build(int(N), as_precision(prec).decimal_digits, bool(conjugate))


def quantum_int(n: int, ep: EvalPoint):
    """[n] = (t^{n/2} - t^{-n/2}) / (t^{1/2} - t^{-1/2})."""
    with ep.workdps():
        num = ep.hpow(n) - ep.hpow(-n)
        if num == 0 or (n % (2 * ep.r)) in (0, ep.r):
            return mp.mpc(0)
        return num / (ep.hpow(1) - ep.hpow(-1))


def q_pochhammer(n: int, ep: EvalPoint):
    if not 0 <= n <= ep.r - 2:
        raise IndexError(f"Pochhammer index {n} outside [0, {ep.r - 2}]")
    return ep.pochhammer[n]


def qbinom(a: int, b: int, ep: EvalPoint):
    """Gaussian binomial [a choose b] in t, valid for any a, b >= 0.

    Above the order of t the q-Lucas theorem splits the index into an
    ordinary binomial times a reduced Gaussian binomial.
    """
    if b < 0 or b > a:
        return mp.mpc(0)
    r = ep.r
    hi, lo = divmod(a, r)
    bhi, blo = divmod(b, r)
    if blo > lo:
        return mp.mpc(0)
    with ep.workdps():
        return mp.binomial(hi, bhi) * ep.poch(lo) / (ep.poch(blo) * ep.poch(lo - blo))

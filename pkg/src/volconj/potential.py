"""Potential functions, their critical points and the volumes they encode.

A potential is stored symbolically as

    V(z) = sum_k sign_k/(2 pi i) Li_2(exp(2 pi i (b_k + a_k . z)))
           + 2 pi i (z^T Q z + L . z + c)

with rational a_k, b_k, Q, L, c.  The Fourier shift 2 pi i m . z (integer m)
is kept apart from V; critical points are those of V + shift.

Each clasp coefficient C(n; K) of a Jones sum contributes one Whitehead
block in the variables u = n/(N+1/2), v = l/(N+1/2) and the color ratio
x = K/(N+1/2):

    2 pi i x^2 [only when x is a variable] - 2 pi i (x-1)(u+v)
    + (1/2 pi i)[Li(e^{2 pi i(x-1-u-v)}) - Li(e^{2 pi i(x-1-v)})
                 + Li(e^{2 pi i v}) - Li(e^{2 pi i(u+v)}) + Li(e^{2 pi i u})].

At x = 1 this is Phi(WL; u, v); at x = s it is the deformed Phi^{(s)}.
Figure-eight tails contribute Psi(4_1; u, k) and mirrored clasps the
kappa block.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp

from .links import (CabledChain, FigureEight, IteratedDouble, LinkFamily, WAlphaBeta,
                    WhiteheadLink, volume_constants)
from .numeric import as_precision
from .special import dilog

TWO_PI_I = None  # resolved at call time so the working precision applies


def _tpi():
    return 2j * mp.pi


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(str(x))


@dataclass(frozen=True)
class DilogTerm:
    sign: int
    offset: Fraction
    coeffs: tuple

    def argument(self, z):
        w = mp.mpf(self.offset.numerator) / self.offset.denominator
        for c, zj in zip(self.coeffs, z):
            if c:
                w = w + (mp.mpf(c.numerator) / c.denominator) * zj
        return w


@dataclass(frozen=True)
class PotentialSpec:
    name: str
    dim: int
    dilog_terms: tuple
    quad: tuple
    linear: tuple
    const: Fraction
    fourier_shift: tuple
    reference: tuple = field(default=())
    variables: tuple = field(default=())
    deformation: tuple | None = None

    def __post_init__(self):
        for term in self.dilog_terms:
            if len(term.coeffs) != self.dim:
                raise ValueError("dilog coefficient vector has the wrong length")
        if len(self.linear) != self.dim or len(self.fourier_shift) != self.dim:
            raise ValueError("linear form has the wrong length")
        if len(self.quad) != self.dim or any(len(row) != self.dim for row in self.quad):
            raise ValueError("quadratic form has the wrong shape")

    # -- serialization -----------------------------------------------------
    def to_json(self) -> str:
        def fr(x):
            return [x.numerator, x.denominator]

        doc = {
            "name": self.name,
            "dim": self.dim,
            "dilog_terms": [
                {"sign": t.sign, "offset": fr(t.offset), "coeffs": [fr(c) for c in t.coeffs]}
                for t in self.dilog_terms
            ],
            "quad": [[fr(c) for c in row] for row in self.quad],
            "linear": [fr(c) for c in self.linear],
            "const": fr(self.const),
            "fourier_shift": list(self.fourier_shift),
            "reference": [_ref_to_json(x) for x in self.reference],
            "variables": list(self.variables),
            "deformation": None if self.deformation is None else [fr(s) for s in self.deformation],
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "PotentialSpec":
        doc = json.loads(text)

        def fr(p):
            return Fraction(p[0], p[1])

        return cls(
            name=doc["name"],
            dim=doc["dim"],
            dilog_terms=tuple(
                DilogTerm(t["sign"], fr(t["offset"]), tuple(fr(c) for c in t["coeffs"]))
                for t in doc["dilog_terms"]
            ),
            quad=tuple(tuple(fr(c) for c in row) for row in doc["quad"]),
            linear=tuple(fr(c) for c in doc["linear"]),
            const=fr(doc["const"]),
            fourier_shift=tuple(doc["fourier_shift"]),
            reference=tuple(_ref_from_json(x) for x in doc["reference"]),
            variables=tuple(doc["variables"]),
            deformation=None if doc["deformation"] is None else tuple(fr(s) for s in doc["deformation"]),
        )

    def reference_point(self):
        return [_resolve_ref(x) for x in self.reference]


def _ref_to_json(x):
    if isinstance(x, Fraction):
        return {"ratio": [x.numerator, x.denominator]}
    return {"z2_of": [x[1].numerator, x[1].denominator]}


def _ref_from_json(d):
    if "ratio" in d:
        return Fraction(*d["ratio"])
    return ("z2", Fraction(*d["z2_of"]))


def _resolve_ref(x):
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return deformed_branch_z2(x[1])


# --------------------------------------------------------------------------
# construction

class _Builder:
    def __init__(self, name):
        self.name = name
        self.vars = []
        self.ref = []
        self.terms = []
        self.quad = {}
        self.lin = {}
        self.const = Fraction(0)
        self.shift = {}

    def var(self, label, ref):
        self.vars.append(label)
        self.ref.append(ref)
        return len(self.vars) - 1

    def dilog(self, sign, offset, coeffs: dict):
        self.terms.append((sign, _frac(offset), {k: _frac(v) for k, v in coeffs.items()}))

    def q(self, i, j, c):
        c = _frac(c)
        if i == j:
            self.quad[(i, i)] = self.quad.get((i, i), 0) + c
        else:
            self.quad[(i, j)] = self.quad.get((i, j), 0) + c / 2
            self.quad[(j, i)] = self.quad.get((j, i), 0) + c / 2

    def l(self, i, c):
        self.lin[i] = self.lin.get(i, 0) + _frac(c)

    def s(self, i, m):
        self.shift[i] = self.shift.get(i, 0) + int(m)

    def build(self, deformation=None) -> PotentialSpec:
        d = len(self.vars)
        terms = tuple(
            DilogTerm(sign, off, tuple(co.get(j, Fraction(0)) for j in range(d)))
            for sign, off, co in self.terms
        )
        quad = tuple(tuple(Fraction(self.quad.get((i, j), 0)) for j in range(d)) for i in range(d))
        lin = tuple(Fraction(self.lin.get(i, 0)) for i in range(d))
        shift = tuple(self.shift.get(i, 0) for i in range(d))
        return PotentialSpec(
            name=self.name, dim=d, dilog_terms=terms, quad=quad, linear=lin,
            const=self.const, fourier_shift=shift, reference=tuple(self.ref),
            variables=tuple(self.vars), deformation=deformation,
        )

    # -- blocks ------------------------------------------------------------
    def whitehead(self, parent, u, v):
        """Clasp block; ``parent`` is a variable index (color 2 z_parent) or a ratio."""
        if isinstance(parent, tuple):
            p = parent[1]
            x = {p: 2}
            x0 = Fraction(0)
            # 2 pi i x^2 with x = 2 z_p
            self.q(p, p, 4)
            # -2 pi i (x - 1)(u + v)
            self.q(p, u, -2)
            self.q(p, v, -2)
            self.l(u, 1)
            self.l(v, 1)
        else:
            x = {}
            x0 = _frac(parent)
            self.l(u, -(x0 - 1))
            self.l(v, -(x0 - 1))

        def comb(base, extra):
            out = dict(base)
            for k, c in extra.items():
                out[k] = out.get(k, 0) + c
            return out

        self.dilog(+1, x0 - 1, comb(x, {u: -1, v: -1}))
        self.dilog(-1, x0 - 1, comb(x, {v: -1}))
        self.dilog(+1, 0, {v: 1})
        self.dilog(-1, 0, {u: 1, v: 1})
        self.dilog(+1, 0, {u: 1})

    def mirror_clasp(self, z1, z):
        self.dilog(-1, 0, {z1: 1, z: 1})
        self.dilog(+1, 0, {z: 1})
        self.dilog(-1, 0, {z: -1})
        self.dilog(+1, 0, {z1: -1, z: -1})
        self.dilog(-1, 0, {z1: -1})

    def fig8(self, u, k):
        self.dilog(+1, 0, {u: 2, k: -1})
        self.dilog(-1, 0, {u: 2, k: 1})
        self.q(u, k, -2)


def build_potential(link: LinkFamily, deformation=None, branch: int = 1) -> PotentialSpec:
    """Potential of the family's Jones summand plus its Fourier shift.

    ``deformation`` is a ratio s (IteratedDouble) or a pair (s1, s2)
    (WAlphaBeta); ``branch`` picks the sign of the Hopf pairing for
    WAlphaBeta.
    """
    half, quarter, five6 = Fraction(1, 2), Fraction(1, 4), Fraction(5, 6)

    if isinstance(link, WhiteheadLink):
        b = _Builder("WL")
        z1 = b.var("z1", half)
        z2 = b.var("z2", quarter)
        b.whitehead(Fraction(1), z1, z2)
        return b.build()

    if isinstance(link, FigureEight):
        b = _Builder("4_1")
        z1 = b.var("z1", half)
        z3 = b.var("z3", five6)
        b.fig8(z1, z3)
        b.s(z1, 1)
        b.s(z3, 1)
        return b.build()

    if isinstance(link, CabledChain):
        a, c, d = link.a, link.c, link.d
        b = _Builder(f"W({a},{c},{d})*4_1")
        z1 = b.var("z1", half)
        clasps = [b.var(f"z{g + 2}", quarter) for g in range(c)]
        mirrors = [b.var(f"z{c + g + 2}", quarter) for g in range(d)]
        zk = b.var(f"z{c + d + 2}", five6)
        # (a/2 pi i)[2 pi i (z1 - 1/2)]^2 = 2 pi i a (z1^2 - z1 + 1/4)
        b.q(z1, z1, a)
        b.l(z1, -a)
        b.const += Fraction(a, 4)
        for zg in clasps:
            b.whitehead(Fraction(1), z1, zg)
        for zg in mirrors:
            b.mirror_clasp(z1, zg)
        b.fig8(z1, zk)
        b.s(z1, 1)
        b.s(zk, 1)
        return b.build()

    if isinstance(link, IteratedDouble):
        p = link.p
        s = Fraction(1) if deformation is None else _frac(deformation)
        b = _Builder(f"WD^{p}(4_1)")
        root_ref = half
        z = [b.var("z1", root_ref), b.var("z2", quarter if s == 1 else ("z2", s))]
        b.whitehead(s, z[0], z[1])
        for g in range(1, p + 1):
            u = b.var(f"z{2 * g + 1}", half)
            v = b.var(f"z{2 * g + 2}", quarter)
            b.whitehead(("var", z[2 * g - 2]), u, v)
            z += [u, v]
        zk = b.var(f"z{2 * p + 3}", five6)
        z.append(zk)
        b.fig8(z[2 * p], zk)
        for g in range(1, p + 1):
            b.s(z[2 * g - 2], -3)
        b.s(z[2 * p], 1)
        b.s(zk, 1)
        return b.build(None if deformation is None else (s,))

    if isinstance(link, WAlphaBeta):
        alpha, beta = link.alpha, link.beta
        if alpha == 0:
            alpha, beta = beta, alpha
            if deformation is not None:
                deformation = tuple(deformation)[::-1]
        if deformation is None:
            s1 = s2 = Fraction(1)
        else:
            s1, s2 = (_frac(x) for x in deformation)
        if branch not in (1, -1):
            raise ValueError("branch must be +1 or -1")
        b = _Builder(f"W[{alpha},{beta}]{'+' if branch > 0 else '-'}")

        def root_l(s):
            return quarter if s == 1 else ("z2", s)

        left = []
        for g in range(1, alpha):
            u = b.var(f"n{g}", half)
            v = b.var(f"l{g}", root_l(s1) if g == 1 else quarter)
            b.whitehead(s1 if g == 1 else ("var", left[-2]), u, v)
            left += [u, v]
        right = []
        for g in range(1, beta + 1):
            u = b.var(f"n'{g}", half)
            v = b.var(f"l'{g}", root_l(s2) if g == 1 else quarter)
            b.whitehead(s2 if g == 1 else ("var", right[-2]), u, v)
            right += [u, v]
        uz = b.var("n_zeta", half)
        vz = b.var("l_zeta", root_l(s1) if alpha == 1 else quarter)
        b.whitehead(s1 if alpha == 1 else ("var", left[-2]), uz, vz)
        # Hopf pairing: +-(1/2 pi i)(2 pi i y)(2 pi i (z_zeta - 1/2))
        if beta >= 1:
            y = right[-2]
            b.q(y, uz, 2 * branch)
            b.l(y, -branch)
        else:
            b.l(uz, branch * s2)
            b.const += -branch * s2 / 2
        # integer shift: each n-variable that colors a child clasp
        for parent in left[0::2] + right[0::2][:-1]:
            b.s(parent, -3)
        b.s(uz, -branch)
        return b.build(None if deformation is None else (s1, s2))

    raise ValueError(f"no potential for {link!r}")


# --------------------------------------------------------------------------
# evaluation

def _q(x: Fraction):
    return mp.mpf(x.numerator) / x.denominator


def _poly(spec: PotentialSpec, z):
    tot = _q(spec.const)
    for i in range(spec.dim):
        li = spec.linear[i]
        if li:
            tot += _q(li) * z[i]
        for j in range(spec.dim):
            qij = spec.quad[i][j]
            if qij:
                tot += _q(qij) * z[i] * z[j]
    return _tpi() * tot


def _check(spec, z):
    if len(z) != spec.dim:
        raise ValueError(f"expected {spec.dim} coordinates, got {len(z)}")
    return [mp.mpc(x) for x in z]


def eval_potential(spec: PotentialSpec, z, with_shift: bool = False):
    z = _check(spec, z)
    tpi = _tpi()
    tot = mp.mpc(0)
    for t in spec.dilog_terms:
        tot += t.sign * dilog(mp.exp(tpi * t.argument(z)))
    val = tot / tpi + _poly(spec, z)
    if with_shift:
        val += tpi * mp.fsum(m * zj for m, zj in zip(spec.fourier_shift, z))
    return val


def grad(spec: PotentialSpec, z, with_shift: bool = False):
    z = _check(spec, z)
    tpi = _tpi()
    g = [mp.mpc(0)] * spec.dim
    for t in spec.dilog_terms:
        lg = -t.sign * mp.log(1 - mp.exp(tpi * t.argument(z)))
        for j, c in enumerate(t.coeffs):
            if c:
                g[j] += _q(c) * lg
    for i in range(spec.dim):
        acc = _q(spec.linear[i])
        for j in range(spec.dim):
            if spec.quad[i][j]:
                acc += 2 * _q(spec.quad[i][j]) * z[j]
        g[i] += tpi * acc
        if with_shift:
            g[i] += tpi * spec.fourier_shift[i]
    return g


def hess(spec: PotentialSpec, z):
    z = _check(spec, z)
    tpi = _tpi()
    n = spec.dim
    H = mp.matrix(n, n)
    for t in spec.dilog_terms:
        X = mp.exp(tpi * t.argument(z))
        f = t.sign * tpi * X / (1 - X)
        nz = [(j, _q(c)) for j, c in enumerate(t.coeffs) if c]
        for j, cj in nz:
            for k, ck in nz:
                H[j, k] += f * cj * ck
    for i in range(n):
        for j in range(n):
            if spec.quad[i][j]:
                H[i, j] += 2 * tpi * _q(spec.quad[i][j])
    return H


# --------------------------------------------------------------------------
# critical points

class NewtonFailure(RuntimeError):
    pass


@dataclass
class CriticalGeometry:
    point: list
    critical_value: object
    hessian: object
    volume: object
    cs_imag: object
    hess_det: object
    residual: object
    iterations: int

    def as_dict(self, digits: int = 20):
        def c(x):
            x = mp.mpc(x)
            return [mp.nstr(mp.re(x), digits), mp.nstr(mp.im(x), digits)]

        n = self.hessian.rows
        return {
            "point": [c(x) for x in self.point],
            "critical_value": c(self.critical_value),
            "volume": mp.nstr(self.volume, digits),
            "cs_imag": mp.nstr(self.cs_imag, digits),
            "hess_det": c(self.hess_det),
            "hessian": [[c(self.hessian[i, j]) for j in range(n)] for i in range(n)],
            "residual": mp.nstr(self.residual, 5),
            "iterations": self.iterations,
        }


def working_digits(precision=None) -> int:
    """Explicit precision, else the larger of the package default and the ambient mpmath one."""
    if precision is not None:
        return as_precision(precision).decimal_digits
    return max(mp.mp.dps, as_precision(None).decimal_digits)


def _norm(v):
    return max(abs(x) for x in v)


def find_critical_point(spec: PotentialSpec, start=None, tol=None, max_iter: int = 100,
                        precision=None) -> CriticalGeometry:
    """Damped Newton on grad(V + shift) = 0."""
    with mp.workdps(working_digits(precision)):
        return _newton(spec, start, tol, max_iter)


def _newton(spec, start, tol, max_iter):
    z = [mp.mpc(x) for x in (spec.reference_point() if start is None else start)]
    tol = mp.mpf(10) ** (-(mp.mp.dps - 8)) if tol is None else mp.mpf(tol)
    g = grad(spec, z, with_shift=True)
    res = _norm(g)
    it = 0
    while res > tol:
        it += 1
        if it > max_iter:
            raise NewtonFailure(f"no convergence after {max_iter} iterations (|grad| = {mp.nstr(res, 5)})")
        H = hess(spec, z)
        try:
            step = mp.lu_solve(H, mp.matrix(g))
        except ZeroDivisionError as exc:
            raise NewtonFailure("singular Jacobian") from exc
        lam = mp.mpf(1)
        while True:
            trial = [z[i] - lam * step[i] for i in range(spec.dim)]
            gt = grad(spec, trial, with_shift=True)
            rt = _norm(gt)
            if rt < res or lam < mp.mpf(2) ** -30:
                break
            lam /= 2
        if rt >= res:
            raise NewtonFailure("damping failed to reduce the residual")
        z, g, res = trial, gt, rt
    H = hess(spec, z)
    val = eval_potential(spec, z, with_shift=True)
    return CriticalGeometry(
        point=z, critical_value=val, hessian=H,
        volume=2 * mp.pi * mp.re(val), cs_imag=2 * mp.pi * mp.im(val),
        hess_det=mp.det(H), residual=res, iterations=it,
    )


# --------------------------------------------------------------------------
# closed forms

def hess_det_arrowhead(n: int, a1, a2, a3, a4, a5, dim_factor: int):
    """(2 pi i)^{dim} a4^{n-1}(a1 a4 a5 - n a2^2 a5 - a3^2 a4) for the arrowhead pattern."""
    return _tpi() ** dim_factor * a4 ** (n - 1) * (a1 * a4 * a5 - n * a2 ** 2 * a5 - a3 ** 2 * a4)


def hess_det_closed_form(a: int, c: int, d: int, variant: str = "entry"):
    """Determinant from the displayed arrowhead entries.

    ``variant="entry"`` uses the corner entry 2 + 2 sqrt(3) i as it appears
    in the matrix, ``"printed"`` the (2 + sqrt(3) i)^2 of the evaluated line,
    and ``"analytic"`` the entries of the Hessian of the potential as built
    here (mirror clasps contribute 1/2 + i to the corner, clasps -1/2 + i).
    """
    if c < 0 or d < 0 or c + d < 1:
        raise ValueError("need c + d >= 1")
    n = c + d
    i = mp.mpc(0, 1)
    s3 = mp.sqrt(3)
    a2, a4, a5 = i, 2 * i, s3 * i
    if variant == "entry":
        a1 = n * i - mp.mpf(c - d) / 2 + 2 * a
        a3 = 2 + 2 * s3 * i
    elif variant == "printed":
        a1 = n * i - mp.mpf(c - d) / 2 + 2 * a
        a3 = 2 + s3 * i
    elif variant == "analytic":
        a1 = c * (-mp.mpf(1) / 2 + i) + d * (mp.mpf(1) / 2 + i) + 2 * a + 4 * s3 * i
        a3 = mp.mpc(0)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return hess_det_arrowhead(n, a1, a2, a3, a4, a5, n + 2)


# --------------------------------------------------------------------------
# deformation

def deformed_branch_z2(s, steps: int = 64):
    """z2(s) with exp(2 pi i z2) the root of Z^2 + (1-B)Z + B = 0 continued from Z(1) = i."""
    s = mp.mpf(s.numerator) / s.denominator if isinstance(s, Fraction) else mp.mpf(s)
    if abs(1 - s) >= mp.mpf(1) / 4:
        raise ValueError("deformation ratio must satisfy |1 - s| < 1/4")
    Z = mp.mpc(0, 1)
    for k in range(1, steps + 1):
        sk = 1 + (s - 1) * k / steps
        B = mp.expjpi(2 * sk)
        a = 1 - B
        disc = mp.sqrt(a * a - 4 * B)
        r1, r2 = (-a + disc) / 2, (-a - disc) / 2
        d1, d2 = abs(r1 - Z), abs(r2 - Z)
        if min(d1, d2) > mp.mpf(1) / 4 or abs(d1 - d2) < mp.mpf(10) ** (-mp.mp.dps // 2):
            raise ValueError("branch tracking failed")
        Z = r1 if d1 < d2 else r2
    return mp.log(Z) / _tpi()


DEFORMATION_RADIUS = 0.1


def deformed_potential_wl(s) -> PotentialSpec:
    b = _Builder(f"WL^({s})")
    s = _frac(s)
    z1 = b.var("z1", Fraction(1, 2))
    z2 = b.var("z2", Fraction(1, 4) if s == 1 else ("z2", s))
    b.whitehead(s, z1, z2)
    return b.build((s,))


def deformed_volume_wl(s, radius: float = DEFORMATION_RADIUS, precision=None):
    """2 pi Re Phi^{(s)}(WL; 1/2, z2(s))."""
    if abs(1 - float(s)) >= radius:
        raise ValueError(f"|1 - s| must be below {radius}")
    with mp.workdps(working_digits(precision)):
        spec = deformed_potential_wl(s)
        return 2 * mp.pi * mp.re(eval_potential(spec, spec.reference_point()))


def geometry_prediction(link: LinkFamily, deformation=None):
    vc = volume_constants()
    if isinstance(link, IteratedDouble):
        s = 1 if deformation is None else deformation
        base = vc.vol_wl if _frac(s) == 1 else deformed_volume_wl(s)
        return base + link.p * vc.vol_wl + vc.vol_fig8
    if isinstance(link, WAlphaBeta):
        s1, s2 = (1, 1) if deformation is None else deformation
        if link.alpha + link.beta < 2 and not (_frac(s1) == 1 and _frac(s2) == 1):
            raise ValueError("deformed prediction needs alpha + beta >= 2")

        def dv(s):
            return vc.vol_wl if _frac(s) == 1 else deformed_volume_wl(s)

        return dv(s1) + dv(s2) + (link.alpha + link.beta - 2) * vc.vol_wl
    raise ValueError(f"no geometric prediction for {link!r}")


# --------------------------------------------------------------------------
# saddle-point ingredients for W_{0,1,1,0}(4_1)

def e_factor_wd0(z1, z2, z3):
    """Subexponential factor of the W_{0,1,1,0}(4_1) summand."""
    e = lambda w: mp.exp(_tpi() * w)  # noqa: E731
    L = lambda w: mp.log(1 - e(w))    # noqa: E731
    half = mp.mpf(1) / 2
    return mp.exp(
        L(-z1 - z2) - L(-z2) - half * L(z2) + half * L(z1 + z2) - half * L(z1)
        - half * L(-z3 + 2 * z1) + 3 * half * L(z3 + 2 * z1)
    )


def lobachevsky_calibration(N: int = 500):
    """Compare max_k log g_N(k)/(N+1/2) with the Milnor and doubled Lobachevsky values.

    Returns (observed, milnor, doubled).
    """
    from .jones import growth_envelope_g  # local import keeps module deps one-way
    from .numeric import make_eval_point
    from .special import lobachevsky

    ep = make_eval_point(N, max(30, mp.mp.dps))
    best = -math.inf
    for k in range(N):
        if N + k <= ep.r - 2:
            best = max(best, float(mp.log(growth_envelope_g(N, k, ep))))
    observed = best / float(ep.scale)
    ks, s = mp.mpf(5) / 6, 1
    milnor = -(lobachevsky(mp.pi * (ks - s)) + lobachevsky(mp.pi * (ks + s))) / (2 * mp.pi)
    return observed, float(milnor), float(2 * milnor)

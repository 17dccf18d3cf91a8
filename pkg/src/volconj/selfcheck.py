"""Identity suites shared by the CLI self-check and the tests."""

from __future__ import annotations

import random

import mpmath as mp

from .jones import jones_cabled_chain, jones_iterated_double, jones_whitehead_link
from .links import CabledChain, IteratedDouble, WAlphaBeta, WhiteheadLink
from .numeric import make_eval_point, quantum_int
from .potential import build_potential, grad, hess
from .special import quantum_dilog


def qdilog_residuals(r: int, samples: int = 50, seed: int = 0):
    """Max relative residuals of the difference equation and of the Pochhammer bridge.

    Difference equation: exp((r/4 pi i)(phi(z - pi/r) - phi(z + pi/r))) = 1 - e^{2iz}.
    Bridge: (t)_n = exp((r/4 pi i)(phi(pi/r) - phi(2 pi n/r + pi/r))) for 0 <= n <= r-2.
    """
    rng = random.Random(seed)
    N = (r - 1) // 2
    ep = make_eval_point(N, max(30, mp.mp.dps))
    k = r / (4j * mp.pi)
    worst_fe = mp.mpf(0)
    for _ in range(samples):
        z = mp.mpc(rng.uniform(0.01, float(mp.pi) - 0.01), rng.uniform(-1, 1))
        lhs = mp.exp(k * (quantum_dilog(z - mp.pi / r, r) - quantum_dilog(z + mp.pi / r, r)))
        worst_fe = max(worst_fe, abs(lhs / (1 - mp.expj(2 * z)) - 1))
    p0 = quantum_dilog(mp.pi / r, r)
    worst_br = mp.mpf(0)
    for n in range(r - 1):
        v = mp.exp(k * (p0 - quantum_dilog(2 * mp.pi * n / r + mp.pi / r, r, continue_outside=True)))
        worst_br = max(worst_br, abs(v / ep.pochhammer[n] - 1))
    return worst_fe, worst_br


def fd_residuals(spec, z, step=mp.mpf("1e-6")):
    """Max deviation of analytic gradient and Hessian from central differences."""
    from .potential import eval_potential

    z = [mp.mpc(x) for x in z]
    g = grad(spec, z)
    H = hess(spec, z)
    worst_g = worst_h = mp.mpf(0)
    for j in range(spec.dim):
        zp = list(z)
        zm = list(z)
        zp[j] += step
        zm[j] -= step
        fd = (eval_potential(spec, zp) - eval_potential(spec, zm)) / (2 * step)
        worst_g = max(worst_g, abs(fd - g[j]))
        gp, gm = grad(spec, zp), grad(spec, zm)
        for k in range(spec.dim):
            worst_h = max(worst_h, abs((gp[k] - gm[k]) / (2 * step) - H[k, j]))
    return worst_g, worst_h


def default_fd_families():
    return [WhiteheadLink(), CabledChain(1, 1, 1), IteratedDouble(1), WAlphaBeta(2, 1)]


def cross_formula_residuals(Ns=(3, 5, 8)):
    """Iterated double p=0 against the cabled chain (0,1,0), and WL(1, M) against [M]."""
    worst = mp.mpf(0)
    for N in Ns:
        ep = make_eval_point(N, max(30, mp.mp.dps))
        a = jones_iterated_double(0, ep)
        b = jones_cabled_chain(0, 1, 0, ep)
        worst = max(worst, abs(a - b) / abs(b))
        for M in range(1, N + 1):
            w = jones_whitehead_link(1, M, ep)
            worst = max(worst, abs(w - quantum_int(M, ep)))
    return worst


def run_suites(suites, r: int = 25, samples: int = 10, seed: int = 0):
    """Yield (name, residual, tolerance) for each requested suite."""
    if "qdilog" in suites:
        fe, br = qdilog_residuals(r, samples, seed)
        yield f"qdilog-functional r={r}", fe, mp.mpf(10) ** -20
        yield f"qdilog-bridge r={r}", br, mp.mpf(10) ** -20
    if "fd" in suites:
        rng = random.Random(seed)
        for link in default_fd_families():
            spec = build_potential(link)
            ref = spec.reference_point()
            z = [mp.mpc(x) + mp.mpc(rng.uniform(-0.02, 0.02), rng.uniform(-0.02, 0.02)) for x in ref]
            g, h = fd_residuals(spec, z)
            yield f"gradient-fd {link.spec()}", g, mp.mpf(10) ** -8
            yield f"hessian-fd {link.spec()}", h, mp.mpf(10) ** -6
    if "cross" in suites:
        yield "cross-formula", cross_formula_residuals(), mp.mpf(10) ** -20

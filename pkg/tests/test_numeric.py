import mpmath as mp
import pytest
from hypothesis import given, strategies as st

from volconj.numeric import (EvalPoint, Precision, make_eval_point, q_pochhammer, qbinom,
                             quantum_int)


def close(a, b, tol=mp.mpf(10) ** -55):
    return abs(mp.mpc(a) - mp.mpc(b)) <= tol * max(1, abs(mp.mpc(b)))


def test_precision_floor():
    with pytest.raises(ValueError):
        Precision(29)
    assert Precision().decimal_digits == 64


def test_precision_env(monkeypatch):
    monkeypatch.setenv("VOLCONJ_PRECISION", "40")
    assert Precision.default().decimal_digits == 40
    assert make_eval_point(3).digits == 40


def test_rejects_zero():
    with pytest.raises(ValueError):
        make_eval_point(0)


def test_n1_point():
    ep = make_eval_point(1)
    assert close(ep.t, mp.expjpi(mp.mpf(4) / 3))
    assert close(ep.pochhammer[1], mp.mpc(1.5, mp.sqrt(3) / 2))
    assert ep.pochhammer[0] == 1


def test_cyclotomic_closure():
    ep = make_eval_point(12)
    with ep.workdps():
        top = ep.pochhammer[23] * (1 - ep.tpow(24))
    assert close(top, 25)
    assert close(ep.poch(24), 25)
    assert ep.poch(25) == 0


@pytest.mark.parametrize("N", [1, 2, 7, 20])
def test_point_invariants(N):
    ep = make_eval_point(N)
    assert isinstance(ep, EvalPoint)
    assert close(ep.t_half ** 2, ep.t)
    assert close(abs(ep.t), 1)
    assert close(ep.t ** ep.r, 1)
    for k in range(1, ep.r):
        assert abs(ep.t ** k - 1) > mp.mpf(10) ** -10
    for k in range(1, ep.r - 1):
        assert close(ep.pochhammer[k], ep.pochhammer[k - 1] * (1 - ep.t ** k))


def test_conjugate_table():
    ep = make_eval_point(9)
    bar = ep.conjugate()
    for n in range(ep.r - 1):
        assert close(bar.pochhammer[n], mp.conj(ep.pochhammer[n]))


def test_quantum_int_examples():
    ep = make_eval_point(12)
    assert close(quantum_int(1, ep), 1)
    assert quantum_int(ep.r, ep) == 0
    assert quantum_int(400, ep) == 0
    assert close(quantum_int(2, ep), ep.t_half + 1 / ep.t_half)


@given(st.integers(-200, 200), st.integers(1, 15))
def test_quantum_int_period(n, N):
    ep = make_eval_point(N)
    assert close(quantum_int(n + 2 * ep.r, ep), quantum_int(n, ep))
    assert close(quantum_int(-n, ep), -quantum_int(n, ep))


def test_q_pochhammer_bounds():
    ep = make_eval_point(4)
    assert q_pochhammer(0, ep) == 1
    with pytest.raises(IndexError):
        q_pochhammer(ep.r - 1, ep)


def _gauss_binom_pascal(a, b, t):
    # [a, b] = [a-1, b-1] + t^b [a-1, b], independent of Pochhammer tables
    row = [mp.mpc(1)]
    for m in range(1, a + 1):
        new = [mp.mpc(1)] * (m + 1)
        for k in range(1, m):
            new[k] = row[k - 1] + t ** k * row[k]
        row = new
    return row[b] if 0 <= b <= a else mp.mpc(0)


@given(st.integers(0, 30), st.integers(0, 30), st.integers(1, 6))
def test_qbinom_matches_pascal(a, b, N):
    ep = make_eval_point(N)
    with ep.workdps():
        want = _gauss_binom_pascal(a, b, ep.t)
    assert abs(qbinom(a, b, ep) - want) < mp.mpf(10) ** -40 * max(1, abs(want))

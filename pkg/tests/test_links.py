import mpmath as mp
import pytest
from hypothesis import given, strategies as st

from volconj.links import (CabledChain, FigureEight, HopfUnion, IteratedDouble, JsjProfile,
                           LinkSpecError, Unknot, WAlphaBeta, WhiteheadLink, jsj_profile,
                           parse_link, simplicial_volume, volume_constants)


def _series_lobachevsky(theta):
    # Lambda(theta) = (1/2) sum sin(2 n theta)/n^2, the Clausen series
    return mp.clsin(2, 2 * theta) / 2


def test_constants_against_series():
    vc = volume_constants()
    assert abs(vc.vol_fig8 - 6 * _series_lobachevsky(mp.pi / 3)) < mp.mpf(10) ** -50
    assert abs(vc.vol_wl - 8 * _series_lobachevsky(mp.pi / 4)) < mp.mpf(10) ** -50
    assert mp.nstr(vc.vol_fig8, 13) == "2.029883212819"
    assert mp.nstr(vc.vol_wl, 13) == "3.663862376709"
    assert vc.v3 == vc.vol_fig8 / 2


@pytest.mark.parametrize("text,expect", [
    ("U", Unknot()),
    ("4_1", FigureEight()),
    ("WL", WhiteheadLink()),
    ("W(0,1,0)*4_1", CabledChain(0, 1, 0)),
    ("W(-2,1,2)*4_1", CabledChain(-2, 1, 2)),
    ("WD^3(4_1)", IteratedDouble(3)),
    ("W[2,1]", WAlphaBeta(2, 1)),
    ("hopf(4_1, WD^1(4_1))", HopfUnion(FigureEight(), IteratedDouble(1))),
])
def test_parse(text, expect):
    assert parse_link(text) == expect


links = st.recursive(
    st.one_of(
        st.just(Unknot()), st.just(FigureEight()), st.just(WhiteheadLink()),
        st.builds(CabledChain, st.integers(-5, 5), st.integers(0, 3), st.integers(1, 3)),
        st.builds(IteratedDouble, st.integers(0, 6)),
        st.builds(WAlphaBeta, st.integers(1, 4), st.integers(0, 4)),
    ),
    lambda inner: st.builds(HopfUnion, inner.filter(lambda k: k.is_knot), inner.filter(lambda k: k.is_knot)),
    max_leaves=3,
)


@given(links)
def test_spec_round_trip(link):
    assert parse_link(link.spec()) == link


@pytest.mark.parametrize("text,pos", [("W(0,1)*4_1", 5), ("4_2", 0), ("WD^x(4_1)", 3), ("WLX", 2),
                                      ("hopf(WL,4_1)", 0), ("W(0,0,0)*4_1", 0)])
def test_parse_errors(text, pos):
    with pytest.raises(LinkSpecError) as info:
        parse_link(text)
    assert info.value.pos == pos
    assert info.value.expected


def test_invalid_parameters():
    with pytest.raises(ValueError):
        CabledChain(0, 0, 0)
    with pytest.raises(ValueError):
        WAlphaBeta(0, 0)
    with pytest.raises(ValueError):
        IteratedDouble(-1)
    with pytest.raises(ValueError):
        HopfUnion(WhiteheadLink(), FigureEight())


def test_jsj_examples():
    assert jsj_profile(IteratedDouble(0)) == JsjProfile(fig_eight_pieces=1, whitehead_pieces=1)
    assert jsj_profile(WAlphaBeta(2, 1)) == JsjProfile(whitehead_pieces=3)
    assert jsj_profile(HopfUnion(FigureEight(), FigureEight())) == JsjProfile(fig_eight_pieces=2, seifert_pieces=3)
    assert jsj_profile(IteratedDouble(4)).whitehead_pieces == 5


def test_simplicial_volumes():
    vc = volume_constants()
    assert simplicial_volume(Unknot()) == 0
    assert mp.nstr(simplicial_volume(IteratedDouble(0)), 12) == "5.69374558953"
    assert abs(simplicial_volume(WAlphaBeta(1, 1)) - 2 * vc.vol_wl) < mp.mpf(10) ** -60
    for a in range(-2, 3):
        assert simplicial_volume(CabledChain(a, 1, 2)) == simplicial_volume(CabledChain(0, 1, 2))


@given(links, links)
def test_hopf_additivity(k1, k2):
    if not (k1.is_knot and k2.is_knot):
        return
    assert simplicial_volume(HopfUnion(k1, k2)) == simplicial_volume(k1) + simplicial_volume(k2)

"""Link families, their JSJ pieces and simplicial volumes.

Link specifications use a small grammar:

    link   := "U" | "4_1" | "WL" | chain | double | walpha | hopf
    chain  := "W(" int "," int "," int ")*4_1"
    double := "WD^" int "(4_1)"
    walpha := "W[" int "," int "]"
    hopf   := "hopf(" link "," link ")"        (both arguments knots)
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp

from .special import lobachevsky


class LinkFamily:
    """Base class of the link descriptors; ``components`` counts link components."""

    components: int = 1

    @property
    def is_knot(self) -> bool:
        return self.components == 1

    def spec(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Unknot(LinkFamily):
    components = 1

    def spec(self):
        return "U"


@dataclass(frozen=True)
class FigureEight(LinkFamily):
    components = 1

    def spec(self):
        return "4_1"


@dataclass(frozen=True)
class WhiteheadLink(LinkFamily):
    components = 2

    def spec(self):
        return "WL"


@dataclass(frozen=True)
class WhiteheadChainCabledFigEight(LinkFamily):
    a: int
    c: int
    d: int

    def __post_init__(self):
        if self.c < 0 or self.d < 0 or self.c + self.d < 1:
            raise ValueError("need c, d >= 0 and c + d >= 1")

    @property
    def components(self):
        return 1 + self.c + self.d

    def spec(self):
        return f"W({self.a},{self.c},{self.d})*4_1"


@dataclass(frozen=True)
class IteratedDoubleFigEight(LinkFamily):
    p: int

    def __post_init__(self):
        if self.p < 0:
            raise ValueError("p must be nonnegative")

    components = 1

    def spec(self):
        return f"WD^{self.p}(4_1)"


@dataclass(frozen=True)
class WAlphaBeta(LinkFamily):
    alpha: int
    beta: int

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0 or self.alpha + self.beta < 1:
            raise ValueError("need alpha, beta >= 0 and alpha + beta >= 1")

    components = 2

    def spec(self):
        return f"W[{self.alpha},{self.beta}]"


@dataclass(frozen=True)
class HopfUnion(LinkFamily):
    left: LinkFamily
    right: LinkFamily

    def __post_init__(self):
        if not (self.left.is_knot and self.right.is_knot):
            raise ValueError("both summands of a Hopf union must be knots")

    components = 2

    def spec(self):
        return f"hopf({self.left.spec()},{self.right.spec()})"


# short names used across the package
CabledChain = WhiteheadChainCabledFigEight
IteratedDouble = IteratedDoubleFigEight


# --------------------------------------------------------------------------
# volumes

@dataclass(frozen=True)
class VolumeConstants:
    vol_fig8: object
    vol_wl: object
    v3: object


@lru_cache(maxsize=4)
def _constants(dps: int) -> VolumeConstants:
    with mp.workdps(dps + 10):
        f8 = 6 * lobachevsky(mp.pi / 3)
        wl = 8 * lobachevsky(mp.pi / 4)
    with mp.workdps(dps):
        return VolumeConstants(vol_fig8=+f8, vol_wl=+wl, v3=+f8 / 2)


def volume_constants(digits: int | None = None) -> VolumeConstants:
    """Vol(4_1) = 6 Lambda(pi/3), Vol(WL) = 8 Lambda(pi/4) and v_3, to at least 64 digits."""
    return _constants(max(mp.mp.dps, 64) if digits is None else int(digits))


@dataclass(frozen=True)
class JsjProfile:
    fig_eight_pieces: int = 0
    whitehead_pieces: int = 0
    chain_piece: tuple | None = None
    seifert_pieces: int = 0

    def __add__(self, other: "JsjProfile") -> "JsjProfile":
        if self.chain_piece and other.chain_piece:
            raise ValueError("at most one chain piece")
        return JsjProfile(
            self.fig_eight_pieces + other.fig_eight_pieces,
            self.whitehead_pieces + other.whitehead_pieces,
            self.chain_piece or other.chain_piece,
            self.seifert_pieces + other.seifert_pieces,
        )


def jsj_profile(link: LinkFamily) -> JsjProfile:
    if isinstance(link, Unknot):
        return JsjProfile()
    if isinstance(link, FigureEight):
        return JsjProfile(fig_eight_pieces=1)
    if isinstance(link, WhiteheadLink):
        return JsjProfile(whitehead_pieces=1)
    if isinstance(link, WhiteheadChainCabledFigEight):
        return JsjProfile(fig_eight_pieces=1, chain_piece=(link.a, link.c, link.d))
    if isinstance(link, IteratedDoubleFigEight):
        return JsjProfile(fig_eight_pieces=1, whitehead_pieces=link.p + 1)
    if isinstance(link, WAlphaBeta):
        return JsjProfile(whitehead_pieces=link.alpha + link.beta)
    if isinstance(link, HopfUnion):
        return jsj_profile(link.left) + jsj_profile(link.right) + JsjProfile(seifert_pieces=3)
    raise TypeError(f"unknown link family {link!r}")


def chain_piece_volume(a: int, c: int, d: int, vc: VolumeConstants | None = None):
    """Volume of the W_{a,1,c,d} piece: (c + d) Whitehead volumes, independent of a."""
    vc = vc or volume_constants()
    return (c + d) * vc.vol_wl


def simplicial_volume(link: LinkFamily, vc: VolumeConstants | None = None):
    """v_3 times the simplicial volume, i.e. the sum of hyperbolic piece volumes."""
    vc = vc or volume_constants()
    prof = jsj_profile(link)
    vol = prof.fig_eight_pieces * vc.vol_fig8 + prof.whitehead_pieces * vc.vol_wl
    if prof.chain_piece:
        vol += chain_piece_volume(*prof.chain_piece, vc=vc)
    return mp.mpf(vol)


# --------------------------------------------------------------------------
# parsing

class LinkSpecError(ValueError):
    def __init__(self, text: str, pos: int, expected):
        self.text = text
        self.pos = pos
        self.expected = tuple(expected)
        found = repr(text[pos]) if pos < len(text) else "end of input"
        super().__init__(
            f"bad link spec {text!r} at position {pos}: expected {' or '.join(self.expected)}, found {found}"
        )


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def fail(self, *expected):
        raise LinkSpecError(self.text, self.pos, expected)

    def peek(self, lit):
        return self.text.startswith(lit, self.pos)

    def eat(self, lit):
        if not self.peek(lit):
            self.fail(repr(lit))
        self.pos += len(lit)

    def integer(self, signed=False):
        start = self.pos
        if signed and self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            self.pos = digits
            self.fail("integer")
        return int(self.text[start:self.pos])

    def link(self):
        start = self.pos
        try:
            return self._link()
        except ValueError as exc:
            if isinstance(exc, LinkSpecError):
                raise
            raise LinkSpecError(self.text, start, [str(exc)]) from exc

    def _link(self):
        if self.peek("hopf("):
            self.eat("hopf(")
            left = self.link()
            self.eat(",")
            right = self.link()
            self.eat(")")
            return HopfUnion(left, right)
        if self.peek("4_1"):
            self.eat("4_1")
            return FigureEight()
        if self.peek("WL"):
            self.eat("WL")
            return WhiteheadLink()
        if self.peek("WD^"):
            self.eat("WD^")
            p = self.integer()
            self.eat("(4_1)")
            return IteratedDoubleFigEight(p)
        if self.peek("W("):
            self.eat("W(")
            a = self.integer(signed=True)
            self.eat(",")
            c = self.integer()
            self.eat(",")
            d = self.integer()
            self.eat(")*4_1")
            return WhiteheadChainCabledFigEight(a, c, d)
        if self.peek("W["):
            self.eat("W[")
            al = self.integer()
            self.eat(",")
            be = self.integer()
            self.eat("]")
            return WAlphaBeta(al, be)
        if self.peek("U"):
            self.eat("U")
            return Unknot()
        self.fail("'U'", "'4_1'", "'WL'", "'W('", "'WD^'", "'W['", "'hopf('")


def parse_link(text: str) -> LinkFamily:
    text = text.strip().replace(" ", "")
    p = _Parser(text)
    link = p.link()
    if p.pos != len(text):
        p.fail("end of input")
    return link

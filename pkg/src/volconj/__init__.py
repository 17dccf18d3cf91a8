"""Colored Jones and Turaev-Viro growth rates versus volumes for Whitehead-type links."""

from .jones import SumWindow, jones_value
from .links import (FigureEight, HopfUnion, IteratedDoubleFigEight, LinkFamily, Unknot, WAlphaBeta,
                    WhiteheadChainCabledFigEight, WhiteheadLink, jsj_profile, parse_link,
                    simplicial_volume, volume_constants)
from .numeric import EvalPoint, Precision, make_eval_point, quantum_int
from .potential import build_potential, find_critical_point

__all__ = [
    "EvalPoint", "FigureEight", "HopfUnion", "IteratedDoubleFigEight", "LinkFamily",
    "Precision", "SumWindow", "Unknot", "WAlphaBeta", "WhiteheadChainCabledFigEight",
    "WhiteheadLink", "build_potential", "find_critical_point", "jones_value", "jsj_profile",
    "make_eval_point", "parse_link", "quantum_int", "simplicial_volume", "volume_constants",
]

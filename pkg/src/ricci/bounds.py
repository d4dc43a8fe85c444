"""Closed-form total-variation and curvature bounds for a single edge."""

from dataclasses import dataclass
from fractions import Fraction

from .graph import Graph, LocalBipartite, oriented, overlap_stats


@dataclass(frozen=True)
class CurvatureBounds:
    tvd: Fraction
    lower: Fraction
    upper: Fraction


def tvd_closed_form(g: Graph, u, v) -> Fraction:
    u, v = oriented(g, u, v)
    ell = overlap_stats(g, u, v).ell
    return 1 - Fraction(ell + 2, g.degree(v) + 1)


def curvature_bounds(g: Graph, u, v) -> CurvatureBounds:
    """Sandwich ``1 - 3*tvd <= C(u, v) <= 1 - tvd``; uses only ell and deg(v)."""
    u, v = oriented(g, u, v)
    ell = overlap_stats(g, u, v).ell
    dv1 = g.degree(v) + 1
    return CurvatureBounds(
        tvd=1 - Fraction(ell + 2, dv1),
        lower=-2 + Fraction(3 * ell + 6, dv1),
        upper=Fraction(ell + 2, dv1),
    )


def tvd_direct(b: LocalBipartite) -> Fraction:
    """Total variation distance computed from the two distributions themselves."""
    p = {x: b.left_mass for x in b.left}
    q = {y: b.right_mass for y in b.right}
    support = set(p) | set(q)
    return sum((abs(p.get(z, 0) - q.get(z, 0)) for z in support), Fraction(0)) / 2

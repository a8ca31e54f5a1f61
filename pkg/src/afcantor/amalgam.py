"""Joint embedding, proper amalgamation of EP-pairs, and the weakly initial
object of a unital category."""

from __future__ import annotations

from typing import Iterable

from .fdalg import (
    EpPair,
    FdAlgebra,
    MalformedInput,
    Morphism,
    compose,
    direct_sum,
    ep_from_section,
    is_unital,
)


def joint_embed(a: FdAlgebra, b: FdAlgebra) -> tuple[FdAlgebra, EpPair, EpPair]:
    g = direct_sum(a, b)
    p, q = len(a), len(b)
    left = [[1 if j == i else 0 for i in range(p)] for j in range(p + q)]
    right = [[1 if j == p + i else 0 for i in range(q)] for j in range(p + q)]
    ea = ep_from_section(Morphism(a, g, left), range(p))
    eb = ep_from_section(Morphism(b, g, right), range(p, p + q))
    return g, ea, eb


def _split(ep: EpPair):
    """Row indices of the codomain outside the section image, in order."""
    image = set(ep.section)
    return [j for j in range(len(ep.cod)) if j not in image]


def proper_amalgamate(ep1: EpPair, ep2: EpPair, unital: bool = False) -> tuple[FdAlgebra, EpPair, EpPair]:
    """Amalgamate two EP-pairs out of a common D into G = D + E1 + F1.

    E1 and F1 are the parts of E and F not covered by the section. A point
    of E goes to (its D-coordinate, its E1-coordinate, what F's extra part
    sees of its D-coordinate), and symmetrically for F, so both squares
    commute for the embeddings and for the left inverses.
    """
    if ep1.dom != ep2.dom:
        raise MalformedInput(f"EP-pairs have different domains {ep1.dom} and {ep2.dom}")
    if unital and not (is_unital(ep1.fwd) and is_unital(ep2.fwd)):
        raise MalformedInput("unital amalgamation needs unital embeddings")
    d = ep1.dom
    p = len(d)
    e_rest, f_rest = _split(ep1), _split(ep2)
    a, b = len(e_rest), len(f_rest)
    g = FdAlgebra(list(d.dims) + [ep1.cod.dims[j] for j in e_rest] + [ep2.cod.dims[j] for j in f_rest])

    # phi': E -> G
    e_slot = {j: p + r for r, j in enumerate(e_rest)}
    rows1 = [[0] * len(ep1.cod) for _ in range(p + a + b)]
    for i, j in enumerate(ep1.section):
        rows1[i][j] = 1
        for s, jf in enumerate(f_rest):
            rows1[p + a + s][j] = ep2.fwd.mult[jf][i]
    for j, slot in e_slot.items():
        rows1[slot][j] = 1
    sigma1 = [0] * len(ep1.cod)
    for i, j in enumerate(ep1.section):
        sigma1[j] = i
    for j, slot in e_slot.items():
        sigma1[j] = slot

    # psi': F -> G
    rows2 = [[0] * len(ep2.cod) for _ in range(p + a + b)]
    for i, j in enumerate(ep2.section):
        rows2[i][j] = 1
        for r, je in enumerate(e_rest):
            rows2[p + r][j] = ep1.fwd.mult[je][i]
    sigma2 = [0] * len(ep2.cod)
    for i, j in enumerate(ep2.section):
        sigma2[j] = i
    for s, j in enumerate(f_rest):
        rows2[p + a + s][j] = 1
        sigma2[j] = p + a + s

    out1 = ep_from_section(Morphism(ep1.cod, g, rows1), sigma1)
    out2 = ep_from_section(Morphism(ep2.cod, g, rows2), sigma2)
    return g, out1, out2


def amalgam_identities(ep1: EpPair, ep2: EpPair, out1: EpPair, out2: EpPair) -> dict[str, bool]:
    """The four commuting squares, checked by multiplying matrices."""
    return {
        "embeddings agree": compose(out1.fwd, ep1.fwd) == compose(out2.fwd, ep2.fwd),
        "left inverses agree": compose(ep1.back, out1.back) == compose(ep2.back, out2.back),
        "E to F through G": compose(out2.back, out1.fwd) == compose(ep2.fwd, ep1.back),
        "F to E through G": compose(out1.back, out2.fwd) == compose(ep1.fwd, ep2.back),
    }


def representable(target: int, parts: Iterable[int]) -> bool:
    """Is target a nonnegative integer combination of parts? Plain knapsack."""
    parts = sorted({p for p in parts if p <= target})
    if target == 0:
        return True
    reach = [False] * (target + 1)
    reach[0] = True
    for v in range(1, target + 1):
        reach[v] = any(reach[v - p] for p in parts if p <= v)
    return reach[target]


def weakly_initial(dims: Iterable[int]) -> FdAlgebra:
    """Minimal generating set of the additive monoid spanned by dims."""
    ds = sorted(set(int(k) for k in dims))
    if not ds:
        raise MalformedInput("weakly_initial needs a nonempty set of dimensions")
    if ds[0] < 1:
        raise MalformedInput("dimensions must be positive")
    keep = [k for k in ds if not representable(k, [x for x in ds if x != k])]
    return FdAlgebra(keep)

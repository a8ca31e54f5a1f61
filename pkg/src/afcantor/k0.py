"""Scaled dimension groups read off Bratteli diagrams.

A presentation is the sequence Z^{r_0} -> Z^{r_1} -> ... of positive
integer matrices together with the unit vectors u_n (node sizes at level n).
The scale is the union of the pushed-forward boxes [0, u_n].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .bratteli import BratteliDiagram, CantorReport, check_cantor
from .fdalg import MalformedInput, Morphism, as_int_array, identity_matrix, is_embedding, matmul
from . import textio

# which certifier condition stands in for each condition on the group side
CONDITION_MAP = {"1": "D1", "2": "D2", "3": "D3"}


@dataclass(frozen=True)
class DimensionGroupPresentation:
    units: tuple[tuple[int, ...], ...]
    matrices: tuple[np.ndarray, ...] = field(compare=False)

    def __post_init__(self):
        if len(self.matrices) != len(self.units) - 1:
            raise MalformedInput(f"{len(self.units)} unit vectors need {len(self.units) - 1} matrices")
        for n, a in enumerate(self.matrices):
            if a.shape != (len(self.units[n + 1]), len(self.units[n])):
                raise MalformedInput(
                    f"matrix {n} has shape {a.shape}, expected {(len(self.units[n + 1]), len(self.units[n]))}"
                )
            if (a < 0).any():
                raise MalformedInput(f"matrix {n} has a negative entry")

    def __eq__(self, other):
        return (
            isinstance(other, DimensionGroupPresentation)
            and self.units == other.units
            and all(np.array_equal(a, b) for a, b in zip(self.matrices, other.matrices))
        )

    __hash__ = None

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(len(u) for u in self.units)

    @property
    def depth(self) -> int:
        return len(self.units)

    def alpha(self, n: int, m: int) -> np.ndarray:
        """The composed map Z^{r_n} -> Z^{r_m}."""
        if not 0 <= n <= m < self.depth:
            raise IndexError(f"no map from level {n} to level {m} in a presentation of depth {self.depth}")
        out = identity_matrix(len(self.units[n]))
        for k in range(n, m):
            out = matmul(self.matrices[k], out)
        return out

    def scaled(self) -> bool:
        """alpha_n(u_n) <= u_{n+1} at every step."""
        return all((a @ np.array(self.units[n], dtype=object) <= np.array(self.units[n + 1], dtype=object)).all()
                   for n, a in enumerate(self.matrices))

    def order_unit_in_prefix(self) -> bool:
        """Units are carried exactly onto units at every step of the prefix."""
        return all(list(a @ np.array(self.units[n], dtype=object)) == list(self.units[n + 1])
                   for n, a in enumerate(self.matrices))


@dataclass(frozen=True)
class GroupElement:
    level: int
    vector: tuple[int, ...]


def extract_k0(d: BratteliDiagram) -> DimensionGroupPresentation:
    return DimensionGroupPresentation(tuple(a.dims for a in d.levels), tuple(s.arr for s in d.steps))


def translate(p: DimensionGroupPresentation) -> BratteliDiagram:
    """Back to a diagram. Each row of each matrix must fit in its unit."""
    for n, a in enumerate(p.matrices):
        loads = a.astype(object) @ np.array(p.units[n], dtype=object)
        for j, (load, cap) in enumerate(zip(loads.tolist(), p.units[n + 1])):
            if load > cap:
                raise MalformedInput(f"matrix {n}, row {j}: load {load} exceeds unit {cap}")
        f = Morphism(p.units[n], p.units[n + 1], a)
        if not is_embedding(f):
            raise MalformedInput(f"matrix {n} has a zero column, so the step is not injective")
    return BratteliDiagram(p.units, [Morphism(p.units[n], p.units[n + 1], a) for n, a in enumerate(p.matrices)])


def _element(p: DimensionGroupPresentation, g: GroupElement) -> np.ndarray:
    if not 0 <= g.level < p.depth:
        raise IndexError(f"level {g.level} outside the presentation (depth {p.depth})")
    if len(g.vector) != p.ranks[g.level]:
        raise MalformedInput(f"vector has length {len(g.vector)}, rank at level {g.level} is {p.ranks[g.level]}")
    return np.array(g.vector, dtype=object)


def push(p: DimensionGroupPresentation, g: GroupElement, m: int) -> GroupElement:
    v = _element(p, g)
    if m < g.level:
        raise IndexError(f"cannot push from level {g.level} back to level {m}")
    return GroupElement(m, tuple(int(x) for x in p.alpha(g.level, m).astype(object) @ v))


def _scan(p: DimensionGroupPresentation, g: GroupElement, depth: int | None, test) -> str:
    v = _element(p, g)
    last = p.depth - 1 if depth is None else min(depth, p.depth - 1)
    for m in range(g.level, last + 1):
        if m > g.level:
            v = p.matrices[m - 1].astype(object) @ v
        if test(v, m):
            return "yes"
    return "inconclusive"


def is_positive(p: DimensionGroupPresentation, g: GroupElement, depth: int | None = None) -> str:
    """'yes' once some push up to `depth` is componentwise >= 0. A 'no'
    would need the whole tail, so it is never reported."""
    return _scan(p, g, depth, lambda v, m: all(x >= 0 for x in v))


def in_scale(p: DimensionGroupPresentation, g: GroupElement, depth: int | None = None) -> str:
    return _scan(p, g, depth, lambda v, m: all(0 <= x <= u for x, u in zip(v, p.units[m])))


@dataclass
class PresentationReport:
    cantor: CantorReport
    order_unit_in_prefix: bool

    def conditions(self) -> dict[str, dict[str, int]]:
        return {
            k: {"witnessed": len(self.cantor.witnessed(c)), "unwitnessed": len(self.cantor.unwitnessed(c))}
            for k, c in CONDITION_MAP.items()
        }

    def witnessed(self, condition: str) -> bool:
        c = CONDITION_MAP[condition]
        return not self.cantor.unwitnessed(c)

    def as_data(self) -> dict:
        return {
            "conditions": {k: dict(v, certifier=CONDITION_MAP[k]) for k, v in self.conditions().items()},
            "order-unit-in-prefix": self.order_unit_in_prefix,
            "certifier": self.cantor.as_data(),
        }


def check_universal_presentation(
    p: DimensionGroupPresentation,
    depth: int | None = None,
    dim_universe: Iterable[int] | None = None,
    levels: Iterable[int] | None = None,
    max_support: int | None = None,
) -> PresentationReport:
    """Check the universality conditions on the group side by translating to
    a diagram and running the certifier. Condition 1 (a unit splits into two
    equal units further up) is D1, condition 2 (every admissible multiple
    pattern is realized by some coordinate) is D2, and condition 3 (every
    size occurs as a unit entry) is D3."""
    d = translate(p)
    if depth is not None:
        d = BratteliDiagram(d.levels[:depth], d.steps[: max(0, depth - 1)])
    rep = check_cantor(d, dim_universe=dim_universe, levels=levels, max_support=max_support)
    return PresentationReport(rep, extract_k0(d).order_unit_in_prefix())


# ---------------------------------------------------------------- text format


def to_data(p: DimensionGroupPresentation) -> dict:
    return {
        "ranks": list(p.ranks),
        "units": [list(u) for u in p.units],
        "matrices": [textio.matrix_to_data(a) for a in p.matrices],
    }


def to_text(p: DimensionGroupPresentation) -> str:
    return textio.dump(to_data(p))


def from_node(node) -> DimensionGroupPresentation:
    m = textio.mapping(node, ("ranks", "units", "matrices"))
    ranks = textio.int_list(m["ranks"], 0)
    unodes = textio.seq(m["units"])
    if len(unodes) != len(ranks):
        raise textio._at(m["units"], f"{len(ranks)} ranks but {len(unodes)} unit vectors")
    units = []
    for r, un in zip(ranks, unodes):
        u = textio.int_list(un, 1)
        if len(u) != r:
            raise textio._at(un, f"unit vector has length {len(u)}, rank is {r}")
        units.append(tuple(u))
    mnodes = textio.seq(m["matrices"])
    if len(mnodes) != max(0, len(units) - 1):
        raise textio._at(m["matrices"], f"{len(units)} levels need {max(0, len(units) - 1)} matrices")
    mats = [as_int_array(textio.matrix(mn, ranks[n + 1], ranks[n]), ranks[n + 1], ranks[n]) for n, mn in enumerate(mnodes)]
    return DimensionGroupPresentation(tuple(units), tuple(mats))


def from_text(text: str) -> DimensionGroupPresentation:
    return from_node(textio.parse(text))


def constant(k: int, depth: int) -> DimensionGroupPresentation:
    """Rank one at every level, unit (k), every matrix [1]."""
    one = as_int_array([[1]], 1, 1)
    return DimensionGroupPresentation(((k,),) * depth, (one,) * (depth - 1))

"""Generators shared by the tests: hypothesis strategies and seeded numpy
samplers for the bulk runs."""

from __future__ import annotations

import numpy as np
from hypothesis import strategies as st

from afcantor.bratteli import BratteliDiagram, random_diagram
from afcantor.fdalg import EpPair, FdAlgebra, Morphism, ep_from_section


def algebras(max_dim: int = 6, min_len: int = 0, max_len: int = 3):
    return st.lists(st.integers(1, max_dim), min_size=min_len, max_size=max_len).map(FdAlgebra)


@st.composite
def fitting_row(draw, dom: FdAlgebra, room: int, exact: bool = False):
    """Multiplicities over dom with load <= room."""
    row = []
    left = room
    for k in dom.dims:
        x = draw(st.integers(0, left // k))
        row.append(x)
        left -= x * k
    if exact and left:
        return None
    return row


@st.composite
def homomorphisms(draw, dom: FdAlgebra | None = None, max_dim: int = 6, max_len: int = 3):
    if dom is None:
        dom = draw(algebras(max_dim, 0, max_len))
    cod = draw(algebras(max_dim, 0, max_len))
    rows = [draw(fitting_row(dom, k)) for k in cod.dims]
    return Morphism(dom, cod, np.array(rows, dtype=np.int64).reshape(len(cod), len(dom)))


def _ep_from_extras(dom: FdAlgebra, extras, perm) -> EpPair:
    rows = [[1 if j == i else 0 for j in range(len(dom))] for i in range(len(dom))]
    dims = list(dom.dims)
    for k, row in extras:
        rows.append(row)
        dims.append(k)
    rows = [rows[p] for p in perm]
    dims = [dims[p] for p in perm]
    where = {p: q for q, p in enumerate(perm)}
    fwd = Morphism(dom, dims, np.array(rows, dtype=np.int64).reshape(len(dims), len(dom)))
    return ep_from_section(fwd, [where[i] for i in range(len(dom))])


@st.composite
def ep_pairs(draw, dom: FdAlgebra | None = None, max_dim: int = 6, max_extra: int = 2, unital: bool = False):
    """A left-invertible embedding out of dom, codomain summands shuffled."""
    if dom is None:
        dom = draw(algebras(max_dim, 1, 3))
    extras = []
    for _ in range(draw(st.integers(0, max_extra))):
        row = draw(fitting_row(dom, max_dim))
        load = sum(x * k for x, k in zip(row, dom.dims))
        if unital:
            if load == 0:
                continue
            k = load
        else:
            k = draw(st.integers(max(load, 1), max_dim))
        extras.append((k, row))
    n = len(dom) + len(extras)
    perm = draw(st.permutations(range(n)))
    return _ep_from_extras(dom, extras, list(perm))


def random_ep(rng: np.random.Generator, dom: FdAlgebra, max_dim: int = 8, max_summands: int = 4, unital: bool = False) -> EpPair:
    extras = []
    for _ in range(int(rng.integers(0, max_summands - len(dom) + 1))):
        row, left = [], max_dim
        for k in dom.dims:
            x = int(rng.integers(0, left // k + 1))
            row.append(x)
            left -= x * k
        load = max_dim - left
        if unital:
            if load == 0:
                continue
            k = load
        else:
            k = int(rng.integers(max(load, 1), max_dim + 1))
        extras.append((k, row))
    perm = rng.permutation(len(dom) + len(extras)).tolist()
    return _ep_from_extras(dom, extras, perm)


def random_algebra(rng: np.random.Generator, max_dim: int = 8, max_len: int = 3) -> FdAlgebra:
    return FdAlgebra(rng.integers(1, max_dim + 1, size=int(rng.integers(1, max_len + 1))).tolist())


@st.composite
def diagrams(draw, depth: int | None = None, max_dim: int = 4, max_width: int = 2):
    """Arbitrary diagrams: steps are embeddings, maybe not left-invertible."""
    if depth is None:
        depth = draw(st.integers(1, 4))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_diagram(np.random.default_rng(seed), depth, max_dim, max_width)


@st.composite
def li_diagrams(draw, depth: int | None = None, max_dim: int = 4, max_extra: int = 2):
    """Diagrams whose steps are left-invertible."""
    if depth is None:
        depth = draw(st.integers(1, 4))
    levels = [draw(algebras(max_dim, 1, 2))]
    steps = []
    for _ in range(depth - 1):
        ep = draw(ep_pairs(levels[-1], max_dim, max_extra))
        levels.append(ep.cod)
        steps.append(ep.fwd)
    return BratteliDiagram(levels, steps)

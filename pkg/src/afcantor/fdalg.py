"""Finite-dimensional C*-algebras as dimension vectors, and homomorphisms
between them as multiplicity matrices.

A homomorphism is determined up to unitary equivalence by how many copies
of each domain summand sit inside each codomain summand, so every map here
is just that integer matrix. Rows index codomain summands, columns index
domain summands. All arithmetic is exact: products fall back to Python
integers whenever int64 could overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class MalformedInput(ValueError):
    """Input does not describe a valid object (bad shape, bad entries)."""


class NotLeftInvertible(ValueError):
    pass


_SAFE = 2**62


def _bound(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(max(abs(int(a.max())), abs(int(a.min()))))


def as_int_array(data, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Nested integer data as a read-only 2-d array (int64, or object if huge)."""
    if isinstance(data, np.ndarray):
        a = data
        if a.dtype.kind not in "iuO":
            raise MalformedInput(f"matrix entries must be integers, got dtype {a.dtype}")
        if a.ndim == 1 and a.size == 0:
            a = a.reshape(rows or 0, cols or 0)
        if a.ndim != 2:
            raise MalformedInput("multiplicity data must be a matrix")
        if a.dtype.kind == "O":
            for x in a.flat:
                if not isinstance(x, (int, np.integer)) or isinstance(x, bool):
                    raise MalformedInput(f"matrix entry {x!r} is not an integer")
            a = a.copy()
        else:
            a = a.astype(np.int64, copy=True)
        a = compact(a)
        if a is data:
            a = a.copy()
    else:
        rows_l = []
        width = None
        for r in data:
            row = []
            for x in r:
                if isinstance(x, (bool, np.bool_)) or not isinstance(x, (int, np.integer)):
                    raise MalformedInput(f"matrix entry {x!r} is not an integer")
                row.append(int(x))
            if width is not None and len(row) != width:
                raise MalformedInput("matrix rows have different lengths")
            width = len(row)
            rows_l.append(row)
        n = len(rows_l)
        m = width if width is not None else (cols or 0)
        big = max((abs(x) for row in rows_l for x in row), default=0)
        if big < _SAFE:
            a = compact(np.array(rows_l, dtype=np.int64).reshape(n, m))
        else:
            a = np.empty((n, m), dtype=object)
            for i, row in enumerate(rows_l):
                for j, x in enumerate(row):
                    a[i, j] = x
    if rows is not None and a.shape[0] != rows:
        raise MalformedInput(f"multiplicity matrix has {a.shape[0]} rows, codomain has {rows} summands")
    if cols is not None and a.shape[1] != cols and not (a.shape[0] == 0):
        raise MalformedInput(f"multiplicity matrix has {a.shape[1]} columns, domain has {cols} summands")
    if a.shape[0] == 0 and cols is not None:
        a = a.reshape(0, cols)
    a.setflags(write=False)
    return a


def compact(a: np.ndarray) -> np.ndarray:
    """Store in the narrowest integer type that holds every entry."""
    if a.dtype == object:
        if _bound(a) < _SAFE:
            a = a.astype(np.int64)
        else:
            return a
    b = _bound(a)
    for dt in (np.int8, np.int16, np.int32):
        if b <= np.iinfo(dt).max:
            return a.astype(dt, copy=False)
    return a.astype(np.int64, copy=False)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product of two integer matrices."""
    inner = a.shape[1]
    if a.dtype != object and b.dtype != object and _bound(a) * _bound(b) * max(inner, 1) < _SAFE:
        out = a.astype(np.int64, copy=False) @ b.astype(np.int64, copy=False)
    elif inner:
        out = a.astype(object) @ b.astype(object)
    else:
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    out = compact(out)
    out.setflags(write=False)
    return out


def identity_matrix(k: int) -> np.ndarray:
    out = np.eye(k, dtype=np.int64)
    out.setflags(write=False)
    return out


def _dims_vector(dims: Sequence[int]) -> np.ndarray:
    if dims and max(dims) >= _SAFE // 8:
        return np.array(list(dims), dtype=object)
    return np.array(list(dims), dtype=np.int64)


@dataclass(frozen=True)
class FdAlgebra:
    """Ordered list of matrix sizes; the empty list is the zero algebra."""

    dims: tuple[int, ...] = ()

    def __init__(self, dims: Iterable[int] = ()):
        out = []
        for k in dims:
            if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
                raise MalformedInput(f"summand dimension must be an integer, got {k!r}")
            if k < 1:
                raise MalformedInput(f"summand dimension must be positive, got {k}")
            out.append(int(k))
        object.__setattr__(self, "dims", tuple(out))

    def __len__(self):
        return len(self.dims)

    def __iter__(self):
        return iter(self.dims)

    def __getitem__(self, i):
        return self.dims[i]

    def __repr__(self):
        return f"FdAlgebra({list(self.dims)})"

    @property
    def linear_dim(self) -> int:
        return sum(k * k for k in self.dims)

    def is_zero(self) -> bool:
        return not self.dims


ZERO = FdAlgebra(())


def canonicalize(a: FdAlgebra) -> FdAlgebra:
    """Isomorphism-class representative: dimensions sorted descending."""
    return FdAlgebra(sorted(a.dims, reverse=True))


def isomorphic(a: FdAlgebra, b: FdAlgebra) -> bool:
    return canonicalize(a) == canonicalize(b)


def direct_sum(*algs: FdAlgebra) -> FdAlgebra:
    dims: list[int] = []
    for a in algs:
        dims.extend(a.dims)
    return FdAlgebra(dims)


def unitize(a: FdAlgebra) -> FdAlgebra:
    return FdAlgebra((1,) + a.dims)


def is_retract(d: FdAlgebra, e: FdAlgebra) -> bool:
    """True when d's summands form a sub-multiset of e's."""
    pool = list(e.dims)
    for k in d.dims:
        if k not in pool:
            return False
        pool.remove(k)
    return True


class Morphism:
    """Multiplicity matrix between two FdAlgebras. Immutable."""

    __slots__ = ("dom", "cod", "arr", "_rows")

    def __init__(self, dom, cod, mult):
        dom = dom if isinstance(dom, FdAlgebra) else FdAlgebra(dom)
        cod = cod if isinstance(cod, FdAlgebra) else FdAlgebra(cod)
        arr = as_int_array(mult, len(cod), len(dom))
        if arr.shape != (len(cod), len(dom)):
            raise MalformedInput(f"matrix shape {arr.shape} does not match {len(cod)} x {len(dom)}")
        if arr.size and (arr < 0).any():
            raise MalformedInput("multiplicities must be nonnegative")
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "cod", cod)
        object.__setattr__(self, "arr", arr)
        object.__setattr__(self, "_rows", None)

    def __setattr__(self, name, value):
        raise AttributeError("Morphism is immutable")

    @property
    def mult(self) -> tuple[tuple[int, ...], ...]:
        if self._rows is None:
            object.__setattr__(self, "_rows", tuple(tuple(int(x) for x in r) for r in self.arr.tolist()))
        return self._rows

    def __eq__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        return self.dom == other.dom and self.cod == other.cod and np.array_equal(self.arr, other.arr)

    def __hash__(self):
        return hash((self.dom, self.cod, self.mult))

    def __repr__(self):
        return f"Morphism({list(self.dom.dims)} -> {list(self.cod.dims)}, {self.arr.tolist()})"

    def column(self, i: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.arr[:, i])

    def row(self, j: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.arr[j])

    def loads(self) -> np.ndarray:
        """Per codomain summand, the size taken up by the image."""
        if not len(self.dom):
            return np.zeros(len(self.cod), dtype=np.int64)
        return matmul(self.arr, _dims_vector(self.dom.dims).reshape(-1, 1)).reshape(-1)

    def row_load(self, j: int) -> int:
        return sum(int(x) * k for x, k in zip(self.arr[j], self.dom.dims))


def identity(a: FdAlgebra) -> Morphism:
    return Morphism(a, a, identity_matrix(len(a)))


def zero_map(a: FdAlgebra, b: FdAlgebra) -> Morphism:
    return Morphism(a, b, np.zeros((len(b), len(a)), dtype=np.int64))


def find_section(m: Morphism) -> tuple[int, ...] | None:
    """Return sigma with sigma[i] the first codomain summand holding a lone
    copy of domain summand i, or None if some summand has no such row.

    A row can only witness the one column where it has its single 1, so the
    candidate sets for different columns never overlap and taking the first
    candidate per column gives an injective choice.
    """
    p = len(m.dom)
    if p == 0:
        return ()
    a = m.arr
    if a.shape[0] == 0:
        return None
    sums = a.sum(axis=1)
    col = a.argmax(axis=1)
    sigma = [-1] * p
    cod, dom = m.cod.dims, m.dom.dims
    for j in np.flatnonzero(sums == 1).tolist():
        i = int(col[j])
        if sigma[i] < 0 and cod[j] == dom[i]:
            sigma[i] = j
    if min(sigma) < 0:
        return None
    return tuple(sigma)


def is_homomorphism(m: Morphism) -> bool:
    return all(int(x) <= k for x, k in zip(m.loads(), m.cod.dims))


def is_unital(m: Morphism) -> bool:
    return all(int(x) == k for x, k in zip(m.loads(), m.cod.dims))


def is_embedding(m: Morphism) -> bool:
    if not is_homomorphism(m):
        return False
    if not len(m.dom):
        return True
    return bool((m.arr.sum(axis=0) > 0).all()) if len(m.cod) else False


def is_left_invertible(m: Morphism) -> bool:
    return find_section(m) is not None


def validate_morphism(m: Morphism) -> dict[str, bool]:
    return {
        "homomorphism": is_homomorphism(m),
        "embedding": is_embedding(m),
        "unital": is_unital(m),
        "left_invertible": is_left_invertible(m),
    }


def compose(g: Morphism, f: Morphism) -> Morphism:
    """g after f."""
    if f.cod != g.dom:
        raise MalformedInput(f"cannot compose: {f.cod} is not {g.dom}")
    return Morphism(f.dom, g.cod, matmul(g.arr, f.arr))


def direct_sum_mor(f: Morphism, g: Morphism) -> Morphism:
    dt = object if object in (f.arr.dtype, g.arr.dtype) else np.int64
    out = np.zeros((len(f.cod) + len(g.cod), len(f.dom) + len(g.dom)), dtype=dt)
    out[: len(f.cod), : len(f.dom)] = f.arr
    out[len(f.cod) :, len(f.dom) :] = g.arr
    return Morphism(direct_sum(f.dom, g.dom), direct_sum(f.cod, g.cod), out)


@dataclass(frozen=True)
class EpPair:
    """A left-invertible embedding with the left inverse that reads each
    domain summand back off its lone copy section[i]."""

    fwd: Morphism
    back: Morphism
    section: tuple[int, ...]

    @property
    def dom(self) -> FdAlgebra:
        return self.fwd.dom

    @property
    def cod(self) -> FdAlgebra:
        return self.fwd.cod

    def check(self) -> None:
        d, e = self.fwd.dom, self.fwd.cod
        if self.back.dom != e or self.back.cod != d:
            raise MalformedInput("left inverse has the wrong domain or codomain")
        if compose(self.back, self.fwd) != identity(d):
            raise MalformedInput("back after fwd is not the identity")
        for i, j in enumerate(self.section):
            row = self.fwd.row(j)
            if e.dims[j] != d.dims[i] or row[i] != 1 or sum(row) != 1:
                raise MalformedInput(f"section entry {i} -> {j} is not a lone copy")


def back_from_section(fwd: Morphism, sigma: Sequence[int]) -> Morphism:
    out = np.zeros((len(fwd.dom), len(fwd.cod)), dtype=np.int64)
    for i, j in enumerate(sigma):
        out[i, j] = 1
    return Morphism(fwd.cod, fwd.dom, out)


def ep_from_section(fwd: Morphism, sigma: Sequence[int]) -> EpPair:
    sigma = tuple(int(j) for j in sigma)
    return EpPair(fwd, back_from_section(fwd, sigma), sigma)


def canonical_left_inverse(m: Morphism) -> EpPair:
    sigma = find_section(m)
    if sigma is None:
        raise NotLeftInvertible(f"{m} has no left inverse")
    return ep_from_section(m, sigma)


def compose_ep(second: EpPair, first: EpPair) -> EpPair:
    """second after first; sections compose, backs compose in reverse."""
    fwd = compose(second.fwd, first.fwd)
    sigma = tuple(second.section[j] for j in first.section)
    return EpPair(fwd, compose(first.back, second.back), sigma)


def identity_ep(a: FdAlgebra) -> EpPair:
    return ep_from_section(identity(a), range(len(a)))


def matrix_absorb(gamma: Morphism, phi: Morphism) -> Morphism | None:
    """Find delta: M_k -> M_l with delta after gamma equal to phi.

    Between single matrix algebras the only maps are scalar multiplicities c,
    so this holds exactly when phi's column is c times gamma's with c*k <= l.
    """
    if gamma.dom != phi.dom:
        raise MalformedInput("gamma and phi must share a domain")
    if len(gamma.cod) != 1 or len(phi.cod) != 1:
        raise MalformedInput("matrix_absorb needs single-summand codomains")
    k, l = gamma.cod.dims[0], phi.cod.dims[0]
    g, p = gamma.row(0), phi.row(0)
    c = None
    for x, y in zip(g, p):
        if x:
            if y % x:
                return None
            c = y // x
            break
    if c is None:
        # gamma is the empty map; any c >= 1 that fits will do
        if any(p):
            return None
        c = 1
    if c < 1 or c * k > l:
        return None
    if any(c * x != y for x, y in zip(g, p)):
        return None
    return Morphism(gamma.cod, phi.cod, [[c]])

"""Bratteli diagrams as finite leveled presentations.

Nodes are addressed as (level, summand) pairs, both counted from 0. The
matrix of step n has rows for the summands of level n+1 and columns for the
summands of level n, so path counts are entries of products of steps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .fdalg import (
    FdAlgebra,
    MalformedInput,
    Morphism,
    find_section,
    identity_matrix,
    is_embedding,
    is_left_invertible,
    is_unital,
    matmul,
)
from . import textio


class Node(NamedTuple):
    level: int
    summand: int


@dataclass(frozen=True, eq=True)
class BratteliDiagram:
    levels: tuple[FdAlgebra, ...]
    steps: tuple[Morphism, ...]
    _paths: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __init__(self, levels: Sequence, steps: Sequence[Morphism] | None = None):
        lv = tuple(a if isinstance(a, FdAlgebra) else FdAlgebra(a) for a in levels)
        if not lv:
            raise MalformedInput("a diagram needs at least one level")
        if steps is None:
            raise MalformedInput("steps are required")
        st = []
        for n, s in enumerate(steps):
            if not isinstance(s, Morphism):
                s = Morphism(lv[n], lv[n + 1], s) if n + 1 < len(lv) else None
                if s is None:
                    raise MalformedInput("more steps than level gaps")
            st.append(s)
        st = tuple(st)
        if len(st) != len(lv) - 1:
            raise MalformedInput(f"{len(lv)} levels need {len(lv) - 1} steps, got {len(st)}")
        for n, s in enumerate(st):
            if s.dom != lv[n] or s.cod != lv[n + 1]:
                raise MalformedInput(f"step {n} does not go from level {n} to level {n + 1}")
            if not is_embedding(s):
                raise MalformedInput(f"step {n} is not an embedding")
        object.__setattr__(self, "levels", lv)
        object.__setattr__(self, "steps", st)
        object.__setattr__(self, "_paths", {})

    def __repr__(self):
        return f"BratteliDiagram(levels={[list(a.dims) for a in self.levels]})"

    @property
    def depth(self) -> int:
        return len(self.levels)

    def dim(self, node) -> int:
        return self.levels[node[0]].dims[node[1]]

    def nodes(self, level: int | None = None) -> list[Node]:
        if level is not None:
            return [Node(level, s) for s in range(len(self.levels[level]))]
        return [Node(n, s) for n in range(self.depth) for s in range(len(self.levels[n]))]

    def is_left_invertible_sequence(self) -> bool:
        return all(is_left_invertible(s) for s in self.steps)

    def is_unital_sequence(self) -> bool:
        return all(is_unital(s) for s in self.steps)

    def path_matrix(self, n: int, m: int) -> np.ndarray:
        """Composite multiplicity matrix from level n to level m >= n."""
        if not (0 <= n <= m < self.depth):
            raise MalformedInput(f"no path matrix from level {n} to level {m}")
        key = (n, m)
        if key not in self._paths:
            if n == m:
                self._paths[key] = identity_matrix(len(self.levels[n]))
            else:
                prev = self.path_matrix(n, m - 1)
                self._paths[key] = matmul(self.steps[m - 1].arr, prev)
        return self._paths[key]

    def composed(self, n: int, m: int) -> Morphism:
        return Morphism(self.levels[n], self.levels[m], self.path_matrix(n, m))

    def all_dims(self) -> list[int]:
        return sorted({k for a in self.levels for k in a.dims})


def _check_node(d: BratteliDiagram, node) -> Node:
    n, s = node
    if not (0 <= n < d.depth and 0 <= s < len(d.levels[n])):
        raise MalformedInput(f"node {tuple(node)} is not in the diagram")
    return Node(n, s)


def path_count(d: BratteliDiagram, src, dst) -> int:
    src, dst = _check_node(d, src), _check_node(d, dst)
    if src.level > dst.level:
        raise MalformedInput("paths only run forward")
    return int(d.path_matrix(src.level, dst.level)[dst.summand, src.summand])


# ---------------------------------------------------------------- certifier


@dataclass
class Instance:
    condition: str
    level: int
    data: dict
    witness: tuple | None = None

    def as_data(self) -> dict:
        out = {"condition": self.condition, "level": self.level}
        out.update(self.data)
        out["witness"] = None if self.witness is None else [list(w) if isinstance(w, tuple) else w for w in self.witness]
        return out


@dataclass
class CantorReport:
    instances: list[Instance]
    depth: int
    notes: list[str] = field(default_factory=list)

    def witnessed(self, condition: str | None = None) -> list[Instance]:
        return [i for i in self.instances if i.witness is not None and (condition is None or i.condition == condition)]

    def unwitnessed(self, condition: str | None = None) -> list[Instance]:
        return [i for i in self.instances if i.witness is None and (condition is None or i.condition == condition)]

    @property
    def verdict(self) -> str:
        return "violations-open" if self.unwitnessed() else "certified-at-depth"

    def as_data(self, witnessed: bool = True) -> dict:
        conds = sorted({i.condition for i in self.instances})
        return {
            "verdict": self.verdict,
            "depth": self.depth,
            "counts": {c: {"witnessed": len(self.witnessed(c)), "unwitnessed": len(self.unwitnessed(c))} for c in conds},
            "notes": list(self.notes),
            "unwitnessed": [i.as_data() for i in self.unwitnessed()],
            "witnessed": [i.as_data() for i in self.witnessed()] if witnessed else [],
        }


def _vectors(dims: Sequence[int], budget: int, max_support: int | None):
    """All nonzero v >= 0 with sum v[s]*dims[s] <= budget, lexicographic."""
    r = len(dims)

    def rec(i, left, support):
        if i == r:
            yield ()
            return
        top = left // dims[i]
        if max_support is not None and support >= max_support:
            top = 0
        for x in range(top + 1):
            for rest in rec(i + 1, left - x * dims[i], support + (x > 0)):
                yield (x,) + rest

    for v in rec(0, budget, 0):
        if any(v):
            yield v


def check_cantor(
    d: BratteliDiagram,
    dim_universe: Iterable[int] | None = None,
    unital: bool = False,
    levels: Iterable[int] | None = None,
    max_support: int | None = None,
) -> CantorReport:
    """Seek witnesses for every instance of the Cantor conditions that the
    prefix can quantify over.

    D0 asks every step to be left-invertible. D1 asks each node below the
    last level to reach two distinct later nodes of its own size. D2 asks,
    for each level n, each nonzero count vector v over the nodes of level n
    and each target size l from the prefix with sum v[s]*dim(s) <= l (or ==
    l when unital), for a node of size l at some level m >= n whose path
    counts from level n are exactly v. D3, when a universe is given, asks
    every size in it to occur. `levels` and `max_support` only narrow which
    D1/D2 instances get enumerated; they never change a verdict on an
    enumerated instance.
    """
    report = CantorReport([], d.depth)
    if unital:
        report.notes.append("unital: D2 uses equality; D1 is checked unchanged")
    if levels is not None or max_support is not None:
        scope = []
        if levels is not None:
            levels = sorted(set(levels))
            scope.append(f"levels {levels}")
        if max_support is not None:
            scope.append(f"count vectors with at most {max_support} nonzero entries")
        report.notes.append("D1/D2 restricted to " + " and ".join(scope))
    todo = range(d.depth) if levels is None else [n for n in levels if 0 <= n < d.depth]

    for n, step in enumerate(d.steps):
        sigma = find_section(step)
        report.instances.append(Instance("D0", n, {"step": n}, None if sigma is None else tuple(sigma)))

    sizes = d.all_dims()
    for n in todo:
        dims = d.levels[n].dims
        # D1
        if n + 1 < d.depth:
            for s, k in enumerate(dims):
                wit = None
                for m in range(n + 1, d.depth):
                    col = d.path_matrix(n, m)[:, s]
                    hits = [t for t in np.flatnonzero(col > 0).tolist() if d.levels[m].dims[t] == k]
                    if len(hits) >= 2:
                        wit = (m, hits[0], hits[1])
                        break
                report.instances.append(Instance("D1", n, {"node": [n, s], "dim": k}, wit))
        # D2
        if not dims or not sizes:
            continue
        found: dict[tuple[int, tuple[int, ...]], tuple[int, int]] = {}
        for m in range(n, d.depth):
            pm = d.path_matrix(n, m)
            for t, row in enumerate(pm.tolist()):
                if max_support is not None and sum(1 for x in row if x) > max_support:
                    continue
                key = (d.levels[m].dims[t], tuple(row))
                if key not in found:
                    found[key] = (m, t)
        for v in _vectors(dims, sizes[-1], max_support):
            load = sum(x * k for x, k in zip(v, dims))
            for ell in sizes:
                if ell < load or (unital and ell != load):
                    continue
                coeffs = {s: x for s, x in enumerate(v) if x}
                report.instances.append(
                    Instance("D2", n, {"coeffs": coeffs, "target_dim": ell}, found.get((ell, v)))
                )
    if dim_universe is not None:
        first: dict[int, tuple[int, int]] = {}
        for node in d.nodes():
            first.setdefault(d.dim(node), tuple(node))
        for k in sorted(set(dim_universe)):
            report.instances.append(Instance("D3", -1, {"dim": k}, first.get(k)))
    return report


def recheck_witness(d: BratteliDiagram, inst: Instance) -> bool:
    """Verify a recorded witness from scratch with path_count."""
    w = inst.witness
    if w is None:
        return False
    if inst.condition == "D0":
        return is_left_invertible(d.steps[inst.level]) and tuple(find_section(d.steps[inst.level])) == tuple(w)
    if inst.condition == "D1":
        m, t1, t2 = w
        s = inst.data["node"][1]
        k = d.dim((inst.level, s))
        return (
            m > inst.level
            and t1 != t2
            and d.dim((m, t1)) == k == d.dim((m, t2))
            and path_count(d, (inst.level, s), (m, t1)) > 0
            and path_count(d, (inst.level, s), (m, t2)) > 0
        )
    if inst.condition == "D2":
        m, t = w
        n = inst.level
        if m < n or d.dim((m, t)) != inst.data["target_dim"]:
            return False
        coeffs = inst.data["coeffs"]
        return all(path_count(d, (n, s), (m, t)) == coeffs.get(s, 0) for s in range(len(d.levels[n])))
    if inst.condition == "D3":
        return d.dim(w) == inst.data["dim"]
    return False


# ---------------------------------------------------------------- ideals


def _successors(d: BratteliDiagram, node: Node) -> list[Node]:
    n, s = node
    if n + 1 >= d.depth:
        return []
    return [Node(n + 1, t) for t in np.flatnonzero(d.steps[n].arr[:, s]).tolist()]


def ideal_closure(d: BratteliDiagram, seed: Iterable) -> frozenset[Node]:
    """Least node set containing seed that is closed under following edges
    (directed) and contains every non-final node all of whose successors it
    contains (hereditary)."""
    j = {_check_node(d, x) for x in seed}
    changed = True
    while changed:
        changed = False
        for node in list(j):
            for t in _successors(d, node):
                if t not in j:
                    j.add(t)
                    changed = True
        for node in d.nodes():
            if node in j or node.level + 1 >= d.depth:
                continue
            succ = _successors(d, node)
            if succ and all(t in j for t in succ):
                j.add(node)
                changed = True
    return frozenset(j)


def _induced(d: BratteliDiagram, keep: list[list[int]]) -> BratteliDiagram:
    levels = [FdAlgebra([d.levels[n].dims[s] for s in keep[n]]) for n in range(d.depth)]
    steps = []
    for n, st in enumerate(d.steps):
        steps.append(Morphism(levels[n], levels[n + 1], st.arr[np.ix_(keep[n + 1], keep[n])]))
    return BratteliDiagram(levels, steps)


def restrict(d: BratteliDiagram, ideal: Iterable) -> BratteliDiagram:
    j = {_check_node(d, x) for x in ideal}
    return _induced(d, [[s for s in range(len(a)) if (n, s) in j] for n, a in enumerate(d.levels)])


def quotient(d: BratteliDiagram, ideal: Iterable) -> BratteliDiagram:
    j = {_check_node(d, x) for x in ideal}
    return _induced(d, [[s for s in range(len(a)) if (n, s) not in j] for n, a in enumerate(d.levels)])


def is_essential(d: BratteliDiagram, ideal: Iterable) -> str:
    """'yes-at-depth' when every node below the last level reaches the ideal
    inside the prefix; 'no' for the empty ideal of a nonempty diagram;
    'inconclusive' otherwise, since the missing paths may lie past the
    prefix. Last-level nodes outside the ideal have no future in the prefix
    and are not held against it."""
    j = {_check_node(d, x) for x in ideal}
    if not j:
        return "no" if any(len(a) for a in d.levels[:-1]) else "yes-at-depth"
    reach = set(j)
    for n in range(d.depth - 2, -1, -1):
        for node in d.nodes(n):
            if node not in reach and any(t in reach for t in _successors(d, node)):
                reach.add(node)
    for n in range(d.depth - 1):
        if any(node not in reach for node in d.nodes(n)):
            return "inconclusive"
    return "yes-at-depth"


# ---------------------------------------------------------------- constructions


def tensor(d1: BratteliDiagram, d2: BratteliDiagram) -> BratteliDiagram:
    """Levelwise tensor product; node (s, t) sits at index s*|level of d2| + t."""
    depth = min(d1.depth, d2.depth)
    levels = [FdAlgebra([a * b for a in d1.levels[n].dims for b in d2.levels[n].dims]) for n in range(depth)]
    steps = []
    for n in range(depth - 1):
        s1, s2 = d1.steps[n], d2.steps[n]
        steps.append(Morphism(levels[n], levels[n + 1], np.kron(s1.arr, s2.arr)))
    return BratteliDiagram(levels, steps)


def cantorize(d: BratteliDiagram) -> BratteliDiagram:
    """Level n carries 2**n copies of level n of d; copy c feeds copies 2c
    and 2c+1 of the next level."""
    if not d.is_left_invertible_sequence():
        raise MalformedInput("cantorize needs every step to be left-invertible")
    levels = [FdAlgebra(list(d.levels[n].dims) * 2**n) for n in range(d.depth)]
    steps = []
    for n, st in enumerate(d.steps):
        # copy c of level n+1 reads copy c // 2 of level n
        spread = np.kron(np.eye(2**n, dtype=np.int64), np.ones((2, 1), dtype=np.int64))
        steps.append(Morphism(levels[n], levels[n + 1], np.kron(spread, st.arr)))
    return BratteliDiagram(levels, steps)


def split_cover(d: BratteliDiagram) -> tuple[BratteliDiagram, frozenset[Node]]:
    """Left-invertible cover of any diagram, with the ideal whose quotient
    gives the diagram back.

    Level n is level n of d, then level n-1, down to level 0. The top block
    goes forward by d's step and also lands identically in the next slot;
    every lower block moves one slot down unchanged. The ideal is everything
    but the top block.
    """
    levels = []
    offsets = []
    for n in range(d.depth):
        dims, offs = [], []
        for k in range(n + 1):
            offs.append(len(dims))
            dims.extend(d.levels[n - k].dims)
        levels.append(FdAlgebra(dims))
        offsets.append(offs)
    steps = []
    for n, st in enumerate(d.steps):
        rows = np.zeros((len(levels[n + 1]), len(levels[n])), dtype=st.arr.dtype)
        rows[: len(d.levels[n + 1]), : len(d.levels[n])] = st.arr
        for k in range(n + 1):
            src, dst = offsets[n][k], offsets[n + 1][k + 1]
            for s in range(len(d.levels[n - k])):
                rows[dst + s, src + s] = 1
        steps.append(Morphism(levels[n], levels[n + 1], rows))
    cover = BratteliDiagram(levels, steps)
    ideal = frozenset(
        Node(n, s) for n in range(d.depth) for s in range(len(d.levels[n]), len(levels[n]))
    )
    return cover, ideal


def binary_diagram(depth: int, dim: int = 1) -> BratteliDiagram:
    """Every node of size dim splits into two; the diagram of C(2^N) for dim 1."""
    return cantorize(BratteliDiagram([[dim]] * depth, [[[1]]] * (depth - 1)))


def random_diagram(rng: np.random.Generator, depth: int, max_dim: int, max_width: int = 2) -> BratteliDiagram:
    """Random diagram whose steps are embeddings, not necessarily
    left-invertible: each next-level summand picks multiplicities that fit,
    and any column left empty is patched into a summand with room."""
    for _ in range(1000):
        levels = [sorted(rng.integers(1, max_dim + 1, size=rng.integers(1, max_width + 1)).tolist())]
        steps = []
        ok = True
        for _n in range(depth - 1):
            dom = levels[-1]
            cod = sorted(rng.integers(min(dom), max_dim + 1, size=rng.integers(1, max_width + 1)).tolist())
            rows = []
            for k in cod:
                row = [0] * len(dom)
                room = k
                for s in rng.permutation(len(dom)).tolist():
                    x = int(rng.integers(0, room // dom[s] + 1))
                    row[s] = x
                    room -= x * dom[s]
                rows.append(row)
            for s in range(len(dom)):
                if not any(r[s] for r in rows):
                    fits = [t for t, k in enumerate(cod) if k - sum(x * y for x, y in zip(rows[t], dom)) >= dom[s]]
                    if not fits:
                        ok = False
                        break
                    rows[fits[0]][s] += 1
            if not ok:
                break
            levels.append(cod)
            steps.append(rows)
        if ok:
            return BratteliDiagram(levels, steps)
    raise MalformedInput("could not draw a diagram with these bounds")


def same_shape(a: BratteliDiagram, b: BratteliDiagram) -> bool:
    return a.levels == b.levels and all(np.array_equal(x.arr, y.arr) for x, y in zip(a.steps, b.steps))


# ---------------------------------------------------------------- text formats


def to_dot(d: BratteliDiagram) -> str:
    out = ["digraph bratteli {", "  rankdir=LR;"]
    for n, a in enumerate(d.levels):
        for s, k in enumerate(a.dims):
            out.append(f'  n{n}_{s} [label="{k}"];')
    for n, st in enumerate(d.steps):
        ts, ss = np.nonzero(st.arr)
        for t, s in zip(ts.tolist(), ss.tolist()):
            out.append(f'  n{n}_{s} -> n{n + 1}_{t} [label="{st.arr[t, s]}"];')
    out.append("}")
    return "\n".join(out) + "\n"


def to_data(d: BratteliDiagram) -> dict:
    return {"levels": [list(a.dims) for a in d.levels], "steps": [textio.matrix_to_data(s.arr) for s in d.steps]}


def to_text(d: BratteliDiagram) -> str:
    return textio.dump(to_data(d))


def from_node(node) -> BratteliDiagram:
    m = textio.mapping(node, ("levels", "steps"))
    lnodes = textio.seq(m["levels"])
    levels = [textio.int_list(x, 1) for x in lnodes]
    if not levels:
        raise textio._at(m["levels"], "a diagram needs at least one level")
    snodes = textio.seq(m["steps"])
    if len(snodes) != len(levels) - 1:
        raise textio._at(m["steps"], f"{len(levels)} levels need {len(levels) - 1} steps, got {len(snodes)}")
    steps = []
    for n, sn in enumerate(snodes):
        mult = textio.matrix(sn, len(levels[n + 1]), len(levels[n]))
        f = Morphism(levels[n], levels[n + 1], mult)
        if not is_embedding(f):
            raise textio._at(sn, f"step {n} is not an embedding")
        steps.append(f)
    return BratteliDiagram(levels, steps)


def from_text(text: str) -> BratteliDiagram:
    return from_node(textio.parse(text))


def nodes_from_text(spec: str) -> list[Node]:
    """Parse 'n:s,n:s,...' into nodes."""
    out = []
    for part in spec.replace(" ", "").split(","):
        if not part:
            continue
        try:
            n, s = part.split(":")
            out.append(Node(int(n), int(s)))
        except ValueError:
            raise MalformedInput(f"cannot read node {part!r}; expected level:summand") from None
    return out

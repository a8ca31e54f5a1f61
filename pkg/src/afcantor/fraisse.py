"""Building and comparing Fraisse sequences of finite-dimensional algebras.

The engine keeps a fair queue of absorption requests and satisfies each one
exactly: a request is a left-invertible arrow out of some earlier level,
and absorbing it means appending a level through which the connecting map
from that earlier level factors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np
from sympy import factorint, primerange

from . import textio
from .amalgam import joint_embed, proper_amalgamate, weakly_initial
from .bratteli import BratteliDiagram, Node, is_essential, quotient, same_shape, split_cover
from .fdalg import (
    EpPair,
    FdAlgebra,
    MalformedInput,
    Morphism,
    ZERO,
    canonical_left_inverse,
    compose,
    compose_ep,
    ep_from_section,
    find_section,
    identity,
    identity_ep,
    matmul,
    is_embedding,
    is_left_invertible,
    is_unital,
)


# ---------------------------------------------------------------- categories


@dataclass(frozen=True)
class CategorySpec:
    """Which algebras and arrows are in play.

    `universe` is an explicit set of summand sizes, or None for every size
    up to `cap`. In simple mode objects are single matrix algebras and the
    universe lists the multipliers allowed along one step.
    """

    universe: frozenset[int] | None = None
    cap: int | None = None
    unital: bool = False
    simple_matrix_mode: bool = False

    def __post_init__(self):
        if self.universe is None:
            if self.cap is None or self.cap < 1:
                raise MalformedInput("an unbounded universe needs cap >= 1")
        else:
            if not self.universe or min(self.universe) < 1:
                raise MalformedInput("universe must be a nonempty set of positive integers")
            object.__setattr__(self, "universe", frozenset(self.universe))
        if self.simple_matrix_mode:
            object.__setattr__(self, "unital", True)

    @classmethod
    def parse(cls, text: str, unital: bool = False, simple: bool = False) -> "CategorySpec":
        text = text.strip()
        if text.startswith("all:"):
            try:
                cap = int(text[4:])
            except ValueError:
                raise MalformedInput(f"bad cap in {text!r}") from None
            return cls(None, cap, unital, simple)
        try:
            dims = frozenset(int(x) for x in text.replace("{", "").replace("}", "").split(",") if x.strip())
        except ValueError:
            raise MalformedInput(f"cannot read universe {text!r}") from None
        return cls(dims, None, unital, simple)

    def describe(self) -> str:
        if self.universe is None:
            return f"all:{self.cap}"
        return ",".join(str(k) for k in sorted(self.universe))

    def dims(self, cap: int | None = None) -> list[int]:
        if self.universe is not None:
            return sorted(self.universe)
        return list(range(1, (cap or self.cap) + 1))


def _multisets(dims: Sequence[int], size: int) -> Iterator[tuple[int, ...]]:
    """Size-`size` multisets from dims, each sorted descending."""
    for combo in itertools.combinations_with_replacement(sorted(dims, reverse=True), size):
        yield combo


def enumerate_objects(spec: CategorySpec, size_bound: int) -> list[FdAlgebra]:
    if size_bound < 1:
        raise MalformedInput("size bound must be >= 1")
    dims = spec.dims()
    if spec.simple_matrix_mode:
        return [FdAlgebra([k]) for k in dims]
    out = []
    for size in range(1, size_bound + 1):
        out.extend(FdAlgebra(ms) for ms in sorted(_multisets(dims, size)))
    return out


def _row_vectors(dims: Sequence[int], room: int, exact: bool) -> Iterator[tuple[int, ...]]:
    """All y >= 0 with sum y[i]*dims[i] <= room (== room if exact), lexicographic."""
    r = len(dims)

    def rec(i, left):
        if i == r:
            if not exact or left == 0:
                yield ()
            return
        for x in range(left // dims[i] + 1):
            for rest in rec(i + 1, left - x * dims[i]):
                yield (x,) + rest

    return rec(0, room)


def _arrow_key(m: Morphism):
    flat = [x for row in m.mult for x in row]
    return (sum(flat), tuple(-x for x in flat))


def enumerate_arrows(spec: CategorySpec, a: FdAlgebra, cod_size_bound: int) -> list[Morphism]:
    """All category arrows out of a into enumerated objects, in a fixed order."""
    out = []
    for b in enumerate_objects(spec, cod_size_bound):
        if spec.simple_matrix_mode:
            if len(a) == 1 and b.dims[0] % a.dims[0] == 0:
                out.append(Morphism(a, b, [[b.dims[0] // a.dims[0]]]))
            continue
        if len(b) < len(a):
            continue
        rows = [list(_row_vectors(a.dims, k, spec.unital)) for k in b.dims]
        found = []
        for choice in itertools.product(*rows):
            m = Morphism(a, b, choice)
            if is_embedding(m) and is_left_invertible(m):
                found.append(m)
        out.extend(sorted(found, key=_arrow_key))
    return out


# ---------------------------------------------------------------- absorption search


def _kuhn(need: list[int], options: dict[int, list[int]]) -> bool:
    """Can every item in need get its own row from options[item]?"""
    owner: dict[int, int] = {}

    def grab(e, seen):
        for t in options.get(e, ()):
            if t in seen:
                continue
            seen.add(t)
            if t not in owner or grab(owner[t], seen):
                owner[t] = e
                return True
        return False

    return all(grab(e, set()) for e in need)


def _row_solutions(gamma: Morphism, sigma, target: Sequence[int], room: int, exact: bool) -> Iterator[tuple[int, ...]]:
    """Rows y with y . gamma = target and load <= room (== room if exact).

    The coordinates on gamma's section are forced once the others are
    chosen, so only the free coordinates are enumerated, in lexicographic
    order; that order is the canonical order of solutions.
    """
    e_dims = gamma.cod.dims
    d_dims = gamma.dom.dims
    free = [e for e in range(len(e_dims)) if e not in set(sigma)]
    base = sum(p * k for p, k in zip(target, d_dims))
    slack = {e: e_dims[e] - gamma.row_load(e) for e in free}
    spare = room - base
    if spare < 0:
        return
    g = gamma.mult

    def rec(idx, left, rest):
        if idx == len(free):
            if exact and left != 0:
                return
            y = [0] * len(e_dims)
            for i, e in enumerate(sigma):
                y[e] = rest[i]
            yield y
            return
        e = free[idx]
        top = left // slack[e] if slack[e] else None
        for i, c in enumerate(g[e]):
            if c:
                b = rest[i] // c
                top = b if top is None else min(top, b)
        if top is None:
            top = 0  # zero row with no slack cannot occur for positive dims
        for x in range(top + 1):
            nrest = [r - x * c for r, c in zip(rest, g[e])]
            for y in rec(idx + 1, left - x * slack[e], nrest):
                y[e] = x
                yield y

    for y in rec(0, spare, list(target)):
        yield tuple(y)


def _unit_rows(gamma: Morphism, target: Morphism) -> dict[int, list[int]]:
    """For each summand e of gamma's codomain, the rows t of target that
    could hold a lone copy of e: same size and target row equal to gamma's."""
    out = {}
    t_dims = np.array(target.cod.dims, dtype=object)
    for e, k in enumerate(gamma.cod.dims):
        same = t_dims == k
        if len(gamma.dom):
            same &= (target.arr == gamma.arr[e]).all(axis=1)
        out[e] = np.flatnonzero(same).tolist()
    return out


def _matching(need: list[int], options: dict[int, list[int]], after: int = -1) -> bool:
    return _kuhn(need, {e: [t for t in options.get(e, ()) if t > after] for e in need})


def solve_factor(gamma: Morphism, target: Morphism, unital: bool = False) -> Morphism | None:
    """First left-invertible delta with delta o gamma = target, or None.

    Rows are settled top to bottom. A row that can hold a lone copy of a
    still-uncovered summand takes the smallest such summand, provided the
    rest can still be covered further down; every other row takes its first
    solution in lexicographic order. So lone copies sit as early as
    possible, which in an engine diagram means on the oldest summands.
    """
    if gamma.dom != target.dom:
        raise MalformedInput("gamma and target must share a domain")
    sigma = find_section(gamma)
    if sigma is None:
        raise MalformedInput("gamma must be left-invertible")
    units = _unit_rows(gamma, target)
    need = list(range(len(gamma.cod)))
    if not _matching(need, units):
        return None
    by_row: dict[int, list[int]] = {}
    for e, ts in units.items():
        for t in ts:
            by_row.setdefault(t, []).append(e)
    a_dims = target.cod.dims
    rows = []
    covered: set[int] = set()
    for t in range(len(a_dims)):
        pick = None
        for e in by_row.get(t, ()):
            if e in covered:
                continue
            rest = [x for x in need if x not in covered and x != e]
            if _matching(rest, units, t):
                pick = tuple(1 if x == e else 0 for x in need)
                covered.add(e)
                break
        if pick is None:
            pick = next(_row_solutions(gamma, sigma, target.row(t), a_dims[t], unital), None)
            if pick is None:
                return None
        rows.append(pick)
    delta = Morphism(gamma.cod, target.cod, rows)
    return delta if is_left_invertible(delta) else None


def absorb_search(
    d: BratteliDiagram,
    n: int,
    gamma: Morphism,
    max_level: int | None = None,
    min_level: int | None = None,
    unital: bool = False,
) -> tuple[int, Morphism] | None:
    """Least level m (from min_level, default n) up to max_level with a
    left-invertible delta satisfying delta o gamma = path map n -> m."""
    if gamma.dom != d.levels[n]:
        raise MalformedInput(f"gamma starts at {gamma.dom}, level {n} is {d.levels[n]}")
    if not is_left_invertible(gamma):
        raise MalformedInput("gamma must be left-invertible")
    top = d.depth - 1 if max_level is None else min(max_level, d.depth - 1)
    for m in range(n if min_level is None else max(n, min_level), top + 1):
        delta = solve_factor(gamma, d.composed(n, m), unital)
        if delta is not None:
            return m, delta
    return None


def first_embedding(a: FdAlgebra, d: BratteliDiagram, min_level: int = 0, max_level: int | None = None, unital: bool = False):
    """First level m >= min_level with a left-invertible a -> level m."""
    top = d.depth - 1 if max_level is None else min(max_level, d.depth - 1)
    empty = Morphism(ZERO, a, [() for _ in a.dims])
    for m in range(min_level, top + 1):
        target = Morphism(ZERO, d.levels[m], [() for _ in d.levels[m].dims])
        delta = solve_factor(empty, target, unital)
        if delta is not None and (not unital or is_unital(delta)):
            return m, delta
    return None


# ---------------------------------------------------------------- engine


@dataclass(frozen=True)
class Request:
    stage: int
    arrow: Morphism


@dataclass(frozen=True)
class LogRecord:
    request: Request
    level: int
    delta: Morphism


@dataclass
class EngineLog:
    spec: CategorySpec
    schedule: str
    records: list[LogRecord] = field(default_factory=list)

    def as_data(self) -> dict:
        return {
            "universe": self.spec.describe(),
            "unital": self.spec.unital,
            "simple_matrix_mode": self.spec.simple_matrix_mode,
            "schedule": self.schedule,
            "records": [
                {
                    "stage": r.request.stage,
                    "arrow": textio.morphism_to_data(r.request.arrow),
                    "level": r.level,
                    "delta": textio.morphism_to_data(r.delta),
                }
                for r in self.records
            ],
        }


def log_from_node(node) -> EngineLog:
    m = textio.mapping(node, ("universe", "unital", "simple_matrix_mode", "schedule", "records"))
    spec = CategorySpec.parse(textio.string(m["universe"]), textio.boolean(m["unital"]), textio.boolean(m["simple_matrix_mode"]))
    log = EngineLog(spec, textio.string(m["schedule"]))
    for rn in textio.seq(m["records"]):
        r = textio.mapping(rn, ("stage", "arrow", "level", "delta"))
        req = Request(textio.integer(r["stage"], 0), textio.morphism_from_node(r["arrow"]))
        log.records.append(LogRecord(req, textio.integer(r["level"], 0), textio.morphism_from_node(r["delta"])))
    return log


SCHEDULES = ("stage-first", "stage-last")

# Request order. A request out of stage s that adds summands (c_e, row_e)
# costs _stage_cost(s) + BLOCK_W*(#summands - 1) plus, per summand,
# _size_cost(c_e) + sum_u row_e[u]*_index_cost(u). Summands are numbered in
# order of creation, so requests about old summands are cheap, and a new
# size c+1 costs more than any one-summand request of size c out of the
# first three levels. Each cost class is finite, so taking classes in
# increasing order is fair.
STAGE_W = 20
SIZE_W = 2
BLOCK_W = 100
FREE_STAGES = 3


def _stage_cost(s: int) -> int:
    return STAGE_W * max(0, s - FREE_STAGES + 1)


def _size_cost(c: int) -> int:
    return SIZE_W * c * c


def _index_cost(u: int) -> int:
    return 2**u


def _weighted_rows(dims: Sequence[int], room: int, budget: int, exact: bool) -> Iterator[tuple[tuple[int, ...], int]]:
    """(row, weight) with sum row[u]*dims[u] <= room (== if exact) and
    weight = sum row[u]*_index_cost(u) <= budget."""
    r = len(dims)

    def rec(u, left, wleft):
        if u == r or _index_cost(u) > wleft:
            if not exact or left == 0:
                yield (0,) * (r - u), 0
            return
        cu = _index_cost(u)
        for x in range(min(left // dims[u], wleft // cu) + 1):
            for rest, w in rec(u + 1, left - x * dims[u], wleft - x * cu):
                yield (x,) + rest, w + x * cu

    return rec(0, room, budget)


def _summand_types(spec: CategorySpec, dom: FdAlgebra, budget: int):
    """(weight, size, row) for one new summand, sorted."""
    out = []
    for rank, c in enumerate(spec.dims(max(1, int((budget / SIZE_W) ** 0.5) + 1)), 1):
        base = _size_cost(rank)
        if base > budget:
            break
        for row, w in _weighted_rows(dom.dims, c, budget - base, spec.unital):
            out.append((base + w, c, row))
    out.sort()
    return out


def _class_items(spec: CategorySpec, dom: FdAlgebra, budget: int):
    """All requests out of dom whose summand part costs exactly `budget`."""
    out = []
    b = 1
    while BLOCK_W * (b - 1) + _size_cost(1) * b <= budget:
        rest = budget - BLOCK_W * (b - 1)
        types = _summand_types(spec, dom, rest)

        def rec(start, left, k, acc):
            if k == 0:
                if left == 0:
                    yield tuple(acc)
                return
            for idx in range(start, len(types)):
                w = types[idx][0]
                if w * k > left:
                    break
                acc.append(types[idx])
                yield from rec(idx, left - w, k - 1, acc)
                acc.pop()

        for combo in rec(0, rest, b, []):
            out.append((tuple(t[1] for t in combo), tuple(t[2] for t in combo)))
        b += 1
    return out


def _normal_arrow(dom: FdAlgebra, xs, mrows) -> Morphism:
    p = len(dom)
    arr = np.zeros((p + len(xs), p), dtype=np.int64)
    arr[:p] = np.eye(p, dtype=np.int64)
    for e, row in enumerate(mrows):
        arr[p + e] = row
    return Morphism(dom, FdAlgebra(list(dom.dims) + list(xs)), arr)


class Engine:
    def __init__(self, spec: CategorySpec, schedule: str = "stage-first"):
        if schedule not in SCHEDULES:
            raise MalformedInput(f"unknown schedule {schedule!r}; choose from {SCHEDULES}")
        self.spec, self.schedule = spec, schedule
        if spec.simple_matrix_mode:
            start = FdAlgebra([1])
        elif spec.unital:
            start = weakly_initial(spec.dims())
        else:
            start = ZERO
        self.levels: list[FdAlgebra] = [start]
        self.steps: list[Morphism] = []
        self.log = EngineLog(spec, schedule)
        self.pending: list = []
        self.buffer: list = []
        self.order = self._simple_order() if spec.simple_matrix_mode else self._classes()
        self.current_class = 0
        self.taken = 0
        self._paths: dict[int, np.ndarray] = {}

    # -- bookkeeping

    def cap(self) -> int:
        if self.spec.universe is not None:
            return max(self.spec.universe)
        return self.spec.cap + self.taken // 4

    def path(self, n: int, m: int) -> Morphism:
        out = identity(self.levels[n])
        for st in self.steps[n:m]:
            out = compose(st, out)
        return out

    def _top_path(self, n: int) -> np.ndarray:
        """Path matrix from level n to the current top, kept up to date."""
        top = len(self.levels) - 1
        if n not in self._paths:
            self._paths[n] = self.path(n, top).arr
        return self._paths[n]

    def ep_path(self, n: int) -> EpPair:
        fwd = Morphism(self.levels[n], self.levels[-1], self._top_path(n))
        if self.spec.simple_matrix_mode:
            return ep_from_section(fwd, find_section(fwd))
        # every step keeps the old summands first, each copied once
        return ep_from_section(fwd, range(len(self.levels[n])))

    def diagram(self) -> BratteliDiagram:
        return BratteliDiagram(self.levels, self.steps)

    # -- general categories

    def _classes(self):
        for k in itertools.count(1):
            stages = [s for s in range(k // STAGE_W + FREE_STAGES) if _stage_cost(s) <= k]
            if self.schedule == "stage-last":
                stages.reverse()
            for s in stages:
                yield k, s

    def _ready(self, item) -> bool:
        s, xs, _ = item
        return s < len(self.levels) and (self.spec.universe is not None or max(xs) <= self.cap())

    def _next_request(self):
        # overdue work first: classes whose stage has appeared since, then
        # requests that were waiting for the cap to grow
        for idx, entry in enumerate(self.pending):
            if entry[0] == "class":
                _, k, s = entry
                if s < len(self.levels):
                    items = _class_items(self.spec, self.levels[s], k - _stage_cost(s))
                    self.pending[idx : idx + 1] = [("item", (s, xs, rows)) for xs, rows in items]
                    return self._next_request()
            elif self._ready(entry[1]):
                self.pending.pop(idx)
                return entry[1]
        while True:
            while self.buffer:
                item = self.buffer.pop(0)
                if self._ready(item):
                    return item
                self.pending.append(("item", item))
            k, s = next(self.order)
            self.current_class = k
            if s >= len(self.levels):
                self.pending.append(("class", k, s))
            else:
                self.buffer = [(s, xs, rows) for xs, rows in _class_items(self.spec, self.levels[s], k - _stage_cost(s))]

    def _absorb(self, n: int, xs, mrows):
        """Absorb A_n -> A_n + X with matrix [I; M].

        Amalgamating it with the path from level n to the top N gives
        A_N + X: the old summands keep their places and the new summands
        read M off the copy of A_n that sits first in A_N.
        """
        gamma = _normal_arrow(self.levels[n], xs, mrows)
        top = len(self.levels) - 1
        a_top = self.levels[top]
        rt, rn, b = len(a_top), len(self.levels[n]), len(xs)
        new = FdAlgebra(list(a_top.dims) + list(xs))
        step = np.zeros((rt + b, rt), dtype=np.int64)
        step[:rt] = np.eye(rt, dtype=np.int64)
        if b and rn:
            step[rt:, :rn] = np.array(mrows, dtype=np.int64).reshape(b, rn)
        step_m = Morphism(a_top, new, step)
        p = self._top_path(n)
        delta = np.zeros((rt + b, rn + b), dtype=p.dtype)
        delta[:rt, :rn] = p
        delta[rt:, rn:] = np.eye(b, dtype=np.int64)
        delta_m = Morphism(gamma.cod, new, delta)
        self.levels.append(new)
        self.steps.append(step_m)
        for key in list(self._paths):
            self._paths[key] = matmul(step_m.arr, self._paths[key])
        if not np.array_equal(matmul(delta_m.arr, gamma.arr), self._top_path(n)):
            raise AssertionError("absorption failed to commute")
        self.log.records.append(LogRecord(Request(n, gamma), top + 1, delta_m))

    # -- simple matrix algebras

    def _multipliers(self, cap: int) -> list[int]:
        if self.spec.universe is not None:
            return sorted(k for k in self.spec.universe if k >= 2)
        return list(primerange(2, cap + 1))

    def _simple_order(self):
        for s in itertools.count():
            for n in range(s + 1):
                yield n, s - n

    def _simple_step(self):
        while True:
            for k, (n, j) in enumerate(self.pending):
                mults = self._multipliers(self.cap())
                if n < len(self.levels) and j < len(mults):
                    self.pending.pop(k)
                    break
            else:
                n, j = next(self.order)
                mults = self._multipliers(self.cap())
                if n >= len(self.levels) or j >= len(mults):
                    if self.spec.universe is None or j < len(mults):
                        self.pending.append((n, j))
                    continue
            c = mults[j]
            kn = self.levels[n].dims[0]
            gamma = Morphism(self.levels[n], FdAlgebra([kn * c]), [[c]])
            top = len(self.levels) - 1
            ratio = self.levels[top].dims[0] // kn
            if ratio % c == 0:
                # already absorbed by the current top level
                delta = Morphism(gamma.cod, self.levels[top], [[ratio // c]])
                self.log.records.append(LogRecord(Request(n, gamma), top, delta))
                continue
            kt = self.levels[top].dims[0]
            new = FdAlgebra([kt * c // _gcd(c, ratio)])
            self.levels.append(new)
            self.steps.append(Morphism(self.levels[top], new, [[new.dims[0] // kt]]))
            delta = Morphism(gamma.cod, new, [[new.dims[0] // (kn * c)]])
            if compose(delta, gamma) != self.path(n, top + 1):
                raise AssertionError("absorption failed to commute")
            self.log.records.append(LogRecord(Request(n, gamma), top + 1, delta))
            return

    def step(self):
        if self.spec.simple_matrix_mode:
            self._simple_step()
        else:
            self._absorb(*self._next_request())
        self.taken += 1


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def build_fraisse(spec: CategorySpec, steps: int, schedule: str = "stage-first") -> tuple[BratteliDiagram, EngineLog]:
    """Run the engine for `steps` absorptions.

    Requests are arrows A_n -> A_n + X whose matrix is the identity on A_n
    stacked on a homomorphism into X; every left-invertible arrow out of A_n
    is one of these after renumbering its codomain. They are taken in cost
    classes (see STAGE_W and friends); within a class by stage, ascending
    for "stage-first" and descending for "stage-last".
    """
    if steps < 1:
        raise MalformedInput("steps must be >= 1")
    eng = Engine(spec, schedule)
    for _ in range(steps):
        eng.step()
    return eng.diagram(), eng.log


def verify_log(d: BratteliDiagram, log: EngineLog) -> list[int]:
    """Indices of records whose delta o arrow differs from the path map."""
    bad = []
    for k, r in enumerate(log.records):
        n, m = r.request.stage, r.level
        if m >= d.depth or compose(r.delta, r.request.arrow) != d.composed(n, m):
            bad.append(k)
    return bad


def replay_log(d: BratteliDiagram, log: EngineLog) -> list[int]:
    """Indices of records for which absorb_search, run afresh on d up to the
    recorded level, finds no delta with delta o arrow equal to the path map."""
    bad = []
    for k, r in enumerate(log.records):
        n = r.request.stage
        found = absorb_search(d, n, r.request.arrow, max_level=r.level, unital=log.spec.unital)
        if found is None or compose(found[1], r.request.arrow) != d.composed(n, found[0]):
            bad.append(k)
    return bad


# ---------------------------------------------------------------- intertwining


@dataclass
class ChainLink:
    source: str  # "A" or "B"
    src_level: int
    dst_level: int
    arrow: Morphism


def intertwine(da: BratteliDiagram, db: BratteliDiagram, rounds: int, max_level: int | None = None, unital: bool = False):
    """Alternating left-invertible maps A_n1 -> B_m1 -> A_n2 -> ... with
    every triangle commuting exactly; levels strictly increase on each side
    after the first map. Returns None if a search runs out of levels."""
    if not (da.is_left_invertible_sequence() and db.is_left_invertible_sequence()):
        raise MalformedInput("both diagrams must have left-invertible steps")
    first = first_embedding(da.levels[0], db, 0, max_level, unital)
    if first is None:
        return None
    chain = [ChainLink("A", 0, first[0], first[1])]
    while len(chain) < rounds:
        last = chain[-1]
        there = da if last.source == "A" else db
        found = absorb_search(there, last.src_level, last.arrow, max_level, min_level=last.src_level + 1, unital=unital)
        if found is None:
            return None
        m, delta = found
        chain.append(ChainLink("B" if last.source == "A" else "A", last.dst_level, m, delta))
    return chain


def check_chain(da: BratteliDiagram, db: BratteliDiagram, chain: list[ChainLink]) -> bool:
    for x, y in zip(chain, chain[1:]):
        home = da if x.source == "A" else db
        if compose(y.arrow, x.arrow) != home.composed(x.src_level, y.dst_level):
            return False
    return all(is_left_invertible(l.arrow) for l in chain)


# ---------------------------------------------------------------- sections


@dataclass
class SectionRound:
    b_level: int
    u_level: int
    alpha: Morphism  # B_i -> U_{n_i}
    beta: Morphism  # U_{n_i} -> B_i


def ep_section(du: BratteliDiagram, db: BratteliDiagram, rounds: int, max_level: int | None = None):
    """Levelwise EP-pairs from db into du that commute with both sequences.

    Each round amalgamates the previous pair with the next step of db and
    pushes the amalgam back into du by absorption.
    """
    if not (du.is_left_invertible_sequence() and db.is_left_invertible_sequence()):
        raise MalformedInput("both diagrams must have left-invertible steps")
    rounds = min(rounds, db.depth)
    _, g_ep, m_ep = joint_embed(du.levels[0], db.levels[0])
    found = absorb_search(du, 0, g_ep.fwd, max_level)
    if found is None:
        return None
    n_i, delta = found
    d_ep = canonical_left_inverse(delta)
    pair = compose_ep(d_ep, m_ep)
    out = [SectionRound(0, n_i, pair.fwd, pair.back)]
    for i in range(1, rounds):
        step_ep = canonical_left_inverse(db.steps[i - 1])
        _, g_ep, m_ep = proper_amalgamate(pair, step_ep)
        found = absorb_search(du, n_i, g_ep.fwd, max_level)
        if found is None:
            return None
        n_i, delta = found
        pair = compose_ep(canonical_left_inverse(delta), m_ep)
        out.append(SectionRound(i, n_i, pair.fwd, pair.back))
    return out


def check_section(du: BratteliDiagram, db: BratteliDiagram, rounds: list[SectionRound]) -> dict[str, bool]:
    ok_inv = all(compose(r.beta, r.alpha) == identity(db.levels[r.b_level]) for r in rounds)
    ok_fwd = ok_back = True
    for r, s in zip(rounds, rounds[1:]):
        phi = du.composed(r.u_level, s.u_level)
        psi = db.composed(r.b_level, s.b_level)
        ok_fwd &= compose(phi, r.alpha) == compose(s.alpha, psi)
        ok_back &= compose(psi, r.beta) == compose(s.beta, phi)
    return {"beta after alpha is the identity": ok_inv, "alpha commutes": ok_fwd, "beta commutes": ok_back}


@dataclass
class SurjectionWitness:
    cover: BratteliDiagram
    ideal: frozenset
    section: list[SectionRound]


def universal_surjection_witness(du: BratteliDiagram, db: BratteliDiagram, rounds: int, max_level: int | None = None):
    """Split-cover db, then find a section of the cover inside du. Quotient
    by the ideal after the section's left inverse maps du onto db."""
    cover, ideal = split_cover(db)
    sec = ep_section(du, cover, rounds, max_level)
    if sec is None:
        return None
    return SurjectionWitness(cover, ideal, sec)


# ---------------------------------------------------------------- UHF


def supernatural(d: BratteliDiagram, prime_bound: int) -> dict[int, tuple[int, bool]]:
    """prime -> (largest exponent dividing a level size, grew at last level)."""
    if any(len(a) != 1 for a in d.levels):
        raise MalformedInput("supernatural numbers need one summand per level")
    exps = [factorint(a.dims[0]) for a in d.levels]
    out = {}
    for p in primerange(2, prime_bound + 1):
        seq = [e.get(p, 0) for e in exps]
        top = max(seq)
        if top == 0:
            continue
        grew = len(seq) > 1 and seq[-1] > max(seq[:-1])
        out[p] = (top, grew)
    return out

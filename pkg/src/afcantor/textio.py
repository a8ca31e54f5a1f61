"""YAML reading and writing for morphisms, EP-pairs, diagrams, presentations
and engine logs.

Reading works on the composed node tree rather than the loaded Python
objects so that every complaint can point at a line and column.
"""

from __future__ import annotations

from typing import Any

import numpy as np
import yaml

_Loader = getattr(yaml, "CSafeLoader", yaml.SafeLoader)
_Dumper = getattr(yaml, "CSafeDumper", yaml.SafeDumper)

from .fdalg import EpPair, FdAlgebra, MalformedInput, Morphism, canonical_left_inverse, ep_from_section


class FormatError(MalformedInput):
    def __init__(self, msg: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + msg)


def _at(node, msg: str) -> FormatError:
    mark = node.start_mark
    return FormatError(msg, mark.line + 1, mark.column + 1)


def parse(text: str):
    try:
        node = yaml.compose(text, Loader=_Loader)
    except yaml.MarkedYAMLError as err:
        mark = err.problem_mark or err.context_mark
        if mark is None:
            raise FormatError(str(err)) from None
        raise FormatError(err.problem or str(err), mark.line + 1, mark.column + 1) from None
    if node is None:
        raise FormatError("empty document", 1, 1)
    return node


def mapping(node, required: tuple[str, ...], optional: tuple[str, ...] = ()) -> dict[str, Any]:
    if not isinstance(node, yaml.MappingNode):
        raise _at(node, "expected a mapping")
    out = {}
    for k, v in node.value:
        if not isinstance(k, yaml.ScalarNode):
            raise _at(k, "mapping keys must be plain strings")
        if k.value not in required and k.value not in optional:
            raise _at(k, f"unexpected key {k.value!r}")
        if k.value in out:
            raise _at(k, f"duplicate key {k.value!r}")
        out[k.value] = v
    for key in required:
        if key not in out:
            raise _at(node, f"missing key {key!r}")
    return out


def integer(node, minimum: int | None = None) -> int:
    if not isinstance(node, yaml.ScalarNode) or node.tag != "tag:yaml.org,2002:int":
        raise _at(node, "expected an integer")
    try:
        val = int(node.value.replace("_", ""), 10)
    except ValueError:
        raise _at(node, f"expected a decimal integer, got {node.value!r}") from None
    if minimum is not None and val < minimum:
        raise _at(node, f"expected an integer >= {minimum}, got {val}")
    return val


def boolean(node) -> bool:
    if not isinstance(node, yaml.ScalarNode) or node.tag != "tag:yaml.org,2002:bool":
        raise _at(node, "expected true or false")
    return node.value.lower() in ("true", "yes", "on")


def string(node) -> str:
    if not isinstance(node, yaml.ScalarNode):
        raise _at(node, "expected a scalar")
    return node.value


def seq(node) -> list:
    if not isinstance(node, yaml.SequenceNode):
        raise _at(node, "expected a list")
    return list(node.value)


def int_list(node, minimum: int | None = None) -> list[int]:
    return [integer(x, minimum) for x in seq(node)]


# matrices with more entries than this are written as nonzero triples
SPARSE_OVER = 4096


def matrix_to_data(a):
    a = np.asarray(a)
    if a.size <= SPARSE_OVER:
        return a.tolist()
    rs, cs = np.nonzero(a)
    return {"entries": [[r, c, int(a[r, c])] for r, c in zip(rs.tolist(), cs.tolist())]}


def _sparse(node, rows: int | None, cols: int | None):
    m = mapping(node, ("entries",))
    if rows is None or cols is None:
        raise _at(node, "a sparse matrix needs a known shape")
    triples = []
    seen = set()
    for en in seq(m["entries"]):
        e = int_list(en, 0)
        if len(e) != 3:
            raise _at(en, "expected [row, column, value]")
        r, c, x = e
        if r >= rows or c >= cols:
            raise _at(en, f"entry ({r}, {c}) outside a {rows} x {cols} matrix")
        if (r, c) in seen:
            raise _at(en, f"entry ({r}, {c}) given twice")
        seen.add((r, c))
        triples.append((r, c, x))
    big = max((x for _, _, x in triples), default=0) >= 2**62
    out = np.zeros((rows, cols), dtype=object if big else np.int64)
    for r, c, x in triples:
        out[r, c] = x
    return out


def matrix(node, rows: int | None = None, cols: int | None = None):
    """Dense list of rows, or a mapping {entries: [[row, col, value], ...]}."""
    if isinstance(node, yaml.MappingNode):
        return _sparse(node, rows, cols)
    out = [int_list(r, 0) for r in seq(node)]
    if rows is not None and len(out) != rows:
        raise _at(node, f"expected {rows} rows, got {len(out)}")
    if cols is not None:
        for r, rn in zip(out, node.value):
            if len(r) != cols:
                raise _at(rn, f"expected {cols} entries, got {len(r)}")
    return out


def morphism_from_node(node) -> Morphism:
    m = mapping(node, ("dom", "cod", "mult"))
    dom = int_list(m["dom"], 1)
    cod = int_list(m["cod"], 1)
    mult = matrix(m["mult"], len(cod), len(dom))
    return Morphism(FdAlgebra(dom), FdAlgebra(cod), mult)


def morphism_to_data(f: Morphism) -> dict:
    return {"dom": list(f.dom.dims), "cod": list(f.cod.dims), "mult": matrix_to_data(f.arr)}


def load_morphism(text: str) -> Morphism:
    return morphism_from_node(parse(text))


def dump(data) -> str:
    return yaml.dump(data, Dumper=_Dumper, sort_keys=False, default_flow_style=None, width=10**6)


def dump_morphism(f: Morphism) -> str:
    return dump(morphism_to_data(f))


def ep_from_node(node) -> EpPair:
    """An embedding with an optional `section` (for each domain summand, the
    codomain summand holding its lone copy). Without one, the first lone
    copy of each summand is used."""
    m = mapping(node, ("dom", "cod", "mult"), ("section",))
    dom = int_list(m["dom"], 1)
    cod = int_list(m["cod"], 1)
    f = Morphism(FdAlgebra(dom), FdAlgebra(cod), matrix(m["mult"], len(cod), len(dom)))
    if "section" not in m:
        try:
            return canonical_left_inverse(f)
        except ValueError as err:
            raise _at(m["mult"], str(err)) from None
    sigma = int_list(m["section"], 0)
    if len(sigma) != len(dom):
        raise _at(m["section"], f"section needs {len(dom)} entries, got {len(sigma)}")
    try:
        ep = ep_from_section(f, sigma)
        ep.check()
        return ep
    except (IndexError, MalformedInput) as err:
        raise _at(m["section"], str(err)) from None


def ep_to_data(ep: EpPair) -> dict:
    out = morphism_to_data(ep.fwd)
    out["section"] = list(ep.section)
    return out

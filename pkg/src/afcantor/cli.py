"""Command-line front end. Every command reads and writes the YAML formats
of the library modules and is deterministic.

Exit codes: 0 success, 1 malformed input, 2 a property fails or a witness
is missing, 3 a search ran out of levels.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import bratteli as B
from . import fraisse as F
from . import k0 as K
from . import textio
from .amalgam import amalgam_identities, proper_amalgamate
from .fdalg import MalformedInput, NotLeftInvertible

OK, MALFORMED, VIOLATION, EXHAUSTED = 0, 1, 2, 3


class Exit(Exception):
    def __init__(self, code: int):
        self.code = code


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as err:
        raise MalformedInput(f"cannot read {path}: {err.strerror}") from None


def _diagram(path: str) -> B.BratteliDiagram:
    return B.from_text(_read(path))


def _emit(text: str, out: str | None = None) -> None:
    if out is None or out == "-":
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text)


def _ints(text: str | None) -> list[int] | None:
    if text is None:
        return None
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise MalformedInput(f"expected comma-separated integers, got {text!r}") from None


def _dims(text: str | None) -> list[int] | None:
    """'1,2,5' or 'a-b' ranges mixed with commas."""
    if text is None:
        return None
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-", 1)
            try:
                out.extend(range(int(lo), int(hi) + 1))
            except ValueError:
                raise MalformedInput(f"bad range {part!r}") from None
        elif part:
            out.extend(_ints(part))
    return out


def _nodes_data(nodes) -> list[list[int]]:
    return [[n, s] for n, s in sorted(nodes)]


@click.group()
def main():
    """Finite-dimensional algebras, Bratteli diagrams and their universal limits."""


@main.command()
@click.option("--universe", required=True, help="Sizes like 1,2,5 or all:CAP.")
@click.option("--unital", is_flag=True)
@click.option("--uhf", is_flag=True, help="Single matrix algebras only.")
@click.option("--steps", required=True, type=int)
@click.option("--schedule", type=click.Choice(F.SCHEDULES), default=F.SCHEDULES[0], show_default=True)
@click.option("-o", "--output", default=None, help="Diagram file; the log goes next to it as <file>.log.yaml.")
@click.option("--log", "log_path", default=None, help="Where to write the engine log.")
def gen(universe, unital, uhf, steps, schedule, output, log_path):
    """Run the absorption engine and write the diagram."""
    spec = F.CategorySpec.parse(universe, unital, uhf)
    d, log = F.build_fraisse(spec, steps, schedule)
    _emit(B.to_text(d), output)
    if log_path is None and output not in (None, "-"):
        log_path = output + ".log.yaml"
    if log_path is not None:
        Path(log_path).write_text(textio.dump(log.as_data()))


@main.command()
@click.argument("diagram", default="-")
@click.option("--dims", default=None, help="Universe for D3, e.g. 1-6 or 2,3,5.")
@click.option("--unital", is_flag=True)
@click.option("--levels", default=None, help="Only enumerate D1/D2 from these levels.")
@click.option("--max-support", type=int, default=None)
@click.option("--witnessed", is_flag=True, help="Also list witnessed instances.")
def check(diagram, dims, unital, levels, max_support, witnessed):
    """Certify the Cantor conditions at the depth of the prefix."""
    d = _diagram(diagram)
    rep = B.check_cantor(d, _dims(dims), unital, _ints(levels), max_support)
    _emit(textio.dump(rep.as_data(witnessed)))
    raise Exit(OK if rep.verdict == "certified-at-depth" else VIOLATION)


@main.command()
@click.argument("ep1")
@click.argument("ep2")
@click.option("--unital", is_flag=True)
def amalgamate(ep1, ep2, unital):
    """Amalgamate two EP-pairs with a common domain."""
    a = textio.ep_from_node(textio.parse(_read(ep1)))
    b = textio.ep_from_node(textio.parse(_read(ep2)))
    g, out1, out2 = proper_amalgamate(a, b, unital)
    ids = amalgam_identities(a, b, out1, out2)
    _emit(textio.dump({
        "amalgam": list(g.dims),
        "first": textio.ep_to_data(out1),
        "second": textio.ep_to_data(out2),
        "identities": ids,
    }))
    raise Exit(OK if all(ids.values()) else VIOLATION)


@main.command()
@click.argument("d1")
@click.argument("d2")
@click.option("-o", "--output", default=None)
def tensor(d1, d2, output):
    """Levelwise tensor product."""
    _emit(B.to_text(B.tensor(_diagram(d1), _diagram(d2))), output)


@main.command()
@click.argument("diagram")
@click.option("-o", "--output", default=None)
def cantorize(diagram, output):
    """Tensor with the Cantor-set diagram."""
    _emit(B.to_text(B.cantorize(_diagram(diagram))), output)


@main.command()
@click.argument("diagram")
@click.option("--ideal", required=True, help="Nodes as level:summand,...")
@click.option("-o", "--output", default=None)
def quotient(diagram, ideal, output):
    """Delete an ideal's nodes."""
    _emit(B.to_text(B.quotient(_diagram(diagram), B.nodes_from_text(ideal))), output)


@main.command("ideal-closure")
@click.argument("diagram")
@click.option("--seed", required=True, help="Nodes as level:summand,...")
def ideal_closure(diagram, seed):
    """Smallest directed hereditary node set containing the seed."""
    j = B.ideal_closure(_diagram(diagram), B.nodes_from_text(seed))
    _emit(textio.dump({"ideal": _nodes_data(j)}))


@main.command("split-cover")
@click.argument("diagram")
@click.option("-o", "--output", default=None)
def split_cover(diagram, output):
    """Left-invertible cover with the ideal giving the input back."""
    cover, ideal = B.split_cover(_diagram(diagram))
    _emit(textio.dump({"cover": B.to_data(cover), "ideal": _nodes_data(ideal)}), output)


@main.command()
@click.argument("diagram")
@click.option("--ideal", required=True, help="Nodes as level:summand,...")
def essential(diagram, ideal):
    """Does every node reach the ideal within the prefix?"""
    verdict = B.is_essential(_diagram(diagram), B.nodes_from_text(ideal))
    click.echo(verdict)
    raise Exit({"yes-at-depth": OK, "no": VIOLATION}.get(verdict, EXHAUSTED))


@main.command()
@click.argument("diagram")
@click.option("-o", "--output", default=None)
def k0(diagram, output):
    """Write the dimension-group presentation of a diagram."""
    _emit(K.to_text(K.extract_k0(_diagram(diagram))), output)


@main.command("k0-check")
@click.argument("presentation")
@click.option("--depth", type=int, default=None)
@click.option("--dims", default=None)
@click.option("--levels", default=None)
@click.option("--max-support", type=int, default=None)
def k0_check(presentation, depth, dims, levels, max_support):
    """Check the universality conditions on a presentation."""
    p = K.from_text(_read(presentation))
    rep = K.check_universal_presentation(p, depth, _dims(dims), _ints(levels), max_support)
    _emit(textio.dump(rep.as_data()))
    raise Exit(OK if rep.cantor.verdict == "certified-at-depth" else VIOLATION)


def _chain_data(chain) -> list[dict]:
    return [
        {"from": c.source, "src_level": c.src_level, "dst_level": c.dst_level, "arrow": textio.morphism_to_data(c.arrow)}
        for c in chain
    ]


@main.command()
@click.argument("da")
@click.argument("db")
@click.option("--rounds", type=int, default=4, show_default=True)
@click.option("--max-level", type=int, default=None)
@click.option("--unital", is_flag=True)
def intertwine(da, db, rounds, max_level, unital):
    """Back-and-forth chain of left-invertible maps between two diagrams."""
    a, b = _diagram(da), _diagram(db)
    chain = F.intertwine(a, b, rounds, max_level, unital)
    if chain is None:
        click.echo("search ran out of levels", err=True)
        raise Exit(EXHAUSTED)
    ok = F.check_chain(a, b, chain)
    _emit(textio.dump({"chain": _chain_data(chain), "triangles commute": ok}))
    raise Exit(OK if ok else VIOLATION)


def _rounds_data(rounds) -> list[dict]:
    return [
        {
            "b_level": r.b_level,
            "u_level": r.u_level,
            "alpha": textio.morphism_to_data(r.alpha),
            "beta": textio.morphism_to_data(r.beta),
        }
        for r in rounds
    ]


@main.command()
@click.argument("du")
@click.argument("db")
@click.option("--rounds", type=int, default=None, help="Defaults to the depth of DB.")
@click.option("--max-level", type=int, default=None)
def section(du, db, rounds, max_level):
    """Levelwise EP-pairs from DB into DU commuting with both sequences."""
    u, b = _diagram(du), _diagram(db)
    rs = F.ep_section(u, b, rounds or b.depth, max_level)
    if rs is None:
        click.echo("search ran out of levels", err=True)
        raise Exit(EXHAUSTED)
    checks = F.check_section(u, b, rs)
    _emit(textio.dump({"rounds": _rounds_data(rs), "checks": checks}))
    raise Exit(OK if all(checks.values()) else VIOLATION)


@main.command()
@click.argument("du")
@click.argument("db")
@click.option("--rounds", type=int, default=None, help="Defaults to the depth of DB.")
@click.option("--max-level", type=int, default=None)
def surject(du, db, rounds, max_level):
    """Exhibit DB as a quotient of a retract of DU."""
    u, b = _diagram(du), _diagram(db)
    w = F.universal_surjection_witness(u, b, rounds or b.depth, max_level)
    if w is None:
        click.echo("search ran out of levels", err=True)
        raise Exit(EXHAUSTED)
    checks = dict(F.check_section(u, w.cover, w.section))
    checks["ideal is essential"] = B.is_essential(w.cover, w.ideal) == "yes-at-depth"
    checks["quotient gives the input"] = B.same_shape(B.quotient(w.cover, w.ideal), b)
    _emit(textio.dump({
        "cover": B.to_data(w.cover),
        "ideal": _nodes_data(w.ideal),
        "rounds": _rounds_data(w.section),
        "checks": checks,
    }))
    raise Exit(OK if all(checks.values()) else VIOLATION)


@main.command()
@click.argument("diagram", default="-")
def dot(diagram):
    """Graphviz text for a diagram."""
    _emit(B.to_dot(_diagram(diagram)))


def run(argv: list[str] | None = None) -> int:
    try:
        main.main(args=argv, prog_name="afcantor", standalone_mode=False)
    except Exit as e:
        return e.code
    except click.exceptions.Abort:
        return MALFORMED
    except click.ClickException as err:
        err.show()
        return MALFORMED
    except (MalformedInput, NotLeftInvertible, IndexError) as err:
        click.echo(f"error: {err}", err=True)
        return MALFORMED
    return OK


def entry() -> None:
    sys.exit(run())


if __name__ == "__main__":
    entry()

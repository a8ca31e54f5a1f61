"""The tensor square of the universal diagram for sizes {2, 3, 5, 11} is
not of the same kind: M_15 never sits inside M_22 left-invertibly."""

from afcantor import CategorySpec, build_fraisse, check_cantor, tensor

d, _ = build_fraisse(CategorySpec.parse("2,3,5,11"), 30)
sq = tensor(d, d)
n = min(n for n, a in enumerate(sq.levels) if 15 in a.dims)
print(f"square has {sq.depth} levels; 15 first appears at level {n}")
rep = check_cantor(sq, levels=[n], max_support=1)
gaps = sorted(
    node
    for inst in rep.unwitnessed("D2")
    for node, x in inst.data["coeffs"].items()
    if x == 1 and sq.dim((n, node)) == 15 and inst.data["target_dim"] == 22
)
print(f"{len(gaps)} nodes of size 15 at level {n} never reach a size 22 node with one copy")
print("first few:", gaps[:5])

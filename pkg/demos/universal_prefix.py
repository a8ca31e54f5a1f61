"""Grow a prefix of the universal diagram starting from sizes up to 4 and certify
the Cantor conditions on its first levels."""

from afcantor import CategorySpec, build_fraisse, check_cantor

spec = CategorySpec.parse("all:4")
d, log = build_fraisse(spec, 200)
print(f"{d.depth} levels, sizes seen: {sorted(set(d.all_dims()))}")
print("level sizes:", [len(a) for a in d.levels[:8]], "...")

rep = check_cantor(d, dim_universe=range(1, 5), levels=[0, 1, 2])
print("verdict on levels 0-2:", rep.verdict)
for cond in ("D0", "D1", "D2", "D3"):
    print(f"  {cond}: {len(rep.witnessed(cond))} witnessed, {len(rep.unwitnessed(cond))} open")

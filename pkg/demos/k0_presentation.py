"""Read off the scaled dimension group of the binary diagram and ask which
elements land in the scale."""

from afcantor.bratteli import binary_diagram
from afcantor.k0 import GroupElement, extract_k0, in_scale, is_positive, push, to_text

p = extract_k0(binary_diagram(4))
print(to_text(p))
g = GroupElement(1, (1, 1))
print("push (1, 1) to level 3:", push(p, g, 3).vector)
print("in scale:", in_scale(p, g, 3))
print("(1, -1) positive by level 3:", is_positive(p, GroupElement(1, (1, -1)), 3))

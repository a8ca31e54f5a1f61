"""Amalgamate two embedding-projection pairs over M_2 and check that both
squares commute in each direction."""

from afcantor import FdAlgebra, Morphism, amalgam_identities, proper_amalgamate
from afcantor.fdalg import ep_from_section

d = FdAlgebra([2])
# M_2 sitting twice inside M_2 + M_3, once via the first summand
e = ep_from_section(Morphism(d, FdAlgebra([2, 3]), [[1], [1]]), [0])
# M_2 sitting diagonally inside M_4
f = ep_from_section(Morphism(d, FdAlgebra([4, 2]), [[2], [1]]), [1])

g, out_e, out_f = proper_amalgamate(e, f)
print("amalgam:", g.dims)
print("E -> G:", out_e.fwd.mult)
print("F -> G:", out_f.fwd.mult)
for name, ok in amalgam_identities(e, f, out_e, out_f).items():
    print(f"  {name}: {ok}")

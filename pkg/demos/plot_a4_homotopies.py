"""
Linear A4 with homotopies
=========================

Two degree -1 arrows kill the paths of length two, so H^0 is the
radical-square-zero quotient and H^-1 is one-dimensional.
"""
from heartknit import Heart, knit, label_string
from heartknit.dsl import parse_algebra, print_algebra

A = parse_algebra("""
algebra {
  vertices = [1, 2, 3, 4];
  arrow alpha : 1 -> 2 deg 0;
  arrow beta  : 2 -> 3 deg 0;
  arrow gamma : 3 -> 4 deg 0;
  arrow h1    : 1 -> 3 deg -1;
  arrow h2    : 2 -> 4 deg -1;
  d(h1) = alpha*beta;
  d(h2) = beta*gamma;
}
""")
print(print_algebra(A))

dims = {}
for (_s, _t, i), n in A.cohomology.items():
    dims[i] = dims.get(i, 0) + n
print("cohomology of A by degree:", dims, "d_min:", A.d_min)

q = knit(A, 2)
print(q.status, len(q.vertices))
for x in sorted(q.objects(), key=lambda x: sum(x.module.cohomology_dims().values())):
    print(" ", label_string(x))

# the indecomposable projectives e_v A, as heart objects
H = Heart.of(A, 2)
print([label_string(H.projective(v)) for v in A.vertices])

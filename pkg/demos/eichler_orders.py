# the quaternion algebra of a hermitian space and the Eichler order of a self-dual lattice
from unitary_shimura.hermitian import enumerate_spaces, lattice_classes, lattice_rep
from unitary_shimura.quadratic_field import make_field
from unitary_shimura.quaternion import algebra_from_space, construct_eichler_order, level

for D in (-7, -15, -23, -455):
    ctx = make_field(D)
    for W in enumerate_spaces(ctx):
        B = algebra_from_space(W)
        print(f"D={D} det={W.det_class}: B=({B.a}, {B.b}) disc_B={B.disc} N={level(ctx, B)}")
        for c in lattice_classes(W):
            R = construct_eichler_order(W, lattice_rep(W, c))   # raises if any property fails
            print(f"   class {c.label()}: reduced disc {R.reduced_discriminant}, a = {R.ideal}")

(W,) = enumerate_spaces(make_field(-7))
R = construct_eichler_order(W, lattice_rep(W, lattice_classes(W)[0]))
for row in R.symplectic_gram():
    print([int(x) for x in row])   # unimodular alternating Gram matrix

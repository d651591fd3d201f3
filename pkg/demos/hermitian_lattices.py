# signature (1,1) hermitian spaces and their self-dual lattices
from unitary_shimura.hermitian import (
    dual_lattice, enumerate_spaces, is_globally_isotropic, is_self_dual, lattice_classes, lattice_rep, twist,
)
from unitary_shimura.quadratic_field import ideal_from_form, make_field, reduced_forms

for D in (-7, -15, -39, -455):
    ctx = make_field(D)
    print(f"D={D}: {len(enumerate_spaces(ctx))} spaces, h={len(reduced_forms(ctx))}")
    for W in enumerate_spaces(ctx):
        classes = [c.label() for c in lattice_classes(W)]
        print(f"   det {W.det_class}  p_circ {W.p_circ}  isotropic={is_globally_isotropic(W)}  classes {classes}")

# one lattice up close
ctx = make_field(-23)
(W,) = enumerate_spaces(ctx)
c = lattice_classes(W)[1]
L = lattice_rep(W, c)
print(L)
print("self-dual:", is_self_dual(L), " Steinitz:", L.steinitz.label())
print("dual ideals:", dual_lattice(L).ideals)

# twisting by an ideal moves the Steinitz class by its square
for f in reduced_forms(ctx):
    T = twist(L, ideal_from_form(ctx, f))
    print("twist by", f.label(), "->", T.steinitz.label(), "self-dual:", is_self_dual(T))

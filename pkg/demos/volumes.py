# degrees and arithmetic volumes, exact and numeric
from mpmath import nstr

from unitary_shimura.hermitian import enumerate_spaces, is_globally_isotropic
from unitary_shimura.quadratic_field import make_field
from unitary_shimura.quaternion import algebra_from_space
from unitary_shimura.volumes import (
    a0_volume, evaluate, mass, quaternionic_degree, quaternionic_volume, unitary_degree, unitary_volume,
)
from unitary_shimura.zeta import functional_equation_route, glaisher_route, zeta_constants

print("zeta'(-1), Glaisher route:          ", nstr(glaisher_route(40), 40))
print("zeta'(-1), functional equation route:", nstr(functional_equation_route(40), 40))
print("2 zeta'(-1)/zeta(-1) =", nstr(zeta_constants(30).zeta_ratio, 30))

for D in (-3, -7, -15, -455):
    ctx = make_field(D)
    for W in enumerate_spaces(ctx):
        v = unitary_volume(ctx, W)
        print(f"D={D} det={W.det_class}: deg {unitary_degree(ctx, W)}  vol {v}  ~ {evaluate(v, 20)}")
        if not is_globally_isotropic(W):
            B = algebra_from_space(W)
            q = quaternionic_volume(B.disc, -D // B.disc)
            print("   times |O^x| equals the quaternionic volume:", v * ctx.unit_count == q)

print("deg(6, 5) =", quaternionic_degree(6, 5))
print("A_0 minus A_R at (6, 35):", a0_volume(6, 35) - quaternionic_volume(6, 35))
print("masses at 5 and 7:", mass(5, 6, 35), mass(7, 6, 35))

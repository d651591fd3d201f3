# class groups of Q(sqrt(D)) through reduced binary quadratic forms
from unitary_shimura.quadratic_field import (
    compose, form_from_ideal, ideal_from_form, make_field, odd_fundamental_discriminants, reduced_forms,
)

ctx = make_field(-455)           # 455 = 5 * 7 * 13, so three ramified primes
G = reduced_forms(ctx)
print("h(-455) =", len(G), " o_k =", ctx.o_k)
print("classes:", ", ".join(f.label() for f in G))

f = G.elements[1]
print(f.label(), "has order", G.order(f))
print("squares:", [g.label() for g in G.principal_genus])   # the principal genus, size h / 2^(o-1)

# forms and ideals are the same group
a = ideal_from_form(ctx, f)
print("ideal of", f.label(), "=", a, "with norm", a.norm())
print("form of a^2:", form_from_ideal(ctx, a * a).label(), "=", compose(ctx, f, f).label())

# genus count over a range
for D in odd_fundamental_discriminants(-120, -3):
    c = make_field(D)
    H = reduced_forms(c)
    print(f"D={D:5d}  h={len(H):2d}  o={c.o_k}  |CL0|={len(H.principal_genus)}")

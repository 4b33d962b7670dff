"""Walk through a two-pronged claw: its array, its Čech square, and why it
stops being a pushout once cyclic symmetry is allowed."""

from higher_segal import Claw, cech_cube, classify_claw, render_claw, rotate_claw
from higher_segal.claws import colimit_oracle, decompose_cube, is_strongly_bicartesian

# the two outer faces [1] -> [2]
c = Claw.from_images(2, [(1, 2), (0, 1)])
print(render_claw(c))
rep = classify_claw(c)
print("compatible:", rep.compatible, " cyclically compatible:", rep.cyclically_compatible)

cube = cech_cube(c)
print("corners:", {tuple(sorted(T)): v for T, v in cube.corners.items()})

for cat in ("delta", "lambda"):
    res = colimit_oracle(cube, cat, apex_bound=6)
    print(f"pushout in {cat}? {bool(res)}", "" if res else f"(first failing apex {res.failing_apex})")
    print("  strongly biCartesian (criterion checked against oracle):", is_strongly_bicartesian(c, cat, "both"))

# rotating the codomain does not change the answers
print("after rotation:", classify_claw(rotate_claw(c, 1)).compatible)

# a wider claw splits into primitive pieces
wide = Claw.from_images(3, [(0, 0, 1, 1, 2, 3), (0, 1, 2, 3)])
print("primitive pieces:", [[f.images for f in p.prongs] for p in decompose_cube(wide, primitive_only=True)])

"""Lower and upper triangulations of cyclic polytopes, computed from an exact
convex hull and compared with the Gale evenness shortcut."""

from higher_segal.polytopes import CyclicPolytope, export_off, hull_facets, interpolation_chain, segal_cover

for n, d in [(3, 2), (4, 3), (6, 3)]:
    lo, hi = hull_facets(n, d)
    print(f"C({n},{d}) lower:", " ".join(lo.precover().labels()))
    print(f"{'':7} upper:", " ".join(hi.precover().labels()))
    assert segal_cover(n, d, "lower").subsets == lo.facets
    print(f"{'':7} volume {CyclicPolytope(n, d).volume()} = {sum(lo.volumes())} = {sum(hi.volumes())}")

print()
print("refining the spine of [5] into the 1-Segal-type cover:")
for j, p in enumerate(interpolation_chain(5, 1)):
    print(f"  F_{j - 1}:", " ".join(p.labels()))

print()
print(export_off(hull_facets(4, 3)[0]).splitlines()[:3], "...")

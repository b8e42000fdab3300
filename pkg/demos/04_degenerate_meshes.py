"""Degenerate mesh families and their statistics.

Both generators drive the largest angle toward pi while the largest
circumradius still goes to zero: the anisotropic crisscross of the unit
square, and a layered triangulation of the curved domain
|x-y|^(3/2) + |x+y|^(3/2) < 2.  The script also round-trips a mesh through
the text format.
"""
from circumlab import (
    gen_crisscross_aniso,
    gen_lens,
    gen_uniform,
    read_mesh,
    stats,
    write_mesh,
)

print("anisotropic crisscross, alpha = 1.5 (rows ~ n^1.5):")
print(f"{'n':>4s} {'triangles':>10s} {'max R_K':>10s} {'max angle':>10s} "
      f"{'min angle':>10s}")
for n in (4, 8, 16, 32, 64, 128):
    s = stats(gen_crisscross_aniso(n, 1.5))
    print(f"{n:4d} {s.n_triangles:10d} {s.max_R_K:10.5f} {s.max_angle:10.5f} "
          f"{s.min_angle:10.5f}")
print("-> max angle climbs toward pi = 3.14159 while max R_K shrinks.\n")

print("curved domain |x-y|^1.5 + |x+y|^1.5 < 2, layered strips:")
for n in (4, 8, 16, 32):
    s = stats(gen_lens(n))
    print(f"{n:4d} {s.n_triangles:10d} {s.max_R_K:10.5f} {s.max_angle:10.5f} "
          f"{s.min_angle:10.5f}")

print("\ntext format round trip (uniform 2x2):")
text = write_mesh(gen_uniform(2))
print(text)
again = write_mesh(read_mesh(text))
print(f"byte-identical after write-read-write: {text == again}")

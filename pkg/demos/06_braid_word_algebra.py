"""The word algebra behind the band pictures.

Braid words extracted from band trajectories live in a small algebra:
concatenation, inversion, free reduction, exponent sums, and the induced
strand permutations. The exponent sum equals the spectral winding index of
the corresponding bands, and the induced permutation equals the tracked
closure permutation.
"""

import numpy as np

from bloch_braids import (BraidWord, concat, cyclic_canonical, exponent_sum,
                          free_reduce, induced_permutation, inverse, word_from_text,
                          word_to_text)

t1 = word_from_text("t1", 3)
t2 = word_from_text("t2", 3)

print("concatenation is non-commutative for three strands:")
ab = concat(t1, t2)
ba = concat(t2, t1)
print(f"   t1*t2 = {word_to_text(ab)!r} -> {induced_permutation(ab).band_mapping_str()}")
print(f"   t2*t1 = {word_to_text(ba)!r} -> {induced_permutation(ba).band_mapping_str()}")

print("\ninverses cancel under free reduction:")
w = concat(ab, inverse(ab))
print(f"   (t1 t2)(t1 t2)^-1 = {word_to_text(w)!r} "
      f"-> reduced: {word_to_text(free_reduce(w))!r}")

print("\nthe exponent sum is a homomorphism to the integers:")
for text in ("t1 t2", "T2 T1", "t2 t1 t2 t1", "t1 T1 t2"):
    w = word_from_text(text, 3)
    print(f"   {text:12s} exponent sum {exponent_sum(w):+d}, "
          f"canonical cyclic form {word_to_text(cyclic_canonical(w))!r}")

print("\nwords that differ by the starting point of the zone traversal are")
print("cyclic rotations; the canonical form identifies them:")
for text in ("t1 t2 t1", "t2 t1 t1", "t1 t1 t2"):
    w = word_from_text(text, 3)
    print(f"   {text} -> {word_to_text(cyclic_canonical(w))}")

print("\nrandom sanity sweep of the group laws:")
rng = np.random.default_rng(5)
for _ in range(1000):
    length = int(rng.integers(0, 10))
    letters = tuple((int(rng.integers(1, 3)), int(rng.choice([-1, 1]))) for _ in range(length))
    w = BraidWord(letters, 3)
    assert len(free_reduce(concat(w, inverse(w)))) == 0
    assert exponent_sum(free_reduce(w)) == exponent_sum(w)
print("   1000 random words: inverse and reduction laws hold")

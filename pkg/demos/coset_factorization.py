"""Split a random 5-mode interferometer into mixing on modes 1..4 and a
Hessenberg coset matrix, then print the zero pattern of each side."""
import numpy as np

from photonsums import factor_input_coset, factor_output_coset, haar_unitary

u = haar_unitary(5, seed=2024)


def pattern(m):
    return "\n".join(" ".join("." if abs(z) < 1e-12 else "x" for z in row) for row in m)


for factor in (factor_output_coset, factor_input_coset):
    f = factor(u)
    err = np.max(np.abs(f.reconstruct() - u))
    print(f"{f.side} side: {len(f.rotations)} rotations, reconstruction error {err:.1e}")
    print(pattern(f.coset))
    for rot in f.rotations:
        print(f"  R{rot.mode_i}{rot.mode_j}({rot.alpha:+.3f}, {rot.beta:+.3f}, {rot.gamma:+.3f})")
    print()

"""Permanents of Hessenberg matrices cost a determinant: flip the sign of
the superdiagonal and call LAPACK. Compare with Ryser's exponential sum."""
import time

from photonsums import permanent_hessenberg, permanent_ryser
from photonsums.linalg import random_upper_hessenberg

print("  n     ryser [s]      det [s]   rel. diff")
for n in range(6, 21, 2):
    h = random_upper_hessenberg(n, seed=n)
    t0 = time.perf_counter()
    p_ryser = permanent_ryser(h)
    t1 = time.perf_counter()
    p_det = permanent_hessenberg(h)
    t2 = time.perf_counter()
    print(f"{n:3d}  {t1 - t0:12.6f} {t2 - t1:12.6f}   {abs(p_ryser - p_det) / abs(p_det):.1e}")

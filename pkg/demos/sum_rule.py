"""Individual coincidence rates change when the beam splitters next to the
detectors are removed, but the weighted sum over outputs that keep one
photon in the last mode does not."""
from photonsums import PhotonConfig, SumSpec, haar_unitary, sum_over_outputs
from photonsums.rates import DelaySpec

n = 4
u = haar_unitary(n, seed=17)
inp = PhotonConfig([2, 3, 4])

for taus in ([0.0, 0.0, 0.0], [0.0, 0.4, 1.3]):
    spec = SumSpec("output", n, 3, delays=DelaySpec(taus))
    rep = sum_over_outputs(u, inp, spec)
    print(f"delays {taus}")
    print("  output      full U      coset      route")
    for t in rep.terms:
        print(f"  {str(t.config):10s} {t.rate_full:.6f}   {t.rate_coset:.6f}   {t.method}")
    print(f"  sum        {rep.sum_full:.12f}")
    print(f"  coset sum  {rep.sum_coset:.12f}   |diff| = {rep.discrepancy:.1e}\n")

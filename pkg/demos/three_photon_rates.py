"""Three photons, one of them delayed: closed-form rates built from the
permanent and the mixed-symmetry immanant, checked against a brute-force
sum over photon permutations."""
from photonsums import DelaySpec, PhotonConfig, haar_unitary, rate, rate_oracle
from photonsums.sumrules import enumerate_all

u = haar_unitary(4, seed=5)
inp = PhotonConfig([1, 2, 3])

for out in (PhotonConfig([1, 2, 4]), PhotonConfig([3, 3, 4])):
    print(f"output {out}")
    for dt in (0.0, 0.5, 1.0, 2.0, 10.0):
        d = DelaySpec([0.0, 0.0, dt])
        r = rate(u, inp, out, d)
        ref = rate_oracle(u, inp, out, d)
        print(f"  dt={dt:5.1f}  rate {r.value:.6f}  ({r.method})  oracle {ref:.6f}")
    print()

# with every delay different there is no closed form, so the oracle is used
d = DelaySpec([0.0, 0.7, 1.9])
r = rate(u, inp, PhotonConfig([1, 2, 4]), d)
print(f"all delays distinct: {r.value:.6f} via {r.method}")
total = sum(rate(u, inp, out, d).value for out in enumerate_all(4, 3))
print(f"total over all 20 outputs: {total:.12f}")

"""Two photons on a balanced beam splitter: coincidence rate against delay.

At zero delay the photons always leave together (rate 0); far apart they
behave like classical particles (rate 1/2).
"""
import numpy as np

from photonsums import DelaySpec, PhotonConfig, rate

bs = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
inp, out = PhotonConfig([1, 2]), PhotonConfig([1, 2])

print(" delay   coincidence rate")
for tau in np.linspace(-3, 3, 13):
    r = rate(bs, inp, out, DelaySpec([0.0, tau], s=1.0))
    bar = "#" * int(round(60 * r.value))
    print(f"{tau:6.2f}   {r.value:.4f} {bar}")

import numpy as np

from markov_embed import is_monotone, monotone_decompose, monotone_extremals
from markov_embed.sampling import random_monotone

rng = np.random.default_rng(0)

# There are binom(2d-1, d) monotone {0,1} extremals
for d in range(1, 6):
    print(d, len(monotone_extremals(d)))

M = np.array([[0.5, 0.5, 0.0], [0.5, 0.0, 0.5], [0.0, 0.5, 0.5]])
print(is_monotone(M))
for w, idx in monotone_decompose(M).terms:
    print(f"{w:.3f} {idx}")

# random monotone matrices use at most d^2 extremals
M = random_monotone(rng, 4)
dec = monotone_decompose(M)
print(len(dec.terms), np.max(np.abs(dec.matrix() - M)))

import numpy as np

from markov_embed import ei_bch, ei_detect, ei_embed, ei_exp, ei_make, ei_product, expm
from markov_embed.equal_input import GENERATOR, EqualInputParams, constant_input

# Equal-input matrices are determined by one column vector
p = EqualInputParams("matrix", (0.1, 0.2, 0.3))
M = ei_make(p)
print(M)
print("c =", p.c, "det =", np.linalg.det(M), "expected", (1 - p.c) ** 2)

# Products combine the summatory parameter as a + b - ab
q = constant_input(3, 1.2)
print(ei_product(p, q).c, p.c + q.c - p.c * q.c)

# The exponential of an equal-input generator is an equal-input matrix
g = EqualInputParams(GENERATOR, (0.1, 0.2, 0.3))
print(ei_exp(g).c, 1 - np.exp(-g.c))

# A constant-input matrix with c > 1 in odd dimension is left undecided,
# in even dimension it is rejected
for d in (3, 4):
    print(d, ei_embed(ei_make(constant_input(d, 1.2))).status.value)

# Generators compose in closed form
h = ei_bch(g, g.scaled(0.5))
err = np.max(np.abs(expm(ei_make(g)) @ expm(ei_make(g.scaled(0.5))) - expm(ei_make(h))))
print(h.c_vec, err)
print(ei_detect(ei_make(h)).kind)

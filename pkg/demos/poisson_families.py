import numpy as np

from markov_embed import divisible_construct, make_family

# P0 = I gives the ordinary Poisson semigroup exp(t(P - I))
P = np.array([[0.6, 0.2, 0.2], [0.2, 0.6, 0.2], [0.2, 0.2, 0.6]])
fam = make_family(np.eye(3), P)
for t in (0.5, 1.0, 2.0):
    print(t, np.linalg.det(fam(t)))
print("semigroup:", np.max(np.abs(fam(0.5) @ fam(0.5) - fam(1.0))))

# With a singular idempotent P0 every member of the family is singular
alpha, a, b = 0.5, 0.5, 0.5
c = alpha * a + (1 - alpha) * (1 - b)
P0 = np.array([[1, 0, 0], [alpha, 0, 1 - alpha], [0, 0, 1]])
P = np.array([[a, 0, 1 - a], [c, 0, 1 - c], [1 - b, 0, b]])
res = divisible_construct(P0, P, 1.0)
print(res.matrix)
print("embeddable:", res.embeddable, "det:", res.det)

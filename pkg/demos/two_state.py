import numpy as np

from markov_embed import all_markov_sqrt2, embed2, expm, root2

# A 2x2 Markov matrix is embeddable exactly when its trace exceeds 1
M = np.array([[0.75, 0.25], [0.5, 0.5]])
v = embed2(M)
print(v.status.value, v.method.value)
print(v.generator)
print("reconstruction error:", np.max(np.abs(expm(v.generator) - M)))

# the swap matrix has trace 0, so no generator exists
print(embed2(np.array([[0.0, 1.0], [1.0, 0.0]])).status.value)

# Markov square roots: one monotone, one not
for R in all_markov_sqrt2(M):
    print(R, "trace", np.trace(R))

# higher roots stay inside the monotone class
R = root2(M, 5)
print(np.linalg.matrix_power(R, 5) - M)

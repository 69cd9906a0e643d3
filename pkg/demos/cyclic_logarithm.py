import numpy as np

from markov_embed import discriminants3, embed_verdict, expm, real_log_cyclic

# A Jordan block generator: the spectrum of exp(Q) has a repeated eigenvalue
Q = np.array([[-1.0, 1.0, 0.0], [0.0, -1.0, 1.0], [0.0, 0.0, 0.0]])
M = expm(Q)
print(discriminants3(M))

R, coeffs = real_log_cyclic(M)
print(coeffs.method, coeffs.nodes)
print("recovered generator error:", np.max(np.abs(R - Q)))

v = embed_verdict(M)
print(v.status.value, v.method.value, v.unique_in_zero_row_sum_algebra)

# A matrix with a negative eigenvalue has no real logarithm at all
M_half = np.array([[0.5, 0.5, 0.0], [0.5, 0.0, 0.5], [0.0, 0.5, 0.5]])
print(embed_verdict(M_half).status.value, embed_verdict(M_half).reason)

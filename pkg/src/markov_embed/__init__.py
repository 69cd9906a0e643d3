"""Equal-input and monotone Markov matrices: classification, extremal
decompositions, embeddability decisions, generator recovery and roots."""
from .core import (ClassificationReport, Spectrum, StructureInfo, classify,
                   eigenvalues, expm, inverse_permutation, is_generator,
                   is_idempotent, is_markov, logm_series, min_poly_degree,
                   perm_conjugate, permutation_matrix, power_limit, spectrum,
                   stationary_vectors, structure)
from .embedding import (DivisibleResult, LogCoefficients, PoissonFamily,
                        all_markov_sqrt2, confluent_det_formula,
                        confluent_vandermonde, discriminants3,
                        divisible_construct, embed2, embed_verdict,
                        log_coefficients_d3, log_coefficients_solve,
                        make_family, poisson_family, real_log_cyclic, root2,
                        sqrt_obstruction, superfactorial, vandermonde_inverse)
from .equal_input import (EqualInputParams, constant_input, ei_bch,
                          ei_decompose, ei_detect, ei_embed, ei_exp, ei_limit,
                          ei_log, ei_make, ei_power, ei_product, ei_root,
                          summatory_product)
from .errors import *  # noqa: F401,F403
from .monotone import (Decomposition, ExtremalIndex, all_extremals, dominates,
                       extremal_conjugate, extremal_mul, is_monotone,
                       is_monotone_generator, is_monotone_rows,
                       monotone_decompose, monotone_extremals,
                       preserves_nondecreasing)
from .verdict import EmbedVerdict, Method, Status

__version__ = "0.1.0"

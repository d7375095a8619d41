"""
Posterior over introversion and its closed-form MAP
===================================================

Five observed factors give Gaussian likelihoods; the log posterior is a
quadratic in I, so its maximizer has a closed form.  We compare it with a
golden-section search and a grid.
"""

import numpy as np

from introscore import Prior, default_factor_params, map_closed_form, map_numeric, observe, posterior_grid, quad_coeffs
from introscore.quadratic import posterior_moments

factors = default_factor_params(sigma=0.08)
x = np.full(12, 0.5)
for fp in factors:
    x[fp.factor_id - 1] = fp.slope * 0.62 + fp.intercept
obs = observe(x, factors)

for prior in (Prior.uniform(), Prior.normal(0.4, 0.1)):
    q = quad_coeffs(obs, prior)
    closed, edge = map_closed_form(q)
    numeric, _ = map_numeric(obs, prior)
    post = posterior_grid(obs, prior, 2001)
    mean, var = posterior_moments(q)
    print(prior.kind)
    print(f"  A1={q.a1:.3f} A2={q.a2:.3f}")
    print(f"  MAP closed {closed:.10f} numeric {numeric:.10f} on boundary {edge}")
    print(f"  mean {mean:.5f} (grid {post.mean:.5f}), sd {var ** 0.5:.5f}")
    print(f"  95% interval {post.credible_interval_95}")

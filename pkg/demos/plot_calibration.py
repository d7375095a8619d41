"""
Calibrating both models on a labelled cohort
============================================

A synthetic cohort stands in for real labelled data.  Per-factor
regressions recover the likelihood parameters; a linear fit recovers
weights for the score.
"""

import numpy as np

from introscore import GenConfig, LinearWeights, fit_factor_params, fit_ols, fit_prior, generate_cohort, score

cohort = generate_cohort(GenConfig(n=2000, seed=4))
for fp in fit_factor_params(cohort):
    print(f"factor {fp.factor_id} ({fp.name}): slope {fp.slope:+.3f} intercept {fp.intercept:.3f} sigma {fp.sigma:.4f}")
print("prior:", fit_prior(cohort.labels, "normal"))

# the linear route needs all twelve regressors to vary
rng = np.random.default_rng(4)
X = rng.uniform(size=(300, 12))
truth = LinearWeights(rng.uniform(0.1, 1.0, 12), noise_sigma=0.01)
y = score(X, truth, rng=rng)
w, diag = fit_ols(X, y)
print("r2", round(diag.r_squared, 6), "sigma", round(diag.residual_sigma, 5))
print("max weight error", np.max(np.abs(w.magnitudes - truth.magnitudes)))
print("sign violations:", diag.sign_violations)

"""
Scoring a profile with the linear model
=======================================

A raw profile is validated, normalized to twelve regressors in [0, 1] and
combined with fixed-sign weights.
"""

import numpy as np

from introscore import LinearWeights, RawProfile, normalize, partial_effects, score, validate
from introscore.linear import WEIGHT_NAMES

profile = RawProfile(
    id="demo",
    solo_pubs=14,
    total_pubs=20,
    conf_per_year=1.0,
    job_rating=0.3,
    org_type=1,
    encyclopedic=0.7,
    depth=0.8,
    avg_duration_months=42.0,
    citation_freq=0.2,
    pub_rate=3.0,
    ext_funding=0.1,
    interdisc_collab=0.15,
    network_activity=0.05,
)
print("violations:", validate(profile))

x = normalize(profile)
w = LinearWeights.uniform()
print("features:", np.round(x, 3))
print("score:", score(x, w))

# per-term contributions sum to the score
for name, c in zip(WEIGHT_NAMES, partial_effects(x, w).terms):
    print(f"  {name:>7} {c:+.4f}")

# the ceiling with equal weights: positive regressors at 1, negative at 0
best = np.where(np.asarray(w.coefficients) > 0, 1.0, 0.0)
print("max score:", score(best, w))

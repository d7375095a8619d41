"""Random problem instances shared by the test modules."""

import numpy as np

from introscore import FactorParams, Prior, map_closed_form, quad_coeffs
from introscore.profile import RawProfile


def make_profile(**over):
    base = dict(
        id="p1",
        solo_pubs=3,
        total_pubs=4,
        conf_per_year=2.0,
        job_rating=0.2,
        org_type=1,
        encyclopedic=0.4,
        depth=0.9,
        avg_duration_months=30.0,
        citation_freq=0.3,
        pub_rate=5.0,
        ext_funding=0.1,
        interdisc_collab=0.2,
        network_activity=0.05,
        true_introversion=None,
    )
    base.update(over)
    return RawProfile(**base)


def random_observations(rng, k=None, sigma=(0.02, 0.3), interior=True, prior=None):
    """Random factor set with observations drawn around a latent I.

    With ``interior`` the draw is repeated until the closed-form optimum
    lies strictly inside (0, 1).
    """
    prior = prior or Prior.uniform()
    while True:
        n = int(rng.integers(1, 13)) if k is None else k
        ids = rng.choice(12, size=n, replace=False) + 1
        latent = rng.uniform(0.1, 0.9)
        obs = []
        for fid in ids:
            slope = rng.uniform(0.1, 1.0) * rng.choice([-1.0, 1.0])
            intercept = rng.uniform(0.0, 0.5)
            s = rng.uniform(*sigma)
            obs.append((FactorParams(int(fid), slope, intercept, s), slope * latent + intercept + rng.normal(0.0, s)))
        if not interior:
            return obs
        _, edge = map_closed_form(quad_coeffs(obs, prior))
        if not edge:
            return obs


def scale_sigmas(obs, c):
    return [(FactorParams(fp.factor_id, fp.slope, fp.intercept, fp.sigma * c), v) for fp, v in obs]

"""Interval-censored outcomes: the mean is bracketed by two observable means.

The outcome of interest is never observed directly; only a bracketing pair
(y1, y2) is.  Its mean therefore lies in [E(Y1), E(Y2)].  We place independent
nonparametric priors on the two marginal distributions (concentrations 10 and
20, normal base measures centered at 0 and 10), simulate the random identified
interval before and after seeing n=1000 observations, and summarize the
posterior with a point estimate and a 95% credible region.  The generating
process has E(Y1)=0, E(Y2)=5, so the target interval is [0, 5].
"""

import numpy as np

import partialid as pid
from partialid.scenarios import ROLE_DATA, attempt_stream

SEED = 7

cfg = pid.make_config("interval_censored", n=1000)
data = pid.generate_data(cfg, attempt_stream(SEED, ROLE_DATA, 0))
print(f"dataset: n={data.n}, columns={data.columns}")
print(f"sample means: y1={data.column('y1').mean():.4f}, "
      f"y2={data.column('y2').mean():.4f}")

prior = pid.draw_set_batch(cfg, "prior", 1000, master_seed=SEED)
posterior = pid.draw_set_batch(cfg, "posterior", 1000, master_seed=SEED, dataset=data)
print(f"\nprior skips: {prior.skipped}, posterior skips: {posterior.skipped}")

# coverage curves on the scenario grid [-3, 12]
prior_curve = pid.estimate_coverage(prior, cfg.grid)
post_curve = pid.estimate_coverage(posterior, cfg.grid)
print("\ngamma   prior_coverage   posterior_coverage")
for g in (-2.0, 0.0, 2.5, 5.0, 7.0, 10.0):
    i = int(np.argmin(np.abs(cfg.grid - g)))
    print(f"{cfg.grid[i]:5.2f}   {prior_curve.values[i]:14.3f}   "
          f"{post_curve.values[i]:18.3f}")

pe = pid.point_estimate_set(posterior)
cr = pid.credible_region(posterior, alpha=0.95)
print(f"\ntrue set:          [{cfg.true_set.lo}, {cfg.true_set.hi}]")
print(f"point estimate:    [{pe.lo:.4f}, {pe.hi:.4f}]")
print(f"95% credible set:  [{cr.region.lo:.4f}, {cr.region.hi:.4f}] "
      f"(containment {cr.containment:.3f})")

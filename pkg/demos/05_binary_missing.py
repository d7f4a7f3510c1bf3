"""Binary outcome with missing responses: conjugate updating and closed forms.

With outcomes missing at unknown rates, the success probability is only known
to lie in [p11, p11 + p_miss] where p11 is the probability of an observed 1
and p_miss the probability a response is missing.  The three observable cells
get a Dirichlet prior, so the posterior is Dirichlet with counts added, and
the interval's coverage function is a difference of two Beta CDFs — which we
verify against plain Monte Carlo here.  The generating process (80% success,
50% response) gives the target interval [0.4, 0.9].
"""

import numpy as np

import partialid as pid
from partialid.scenarios import ROLE_DATA, analytic_coverage_binary, attempt_stream

SEED = 7

cfg = pid.make_config("binary_missing", n=1000)
alpha = cfg.hyper["alpha"]
data = pid.generate_data(cfg, attempt_stream(SEED, ROLE_DATA, 0))
counts = pid.count_binary(data)
print(f"counts: observed 1s={counts.n1}, observed 0s={counts.n0_obs}, "
      f"missing={counts.m}")

astar = pid.binary_posterior_params(alpha, counts)
print(f"prior Dirichlet params {alpha} -> posterior {astar}")

# closed-form point estimate (posterior means of the two endpoints)
total = astar.sum()
print(f"closed-form point estimate: [{astar[0] / total:.4f}, "
      f"{(astar[0] + astar[2]) / total:.4f}]")

posterior = pid.draw_set_batch(cfg, "posterior", 10_000, master_seed=SEED, dataset=data)
pe = pid.point_estimate_set(posterior)
print(f"monte-carlo point estimate: [{pe.lo:.4f}, {pe.hi:.4f}]  (truth [0.4, 0.9])")

# Beta-CDF coverage vs Monte Carlo, prior and posterior
grid = np.linspace(0.0, 1.0, 11)
prior = pid.draw_set_batch(cfg, "prior", 10_000, master_seed=SEED)
prior_curve = pid.estimate_coverage(prior, grid)
post_curve = pid.estimate_coverage(posterior, grid)
print("\ngamma   prior_mc   prior_cf   post_mc   post_cf")
for i, g in enumerate(grid):
    cf_prior = analytic_coverage_binary(g, alpha)
    cf_post = analytic_coverage_binary(g, astar)
    print(f"{g:5.2f}   {prior_curve.values[i]:8.4f}   {cf_prior:8.4f}   "
          f"{post_curve.values[i]:7.4f}   {cf_post:7.4f}")

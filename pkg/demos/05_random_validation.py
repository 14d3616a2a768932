"""
Checking the bound against random interferer sets
=================================================

Random interferer sets come from thinning a dense scatter of candidates:
keep a random survivor, delete its neighbours within ``d1``, repeat.
Without fading, no such set should ever beat the bound. With fading we
count how often a random set's SIR falls under the bound's mean.
"""

from csma_bounds import RadioEnvironment, Scenario, make_grid, run_validation

grid = make_grid(1.0, 5.0, 1.0)

env0 = RadioEnvironment(sigma=0.0)
report = run_validation(env0, Scenario.dense(), grid, trials=200, rng=7)
print("no fading, dominance violations:", report.total_dominance_violations)

env = RadioEnvironment(sigma=2.0)
report = run_validation(env, Scenario.dense(), grid, trials=50, rng=7,
                        n_samples=1000, n_bound=20_000)
print(report.to_csv())
print(f"average P(SIR < bound mean) = {report.average('violation_prob_mean'):.3f}")

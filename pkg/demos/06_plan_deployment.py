"""
Planning relay robots for a set of flows
========================================

Given flow endpoints, the planner computes one link-length limit for the
whole flow count and chains relays along each flow at that spacing.
"""

from csma_bounds import FlowSpec, RadioEnvironment, plan_deployment

flows = [FlowSpec((0, 0), (30, 0)), FlowSpec((0, 20), (50, 20)), FlowSpec((-40, -40), (60, -40))]
plan = plan_deployment(flows, RadioEnvironment(sigma=2.0), sir_th=-5.0, gamma=0.1, rng=3, n=20_000)
print(plan.to_json())

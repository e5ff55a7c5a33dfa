# %% [markdown]
# # Negotiation runs against the oracle
#
# Random scenarios, random deal orders: individually rational runs always end
# at the utilitarian optimum, equitable runs at the egalitarian one.

# %%
import random

from mara import GeneratorSpec, Policy, compute_optima, generate, run_negotiation
from mara.scengen import random_allocation

scenario = generate(GeneratorSpec(3, 3, "unrestricted", (-5, 10), seed=2024))
start = random_allocation(scenario, random.Random(1))
report = compute_optima(scenario)

for seed in range(5):
    trace = run_negotiation(scenario, start, "ir", policy=Policy("random", seed))
    print(seed, len(trace.steps), trace.terminal_snapshot.utilitarian, report.max_utilitarian)

# %%
for seed in range(5):
    trace = run_negotiation(scenario, start, "equitable", policy=Policy("random", seed))
    print(seed, trace.terminal_snapshot.ordered_vector, report.max_egalitarian)

# %% [markdown]
# The deal order decides where an equitable run stops once the egalitarian
# optimum is reached; only the minimum is guaranteed.

# %%
from mara.catalog import equitable_after_optimum

scenario, start = equitable_after_optimum()
for kind in ("first", "greedy"):
    trace = run_negotiation(scenario, start, "equitable", policy=Policy(kind))
    print(kind, [s.ordered_vector for s in trace.snapshots()])

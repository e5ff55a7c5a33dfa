# %% [markdown]
# # Leximin, Lorenz and Pareto
#
# The same pair of allocations can compare differently under each ordering.

# %%
from mara import compute_optima, leximin_compare, lorenz_compare, snapshot
from mara.catalog import allocation, lorenz_needs_three_agents, three_agent_orderings

scenario, everything_to_2 = three_agent_orderings()
split = allocation(scenario, a1={"r1"}, a2={"r2"}, a3=set())
swapped = allocation(scenario, a1={"r2"}, a2={"r1"}, a3=set())

for a in (everything_to_2, split, swapped):
    print(snapshot(scenario, a).ordered_vector)

# %%
print(leximin_compare(scenario, everything_to_2, split))
print(lorenz_compare(scenario, everything_to_2, split))  # incomparable
print(lorenz_compare(scenario, split, swapped))

# %% [markdown]
# Here the start is Pareto optimal but Lorenz dominated, and every deal that
# would fix it needs all three agents.

# %%
scenario, start = lorenz_needs_three_agents()
report = compute_optima(scenario)
print(start in report.pareto_optimal, start in report.lorenz_optimal)
for a in sorted(report.lorenz_optimal, key=lambda a: a.describe()):
    print(a.describe(), snapshot(scenario, a).ordered_vector)

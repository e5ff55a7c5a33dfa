# %% [markdown]
# # When simple Pareto-Pigou-Dalton deals stall
#
# With 0-1 utilities and three agents, a run can get stuck at <0, 1, 2>
# although <1, 1, 1> is reachable. The only 1-deals toward it swap a pair of
# utilities that differ by one, which leaves the gap unchanged.

# %%
from mara import Scenario, UtilityFunction, compute_optima, enumerate_admissible, snapshot
from mara.catalog import allocation
from mara.verify import run_campaign

s = Scenario(
    ("1", "2", "3"),
    ("r1", "r2", "r3"),
    {
        "1": UtilityFunction.additive({"r1": 0, "r2": 0, "r3": 1}),
        "2": UtilityFunction.additive({"r1": 1, "r2": 0, "r3": 1}),
        "3": UtilityFunction.additive({"r1": 1, "r2": 1, "r3": 1}),
    },
)
stuck = allocation(s, a1=set(), a2={"r3"}, a3={"r1", "r2"})
print(snapshot(s, stuck).ordered_vector, enumerate_admissible(s, stuck, "ppd"))
print({snapshot(s, a).ordered_vector for a in compute_optima(s).lorenz_optimal})

# %%
for agents, resources in ((2, 3), (3, 2), (3, 3)):
    rep = run_campaign("t-lorenz", 200, agents, resources, stop_at_first_failure=False)
    print(agents, resources, f"{rep.trials_passed}/{rep.trials_run}")

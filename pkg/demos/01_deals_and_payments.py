# %% [markdown]
# # Deals, payments and the cluster deal
#
# Two agents, two resources. Agent 1 starts with both. Moving a single
# resource never pays off for both sides, but handing over both at once
# raises the utility sum from 7 to 8, which is enough to fund a side payment.

# %%
from mara import Deal, enumerate_admissible, snapshot, validate_payment, witness_payment
from mara.catalog import allocation, cluster_deal_needed

scenario, start = cluster_deal_needed()
print(snapshot(scenario, start))

# %%
# No individually rational 1-deal exists from the start.
print(enumerate_admissible(scenario, start, "ir", "one_deal"))

# %%
target = allocation(scenario, a1=set(), a2={"r1", "r2"})
deal = Deal(start, target)
payment = witness_payment(scenario, deal)
print(payment.payments)  # agent 2 pays 15/2 to agent 1
print(validate_payment(scenario, deal, payment))

# %% [markdown]
# Any payment inside the open interval (7, 8) works. One outside it does not:

# %%
print(validate_payment(scenario, deal, {"1": -1, "2": 1}))

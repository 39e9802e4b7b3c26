# %% [markdown]
# # Checking guarantees on tiny instances
#
# With n = 12 and K = 3 the optimum is cheap to find by enumeration, so
# each algorithm's value can be compared with the true OPT.

# %%
from submodstream.harness.verify import check_contract, default_contracts, oracle_instances, three_sieves_statistical

instances = oracle_instances(50, seed=0)
for contract, name, params, ratio, flagged in default_contracts(0.01):
    print(check_contract(contract, name, params, ratio, instances, flagged=flagged).line())

# %% [markdown]
# ThreeSieves only promises its bound with probability (1 - alpha)^K, so it
# is checked as a success rate rather than per instance.

# %%
print(three_sieves_statistical(n_instances=200).line())

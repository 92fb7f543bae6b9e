# %% [markdown]
# # Knowledge on a three-facet complex
#
# Three global states of a 3-process system.  X and Y differ only in the
# input of process 0; Y and W differ only in the input of process 2.
# Process 1 holds input 1 everywhere, so it cannot tell any of them apart.

# %%
from epimu.logic import Atom, DKnow, common_knowledge, evaluate, inp
from epimu.models import THREE_FACET_INPUTS, three_facet_model
from epimu.parser import parse
from epimu.serialize import to_dot

C = three_facet_model()
for name, values in THREE_FACET_INPUTS.items():
    print(name, values)

# %% [markdown]
# Processes 1 and 2 together know that process 2's input is 2 at X: the
# only state sharing their edge with X is Y.  Process 1 alone does not.

# %%
fact = Atom(inp(2, 2))
print("D{1,2}:", sorted(evaluate(C, DKnow({1, 2}, fact))))
print("D{1}:  ", sorted(evaluate(C, DKnow({1}, fact))))

# %% [markdown]
# Common knowledge is a greatest fixpoint.  For {2} it holds at X; for
# {0, 2} the chain X ~2 Y ~0 W reaches a state where the fact is false.

# %%
print("C{2}:  ", sorted(evaluate(C, common_knowledge({2}, fact))))
print("C{0,2}:", sorted(evaluate(C, parse("C{0,2} input(2)=2"))))

# %% [markdown]
# The induced Kripke model, with parallel edges merged into one label.

# %%
print(to_dot(C, list(C.states)))

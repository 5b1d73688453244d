"""Watch bleaching resolve a tie between two classes.

Run with:  python3 demos/classify_bleaching.py
"""

from ramnet import Wisard

# Identity-style setup: 4-bit retina, 2-bit tuples.
model = Wisard(2, seed=0)

# Class A sees the same pattern twice, class B sees it once plus a
# near-miss.  Raw scores alone cannot separate them on the shared
# pattern: every accessed cell is non-empty for both classes.
x = [1, 1, 0, 0]
model.train(x, "A")
model.train(x, "A")
model.train(x, "B")
model.train([1, 1, 0, 1], "B")

table = model.score(x)
print("raw scores at bleach 0:", table.raw)

# Raising the bleaching threshold demands counters strictly above it.
# A's cells hold the value 2, B's hold 1, so at threshold 1 only A
# still answers.
for b in range(3):
    table = model.score(x, bleach=b)
    print(f"bleach {b}: raw={table.raw}")

label, table = model.classify(x)
print("classify picked", label, "at bleach", table.bleach)

# Untraining is exact: remove what B learned and B disappears.
model.untrain(x, "B")
model.untrain([1, 1, 0, 1], "B")
print("labels after untraining B:", model.labels())

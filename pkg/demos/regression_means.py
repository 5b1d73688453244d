"""Compare the eight mean functions on one tiny regression task.

Run with:  python3 demos/regression_means.py
"""

import numpy as np

from ramnet import MEAN_KINDS, NoInformationError, RegressionWisard, Thermometer

# Noisy samples of y = 3x + 1 on [0, 1], binarized by a thermometer.
rng = np.random.default_rng(11)
thermo = Thermometer(16, 0.0, 1.0)
xs = rng.uniform(0.0, 1.0, size=400)
ys = 3.0 * xs + 1.0 + rng.normal(0.0, 0.05, size=400)

probes = [0.1, 0.5, 0.9]
print(f"{'mean':>14}  " + "  ".join(f"x={p:.1f}" for p in probes))
for kind in MEAN_KINDS:
    model = RegressionWisard(4, mean=kind, seed=3)
    for x, y in zip(xs, ys):
        model.train(thermo.transform([x]), y)
    row = []
    for p in probes:
        try:
            row.append(f"{model.predict(thermo.transform([p])):5.3f}")
        except NoInformationError:
            row.append("  n/a")
    print(f"{kind:>14}  " + "  ".join(row))

print()
print("true values       " + "  ".join(f"{3.0 * p + 1.0:5.3f}" for p in probes))

"""
Running the benchmark studies
=============================

Each study is described by a StudyConfig and returns a Table; the same runs
are available from the command line as ``uqtb profile``, ``uqtb mass`` and
so on.
"""

import os
import tempfile

from uqtb.bench import StudyConfig, run_study

out = tempfile.mkdtemp(prefix="uqtb-demo-")

# variance error against expansion order
table = run_study(StudyConfig.defaults("variance_convergence", points=51))
for n, e in zip(table["N"], table["rmse"]):
    print(f"N={int(n)}  rmse={e:.2e}")

# mass statistics across the mean scattering ratio; expectation sits above the
# nominal value while the median tracks it
mass = run_study(StudyConfig.defaults("mass_vs_cbar", n_samples=100_000))
for row in mass.data[::5]:
    cbar, nominal, mean, std, _, _, median = row
    print(f"cbar={cbar:.2f}  nominal={nominal:.5f}  mean={mean:.5f}  median={median:.5f}  std={std:.5f}")

# a reduced flux profile of the line source, written as CSV plus manifest
cfg = StudyConfig.defaults("profiles", "line", points=21, times=(1.0,), n_samples=100_000)
profile = run_study(cfg)
with open(os.path.join(out, "line_profile.csv"), "w") as fh:
    fh.write(profile.to_csv())
with open(os.path.join(out, "line_profile.json"), "w") as fh:
    fh.write(cfg.manifest())
print("wrote", out)

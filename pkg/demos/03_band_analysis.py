# # Band-limited analysis of recorded signals
#
# A stand-in for an EEG session: 8 channels sampled at 256 Hz, two
# conditions stored as CSV files. We cut a stationary stretch from each,
# then run the command line estimator on the beta band and read back the
# summary table. Any CSV with rows = time works the same way.

# + {"tags": ["parameters"]}
fs = 256.0
seconds = 16
band = "beta"
workdir = "band_demo"

# -
import csv
from pathlib import Path

import numpy as np

from sddnet import TimeSeriesPanel, VarModel, segment, simulate_var1, write_panel
from sddnet.cli import main
from sddnet.spectral import BANDS_HZ

out = Path(workdir)
out.mkdir(exist_ok=True)

# +
# Condition 2 couples channels 0 and 1 more strongly than condition 1.
rng = np.random.default_rng(5)
A = 0.15 * rng.standard_normal((8, 8))
A *= 0.6 / np.abs(np.linalg.eigvals(A)).max()
B = A.copy()
B[0, 1] += 0.3
B[1, 0] -= 0.3
n = int(fs * seconds) + 512
x1 = simulate_var1(VarModel(A), n, seed=1, label="rest")
x2 = simulate_var1(VarModel(B), n, seed=2, label="task")

# -
# Drop the first two seconds of each recording.
for name, x in (("rest", x1), ("task", x2)):
    cut = segment(x, 512, n)
    write_panel(TimeSeriesPanel(cut.data, fs, name), out / f"{name}.csv")

# +
print(band, "Hz:", BANDS_HZ[band])
code = main([
    "estimate", "--condition1", str(out / "rest.csv"), "--condition2", str(out / "task.csv"),
    "--band", band, "--fs", str(fs), "--method", "all", "--out", str(out / "estimates"),
])
print("exit code", code)

# -
with open(out / "estimates" / "summary.csv") as fh:
    for row in csv.DictReader(fh):
        hz = float(row["frequency"]) * fs / (2 * np.pi)
        print(f"{hz:6.2f} Hz  {row['method']:<6} {row['status']:<6} edges={row['edge_count']}")

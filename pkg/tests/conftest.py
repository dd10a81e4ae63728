import os

import matplotlib

matplotlib.use("Agg", force=True)

# Keep figures and worker pools deterministic regardless of the host.
os.environ.setdefault("MPLBACKEND", "Agg")

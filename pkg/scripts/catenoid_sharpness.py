# %%
import math

import numpy as np

from embedlift import datastore
from embedlift.catalog import catalog_map
from embedlift.criterion import evaluate_main, extremal_diagnostics
from embedlift.export import mesh_export
from embedlift.extension import CanonicalFunction, convexity_check
from embedlift.grid import PolarGrid
from embedlift.logger import init_logger
from embedlift.metric import PullbackMetric, geodesic_ivp
from embedlift.oracle import boundary_trace, detect_extremal_identifications
from embedlift.schwarzian import Inversion

RUN_DIR = datastore.run_dir("catenoid_sharpness")

logger = init_logger(name="catenoid", log_file=RUN_DIR / "catenoid.log", debug=False)

catenoid = catalog_map("catenoid")
metric = PullbackMetric(surface=catenoid, delta=2 * math.pi, domain_radius=None)

#########################################
# criterium op een schijf rond de taille
#########################################

grid = PolarGrid(n_r=32, n_theta=128, radius=2.0, offset=0.0)
report = evaluate_main(catenoid, metric, grid)
report.to_csv(RUN_DIR / "criterion_main.csv")
logger.info(f"verdict {report.verdict}, kleinste marge {np.min(report.margin):.3g}")

# gelijkheid precies op de taille x = 0
locus = np.array(report.equality_locus)
logger.info(f"{len(locus)} punten met gelijkheid, max |x| = {np.max(np.abs(locus[:, 0])):.3g}")

# %%
##############################
# de taille is een extremaal
##############################

waist = geodesic_ivp(metric, 0, math.pi / 2, math.pi)
extremal = extremal_diagnostics(catenoid, metric, waist)
logger.info(f"cirkel met straal {extremal.circle_radius:.6f}, lengteverhouding {extremal.length_ratio:.6f}")

# U'' + U/4 = 0 na inversie in (-1, 0, 0); de geodeet stopt vóór het centrum
canonical = CanonicalFunction(catenoid, metric)
saturated = convexity_check(canonical, geodesic_ivp(metric, 0, math.pi / 2, 3.0), Inversion(center=(-1.0, 0.0, 0.0)))
logger.info(f"min U'' + U/4 = {saturated.min_value:.3g}")

# %%
#######################################
# twee randpunten vallen samen in (-1, 0, 0)
#######################################

trace = boundary_trace(catenoid, metric, z0=0, n_dirs=64, s_max=math.pi)
trace.to_csv(RUN_DIR / "boundary_trace.csv")
for pair in detect_extremal_identifications(trace):
    logger.info(f"θ = {pair.theta1:.4f} en θ = {pair.theta2:.4f} op afstand {pair.distance:.2g}")

mesh_export(catenoid, PolarGrid(n_r=32, n_theta=128, radius=math.pi, offset=0.0), RUN_DIR / "catenoid.obj")

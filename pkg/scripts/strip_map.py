# %%
import numpy as np

from embedlift import datastore
from embedlift.catalog import catalog_map
from embedlift.criterion import evaluate_corollary, implication_check
from embedlift.grid import PolarGrid
from embedlift.logger import init_logger
from embedlift.oracle import surface_collision_scan

RUN_DIR = datastore.run_dir("strip_map")

logger = init_logger(name="strip", log_file=RUN_DIR / "strip.log", debug=False)

grid = PolarGrid(n_r=64, n_theta=256)

####################################
# strook-afbeelding: Nehari is scherp
####################################

strip = catalog_map("strip")
for variant in ("nehari", "pi2", "t2"):
    report = evaluate_corollary(variant, strip, grid)
    report.to_csv(RUN_DIR / f"criterion_{variant}.csv")
    logger.info(f"{variant}: {report.verdict}")

scan = surface_collision_scan(strip, grid)
logger.info(f"strook injectief: {not scan.collision}, kleinste afstand {scan.min_gap:.3g}")

# %%
####################################
# exp(4z): het criterium faalt en de lift botst
####################################

exp4 = catalog_map("exp4")
report = evaluate_corollary("pi2", exp4, grid)
logger.info(f"exp4: {report.verdict}, slechtste punt {report.argmin}")
scan = surface_collision_scan(exp4, grid)
if scan.witness is not None:
    z1, z2 = complex(*scan.witness.z1), complex(*scan.witness.z2)
    logger.info(f"botsing tussen {z1:.4f} en {z2:.4f}, verschil {np.abs(z1 - z2):.6f}")

# %%
####################################
# verzwakte voorwaarde impliceert t = 2
####################################

implication = implication_check(catalog_map("strip_lift"), grid)
logger.info(f"implicatie: {implication.n_violations} schendingen")

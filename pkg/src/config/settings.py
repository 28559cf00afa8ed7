"""Global settings and configuration."""
import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Project root directory
PROJECT_ROOT = Path(__file__).parent.parent.parent

# Directories
DATA_DIR = PROJECT_ROOT / "data"
EXPERIMENT_SUITES_DIR = DATA_DIR / "experiment_suites"
OUTPUT_DIR = Path(os.getenv("NONSTAT_OUTPUT_DIR", str(PROJECT_ROOT / "output")))
LOGS_DIR = Path(os.getenv("NONSTAT_LOGS_DIR", str(PROJECT_ROOT / "logs")))

# Reproducibility
DEFAULT_SEED = int(os.getenv("NONSTAT_SEED", "0"))
DEFAULT_JOBS = int(os.getenv("NONSTAT_JOBS", "1"))

# Logging
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
LOG_FILE = LOGS_DIR / "nonstat.log"

# SSA optimizer
SSA_RESTARTS = int(os.getenv("SSA_RESTARTS", "5"))
SSA_MAX_ITERATIONS = int(os.getenv("SSA_MAX_ITERATIONS", "500"))
SSA_GRADIENT_TOLERANCE = float(os.getenv("SSA_GRADIENT_TOLERANCE", "1e-6"))
SSA_DEFAULT_EPOCHS = int(os.getenv("SSA_DEFAULT_EPOCHS", "30"))
ARMIJO_SLOPE = 1e-4
ARMIJO_CONTRACTION = 0.5
ARMIJO_MAX_HALVINGS = 60

# Stationarity test
P_THRESHOLD = float(os.getenv("P_THRESHOLD", "0.01"))

# Change-point detection
SLCD_EPOCHS = int(os.getenv("SLCD_EPOCHS", "200"))
SIGMA_SUBSAMPLE = 1000

# sLDA
SLDA_EPOCHS = int(os.getenv("SLDA_EPOCHS", "7"))
SLDA_RESTARTS = int(os.getenv("SLDA_RESTARTS", "5"))
SLDA_TOLERANCE = float(os.getenv("SLDA_TOLERANCE", "1e-7"))
SLDA_MAX_ITERATIONS = int(os.getenv("SLDA_MAX_ITERATIONS", "1000"))

# Output settings
JSON_SCHEMA_VERSION = 1
FLOAT_FORMAT = "%.17g"

# Numerical tolerances
EIGEN_RELATIVE_FLOOR = 1e-12
VARIANCE_FLOOR = 1e-12

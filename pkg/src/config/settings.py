import os

from dotenv import load_dotenv

load_dotenv()

DEFAULT_SEED = int(os.getenv("LIEINDEX_SEED")) if os.getenv("LIEINDEX_SEED") else 20240917

# Logging Configuration
LOG_TO_FILE = os.getenv("LIEINDEX_LOG_TO_FILE", "").strip().lower() in ("1", "true", "yes")
LOG_RETENTION_DAYS = 7  # days of dated log directories kept

# index --method randomized|both
RANDOMIZED_RANK_TRIALS = 3
RANDOMIZED_RANK_BOUND = 2 ** 16  # evaluation points drawn from [-bound, bound]^n

# report (characteristic sequence)
SAMPLE_COORD_BOUND = 99  # random vectors and functionals use integers in [-99, 99]
CHARACTERISTIC_SAMPLES = 16
RANDOM_VECTOR_REJECTION_LIMIT = 1000

# regular --find / --family
FIND_REGULAR_MAX_ATTEMPTS = 500
FAMILY_SAMPLES = 20
MINOR_GUARD = 10 ** 6  # refuse minor enumeration when C(n, r)^2 exceeds this

# deform
DEFAULT_T_SAMPLES = ("1", "2", "1/3")
DEFORMATION_MIN_SAMPLES = 3

# --json
REPORT_SCHEMA_VERSION = 1

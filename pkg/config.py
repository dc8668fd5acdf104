import os
import math

from dotenv import load_dotenv

load_dotenv()


class Config:
    # App Configuration
    APP_TITLE = "cvbell"
    APP_DESCRIPTION = """
    Analyze two-mode Gaussian states from their covariance matrices: physicality,
    purity, PHS / Duan / Reid criteria, the CHSH parity Bell function and its
    behaviour through a lossy channel.
    """

    # Logging
    LOG_LEVEL = os.getenv("CVE_LOG_LEVEL", "INFO")
    LOG_FILE = os.getenv("CVE_LOG_FILE", "logs/cvbell.log")

    # Tolerances
    TOLERANCE = float(os.getenv("CVE_TOLERANCE", "1e-9"))  # saturated comparisons, relative
    ORACLE_TOLERANCE = 1e-12  # closed form vs Wigner combination, relative
    MAXIMIZATION_TOLERANCE = 1e-9  # analytic vs golden-section maximum, absolute
    SINGULAR_DET = 1e-300

    # Vacuum variance convention: [X, Y] = i
    VACUUM_VARIANCE = 0.5
    LOCAL_BOUND = 2.0

    # Numeric maximization / root finding
    GOLDEN_TOL = 1e-12
    GOLDEN_BRACKET_SCALE = 10.0
    BISECTION_XTOL = 1e-9
    THRESHOLD_STEP = 0.01
    MONOTONICITY_SCAN = 50

    # Homodyne simulation
    SETTING_PHASES = (0.0, math.pi / 4, math.pi / 2)
    DEFAULT_SAMPLES = 100000
    DEFAULT_SEED = 2012
    BOOTSTRAP_REPLICATES = 20
    SIGNIFICANCE_SIGMAS = 3.0
    EXPERIMENTAL_TRANSMITTIVITY = 0.63  # OPO-to-detector transmission of a good tabletop setup

    # CLI defaults
    DEFAULT_RESOLUTION = 200
    DEFAULT_T_MIN = 0.5
    DEFAULT_T_MAX = 1.0
    DEFAULT_STEPS = 51
    DEFAULT_TRIALS = 1000
    ORACLE_INTENSITIES = 10

    # Output
    SIGNIFICANT_DIGITS = 12
    FLOAT_FORMAT = "%.12g"
    OUTPUT_PATH = "data/output"
    STATES_PATH = "data/states"

    REGION_COLUMNS = ["mu_s", "C_ab", "B_max", "region"]
    SWEEP_COLUMNS = [
        "T", "n_T", "c_T", "mu_s", "C_ab", "purity",
        "phs", "duan", "reid", "bell_max", "region"
    ]
    DATASET_COLUMNS = ["setting", "mode", "theta", "offset", "sample"]

    # CLI exit codes
    EXIT_OK = 0
    EXIT_INPUT_ERROR = 2
    EXIT_UNPHYSICAL = 3
    EXIT_PRECONDITION = 4
    EXIT_ORACLE_FAILURE = 5

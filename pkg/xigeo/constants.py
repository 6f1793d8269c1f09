"""
Constants used in xigeo: grid limits, tolerances, environment variables, identity names, CLI codes etc.
"""


class GRID:
    """
    Sampling grid constants
    """
    MIN_SAMPLES = 8
    DEFAULT_SAMPLES = 64
    SCAN_SAMPLES = 16
    U_AXIS = 0
    V_AXIS = 1
    AXIS_NAMES = {"u": U_AXIS, "v": V_AXIS}


class TOLERANCES:
    """
    Default tolerances, all relative/normalized unless stated otherwise
    """
    LAGRANGIAN = 1e-8
    XI = 1e-6
    IDENTITY = 1e-6
    DET_G_MIN = 1e-12
    FLATNESS = 1e-6
    CONDITION_ZERO = 1e-9
    CERTIFICATION = 1e-6
    CLOSURE_CERTIFY = 1e-8
    CLOSURE_ACCEPT = 1e-6
    STEP_ERROR = 1e-8
    ORIGIN_CLEARANCE = 1e-6
    ARCLENGTH = 1e-8
    FAMILY_MATCH = 1e-6
    MASLOV_INTEGRALITY = 1e-3
    CONSTANCY = 1e-8


class ENV_VARIABLES:
    """
    Environment variable names (accessible in os.environ)
    """
    TOL_LAGRANGIAN_ENV_VAR = "XIGEO_TOL_LAGRANGIAN"
    TOL_XI_ENV_VAR = "XIGEO_TOL_XI"
    TOL_IDENTITY_ENV_VAR = "XIGEO_TOL_IDENTITY"
    LOG_LEVEL_ENV_VAR = "XIGEO_LOG_LEVEL"


class LOGGING:
    """
    Log format shared by the CLI and the test configuration
    """
    FORMAT = "%(asctime)s [%(levelname)8s] %(message)s (%(filename)s:%(lineno)s)"
    DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
    DEFAULT_LEVEL = "WARNING"


class IDENTITIES:
    """
    Identity ids understood by xi.verify_identity
    """
    EQ_2_17 = "eq2.17"
    EQ_2_18 = "eq2.18"
    EQ_3_2 = "eq3.2"
    EQ_3_3 = "eq3.3"
    LEM_3_2 = "lem3.2"
    LEM_3_3 = "lem3.3"
    LEM_3_4 = "lem3.4"
    LEM_3_5A = "lem3.5a"
    LEM_3_5B = "lem3.5b"
    THM_2_1 = "thm2.1"
    GAUSS = "gauss"
    RICCI = "ricci"
    CODAZZI = "codazzi"
    EQ_2_13 = "eq2.13"
    MOTION = "motion"
    EQ_2_10 = "eq2.10"
    RICCI_IDENTITY = "ricci_identity"
    CUBIC_SYMMETRY = "cubic_symmetry"
    XI_ONLY = [EQ_2_17, EQ_2_18, EQ_3_2, EQ_3_3, LEM_3_2, LEM_3_3, LEM_3_4, LEM_3_5A, LEM_3_5B]
    CURVATURE = [GAUSS, RICCI, CODAZZI, EQ_2_13, MOTION, EQ_2_10, RICCI_IDENTITY, CUBIC_SYMMETRY]
    GENERAL = [THM_2_1] + CURVATURE
    ALL = XI_ONLY + GENERAL


class FAMILIES:
    """
    Surface family tags used as provenance and on the command line
    """
    PRODUCT_TORUS = "product-torus"
    PRODUCT_ELLIPSE = "product-ellipse"
    PRODUCT_CURVES = "product-curves"
    EQUIVARIANT = "equivariant"
    EQUIVARIANT_ELLIPSE = "equivariant-ellipse"
    PRODUCT_XI = "product-xi"
    CUSTOM = "custom"
    EXTERNAL = "external"
    CLI_FAMILIES = [PRODUCT_TORUS, PRODUCT_ELLIPSE, EQUIVARIANT_ELLIPSE]


class CURVES:
    """
    Lambda-curve integration and shooting constants
    """
    DEFAULT_DS = 1e-3
    MAX_DS = 1e-2
    DEFAULT_SAMPLES = 128
    ROOT_XTOL = 1e-14
    ROOT_MAXITER = 200
    ARCLENGTH_OVERSAMPLE = 8
    NEWTON_MAXITER = 50
    MIN_AMPLITUDE = 1e-6
    APEX_SEARCH_LENGTH = 60.0


class CSV:
    """
    CSV artifact constants
    """
    FLOAT_FORMAT = "%.17g"
    LINE_TERMINATOR = "\n"
    SCAN_COLUMNS = ["a", "b", "h2", "H2", "Hxi", "P_max", "c1", "c2", "c3", "c4", "region"]


class REPORT:
    """
    Report document constants
    """
    METADATA = "metadata"
    BODY = "body"
    STATUS_FOUND = "found"
    STATUS_NOT_FOUND = "not-found"
    JSON_INDENT = 2


class EXIT_CODES:
    """
    Process exit codes of the xigeo command
    """
    SUCCESS = 0
    USAGE = 2
    NUMERIC = 3
    VERIFICATION = 4

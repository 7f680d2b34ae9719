FUNCTION_FAMILY_ATTR_NAME = '_lab_function_family_info'
MATRIX_FAMILY_ATTR_NAME = '_lab_matrix_family_info'
MODULUS_FAMILY_ATTR_NAME = '_lab_modulus_family_info'

DEFAULT_GRID_SIZE = 2048
MIN_GRID_SIZE = 64
CROSSING_NEWTON_STEPS = 4

MODULUS_SAMPLES = 512
MODULUS_T_MIN = 2 * 3.141592653589793 * 2.0 ** -30
MODULUS_CHECK_POINTS = 256
MODULUS_RANDOM_PAIRS = 100

SINGULARITY_GUARD = 1e-8
TAIL_TOLERANCE = 1e-12
QUADRATURE_TOLERANCE = 1e-8
CONVERGENCE_TOLERANCE = 1e-6
EPSILON_STEPS = 14

STABILITY_FACTOR = 2.0
STABILITY_SLACK = 1e-12
IMPROPER_BLOCKS = 8
IMPROPER_BLOCK_OCTAVES = 16

DEFAULT_N_VALUES = (8, 16, 32, 64, 128, 256)
MIN_FIT_POINTS = 4
RATIO_GROWTH_LIMIT = 1.25

DEFAULT_SEED = 20160912

OUTPUT_DIR_ENV = 'SUMMABILITY_LAB_OUTPUT_DIR'
LOG_LEVEL_ENV = 'SUMMABILITY_LAB_LOG_LEVEL'

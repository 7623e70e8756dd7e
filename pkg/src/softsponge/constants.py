"""Global constants for the softsponge TRNG."""

# ── TDC / entropy source ──
TDC_BITS = 12
"""Width of one digitized path delay."""

TDC_MAX = (1 << TDC_BITS) - 1
"""Largest representable TDC count (4095)."""

TDC_PS_PER_COUNT = 18.0
"""Approximate TDC resolution in picoseconds per count."""

CALIBRATED_MIN_COUNTS = 300.0
"""Calibrated TDC count of the fastest achievable path."""

CALIBRATED_MAX_COUNTS = 1000.0
"""Calibrated TDC count of the slowest achievable path."""

DEFAULT_ROWS = 3
DEFAULT_COLS = 2
DEFAULT_SEGMENTS_PER_STAGE = 80

DEFAULT_NOISE_SIGMA = 1.0
"""Default measurement noise in TDC counts."""

PATHS_PER_CHALLENGE = 32
CHALLENGES_PER_PHASE = 128
MEASUREMENTS_PER_PHASE = PATHS_PER_CHALLENGE * CHALLENGES_PER_PHASE
SET_SIZE = MEASUREMENTS_PER_PHASE // 2
"""Elements in each of DV_A and DV_B (2048)."""

# ── LFSRs ──
LFSR64_TAPS = (64, 63, 61, 60)
"""Maximal-length Fibonacci taps for the challenge generator."""

SELECTOR_BITS = 11
SELECTOR_TAPS = (11, 2)
"""Taps of x^11 + x^2 + 1 for the DVDiff selectors."""

SELECTOR_STATES = 1 << SELECTOR_BITS

BOOTSTRAP_SEED = 1
"""Challenge-LFSR seed used by every boot-strap timing phase."""

# ── Nonce ──
NONCE_GROUP = 12
"""Measurement LSBs XOR'ed into one nonce bit."""

NONCE_BITS = MEASUREMENTS_PER_PHASE // NONCE_GROUP
SEED_WINDOW = (0, 64)
PARAM_WINDOW = (64, 244)
RESERVE_WINDOW = (244, NONCE_BITS)
PARAM_SLOTS = 20
"""Parameter slots; RC/TCC recur with this period."""

RC_MIN = 128
RC_MAX = 191
TCC_MIN = 8
TCC_MAX = 22
DEFAULT_FIXED_RC = 168
DEFAULT_FIXED_TCC = 18

# ── Sponge ──
FRACTION_BITS = 4
"""Fractional bits of the sponge fixed-point format."""

FIXED_ONE = 1 << FRACTION_BITS
SF_LIMIT = 64
"""Spread factors live in [-SF_LIMIT, SF_LIMIT)."""

ITERATIONS_PER_CYCLE = SET_SIZE
BITS_PER_CYCLE = ITERATIONS_PER_CYCLE * SET_SIZE
"""Bits squeezed from one timing phase (2^22)."""

GPEV_TRIM_NUM = 19
GPEV_TRIM_DEN = 20
"""Bounded max/min keep 95% of the extreme values."""

GPEV_LITERAL_MIN_NUM = 21
"""Literal-bounds variant scales the minimum by 1.05."""

# ── Statistics ──
DEFAULT_PERMUTATIONS = 10_000
CI_PERMUTATIONS = 1_000
DEFAULT_PCC_PAIRS = 100_000
PCC_ALL_PAIRS_MAX_SETS = 2048
"""Largest set count scanned exhaustively under 'auto' sampling."""

PCC_HISTOGRAM_BINS = 64
PCC_REPORT_THRESHOLD = 0.5
UNIFORMITY_BINS = 64

# ── CLI exit codes ──
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_DEGENERATE = 3
EXIT_IO = 4
EXIT_PIPE_CLOSED = 5

MAX_RESPONSE_CHARS = 50_000
"""Maximum characters in an MCP response before list fields are trimmed."""

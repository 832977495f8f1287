# Cover degrees that carry a weight. Doubling couples a base at degree 2d
# with its child at degree d, so the universe is closed under halving.
DEGREES = (1, 2, 4, 8, 16)
assert all(d // 2 in DEGREES for d in DEGREES if d > 1), (
    "Degree universe must be closed under halving."
)

# Largest exponent of the solved weight table: degrees 2 .. 2^MAX_POWER.
MAX_POWER = 4
assert 2**MAX_POWER == DEGREES[-1], "Solver and degree universe disagree."

# Randomized scenarios stay small so every interval is evaluated exactly.
MAX_EVENTS = 10
MAX_STRANDS = 8

# Event times of randomized scenarios are multiples of 1/TIME_GRID.
TIME_GRID = 1000

# Smallest jet degree at which the rank bound is claimed: l >= 10*d + 6
# for a kernel element of degree d.
THRESHOLD_SLOPE = 10
THRESHOLD_OFFSET = 6

# Number of seeded random kernel combinations checked per degree, on top
# of the kernel basis itself.
SAMPLES_PER_DEGREE = 5

# Random combination coefficients are p/q with 1 <= |p| <= 9, 1 <= q <= 5.
SAMPLE_NUMERATOR_MAX = 9
SAMPLE_DENOMINATOR_MAX = 5


def min_jet_degree(d: int) -> int:
    """Smallest l for which `verify_wendl_bound` accepts a degree-d element."""
    return THRESHOLD_SLOPE * d + THRESHOLD_OFFSET

import os

from mtc.errors import ConfigError

# Seed for every seeded randomizer (kernel samples, random operators,
# random scenarios) unless overridden.
DEFAULT_SEED = 20240611
SEED_ENV_VAR = "MTC_SEED"


def resolve_seed(seed: int | None = None) -> int:
    """Return the randomizer seed to use.

    An explicit `seed` wins, then the `MTC_SEED` environment variable,
    then `DEFAULT_SEED`.

    """
    if seed is not None:
        return seed

    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None or raw == "":
        return DEFAULT_SEED
    try:
        value = int(raw, 10)
    except ValueError:
        raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got: {raw!r}") from None
    if value < 0:
        raise ConfigError(f"{SEED_ENV_VAR} must be non-negative, got: {value}")
    return value

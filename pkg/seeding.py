import hashlib

import numpy as np


def derive_seed(*parts) -> int:
    """
    Derives a stable 63-bit seed from arbitrary parts.

    Python's hash() is salted per process, so seeds go through sha256 of the
    parts' string forms instead.

    Args:
        *parts: Values identifying the random stream (seed, learner, day, item...).

    Returns:
        int: Non-negative seed usable by numpy.random.default_rng.
    """
    text = "\x1f".join(str(part) for part in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def rng_for(*parts) -> np.random.Generator:
    return np.random.default_rng(derive_seed(*parts))

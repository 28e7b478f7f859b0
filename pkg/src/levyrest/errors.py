"""Exception types shared across the package."""


class HorizonExceeded(ValueError):
    """A query lies beyond what the simulated steps or jumps cover."""


class ScalingMismatch(ValueError):
    """Scaling exponents disagree with the coupling's limit case."""


class UnsupportedCoupling(ValueError):
    """Independent rests with equal tail indices (no limit theorem covers it)."""

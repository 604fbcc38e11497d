"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside an operation's stated domain."""


class NumericError(RuntimeError):
    """A numeric procedure failed to converge or to bracket a root."""


class StructureError(ValueError):
    """Inputs violate a structural requirement (e.g. a theorem needing a
    common scale parameter was given heterogeneous ones)."""


class ScenarioError(ValueError):
    """A scenario document or CLI input failed validation."""

"""Exception taxonomy shared across the package."""


class StirapError(Exception):
    """Base class for all domain errors raised by this package."""


class PulseRoleError(StirapError):
    """A pulse role is missing or appears more than once."""


class DegenerateCase(StirapError):
    """All dark-state components vanish; no usable null eigenvector."""


class AccidentalNullSpace(StirapError):
    """Extra null eigenstates appear (Stokes/branching cross products coincide)."""


class NoPositiveWidth(StirapError):
    """The width-matching equation admits no positive control-pulse width."""


class ZeroDipole(StirapError):
    """A dipole moment required by the amplitude equation vanishes."""


class RestrictionViolated(StirapError):
    """The dipole-ratio restriction fails; branching control is impossible."""


class GridTooCoarse(StirapError):
    """Step-halving did not converge within the allowed refinement rounds."""


class IndeterminateBranching(StirapError):
    """Both target populations are numerically zero; no branching ratio."""


class ConfigError(StirapError):
    """An experiment configuration file is malformed."""

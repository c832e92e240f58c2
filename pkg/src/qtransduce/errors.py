"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of a formula."""


class NoSolutionError(ValueError):
    """An inverse problem has no real solution."""


class UnsupportedRegimeError(ValueError):
    """The requested parameters fall outside the modelled regime."""


class CutoffError(ValueError):
    """A Fock-space operation would populate states above the cutoff."""


class ResourceError(RuntimeError):
    """A protocol step is missing a required entanglement resource."""


class ConfigError(ValueError):
    """A configuration file or grid specification is invalid."""

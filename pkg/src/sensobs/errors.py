class ConfigurationError(ValueError):
    """Invalid model, file or argument (dimension mismatch, bad field...)."""


class SchemaError(ConfigurationError):
    """A description file failed to parse or validate.

    ``source`` and ``line`` locate the offending entry when known.
    """

    def __init__(self, message, source=None, line=None, field=None):
        self.source = source
        self.line = line
        self.field = field
        where = ""
        if source is not None:
            where = f"{source}:"
        if line is not None:
            where += f"{line}:"
        if field:
            message = f"{field}: {message}"
        super().__init__(f"{where} {message}" if where else message)


class UnsupportedChainError(ConfigurationError):
    """Operation not defined for this chain (e.g. prismatic joints)."""

class ContractViolation(ValueError):
    """An operation was called outside its documented preconditions."""


class MalformedInputError(ValueError):
    """A sequence or pair file does not follow the text format."""

    def __init__(self, path, lineno, rule):
        self.path = str(path)
        self.lineno = lineno
        self.rule = rule
        super().__init__(f"{self.path}:{lineno}: {rule}")

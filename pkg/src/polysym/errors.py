"""Exception types shared across the package.

ValidationError covers malformed input (shapes, schemas, unknown names) and
maps to CLI exit code 2. ContractViolation covers semantically invalid input
to an otherwise well-formed request (degenerate form where a nondegenerate
one is required, containment failures, vacuous counterexample setups) and
maps to CLI exit code 1.
"""


class ValidationError(ValueError):
    pass


class ContractViolation(ValueError):
    pass

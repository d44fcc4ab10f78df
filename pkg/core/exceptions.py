"""
Exceptions shared by all modules
File: core/exceptions.py
"""

from typing import Optional, Sequence


class InputError(ValueError):
    """Malformed or out-of-contract input (CLI exit code 2)"""
    pass


class NotBracketGeneratingError(InputError):
    """Raised when the derived flag stalls below full rank at a point"""

    def __init__(self, message: str, growth: Optional[Sequence[int]] = None):
        super().__init__(message)
        self.growth = tuple(growth or ())

    def __str__(self):
        base = super().__str__()
        if self.growth:
            return f"{base} (growth vector {list(self.growth)})"
        return base

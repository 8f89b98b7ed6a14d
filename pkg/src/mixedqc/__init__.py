"""Mixed-state quantum computation toolkit: one-clean-qubit states, their
negativity and discord, operator Schmidt ranks and classical path-sum traces."""

__version__ = "0.1.0"

from .qstate import BipartiteSplit  # noqa: E402,F401

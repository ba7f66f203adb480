"""Qubit register handles and classical state values.

A handle is a plain immutable value (registry index, offset, length) and is
safe to copy between host and device. Indexing a handle yields a single-qubit
view into the same register; views never own the underlying allocation.

Classical measurement outcomes (cstates) are small integers. 0 and 1 are the
only valid outcomes; any negative value marks "unset", with CSTATE_INVALID
(-1) as the canonical sentinel used by the runtime.
"""

from __future__ import annotations

from dataclasses import dataclass

CSTATE_INVALID = -1


def is_valid_cstate(value: int) -> bool:
    """True only for a definite measurement outcome (0 or 1)."""
    return isinstance(value, int) and value in (0, 1)


@dataclass(frozen=True)
class QubitHandle:
    """View of ``n`` qubits starting at ``offset`` inside one register."""

    registry_index: int
    offset: int
    n: int

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> "QubitHandle":
        if not isinstance(i, int) or isinstance(i, bool):
            raise TypeError("qubit index must be an integer")
        if i < 0:
            i += self.n
        if not 0 <= i < self.n:
            raise IndexError(f"qubit index {i} out of range for {self.n}-qubit handle")
        return QubitHandle(self.registry_index, self.offset + i, 1)

    def __iter__(self):
        for i in range(self.n):
            yield self[i]

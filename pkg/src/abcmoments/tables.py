"""Row containers shared by the sweep/verification code and the CLI."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .model import State

Value = Union[float, Fraction, None]


@dataclass(frozen=True)
class MomentRow:
    state: State
    lam: int
    engine_value: Value
    oracle_value: Value = None
    rel_err: Optional[float] = None
    status: str = "ok"


@dataclass
class MomentTable:
    rows: list = field(default_factory=list)

    def append(self, row: MomentRow) -> None:
        self.rows.append(row)

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)

    def column(self, name):
        return [getattr(r, name) for r in self.rows]

"""Validation reports shared by every checker."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np


class MalformedTableError(ValueError):
    """A table has the wrong shape or an entry outside the element range."""

    def __init__(self, message: str, row: int | None = None, col: int | None = None):
        super().__init__(message)
        self.row = row
        self.col = col


class InternalInconsistencyError(RuntimeError):
    """A construction produced data that contradicts one of its own invariants.

    For valid inputs this cannot happen; it signals corrupt input tables or a
    bug. ``report`` carries the failing checks when available.
    """

    def __init__(self, message: str, report: "ValidationReport | None" = None):
        super().__init__(message)
        self.report = report


@dataclass
class CheckResult:
    name: str
    passed: bool
    checked: int
    total: int
    mode: str = "exhaustive"
    witness: tuple[int, ...] | None = None
    law: str = ""
    detail: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "total": self.total,
            "mode": self.mode,
            "witness": list(self.witness) if self.witness is not None else None,
            "law": self.law,
            "detail": self.detail,
        }


@dataclass
class ValidationReport:
    subject: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def names(self) -> list[str]:
        return [c.name for c in self.checks]

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(c.name == name for c in self.checks)

    def add(
        self,
        name: str,
        witness: tuple[int, ...] | None,
        checked: int,
        total: int | None = None,
        *,
        mode: str = "exhaustive",
        law: str = "",
        detail: str = "",
    ) -> CheckResult:
        result = CheckResult(
            name=name,
            passed=witness is None,
            checked=checked,
            total=checked if total is None else total,
            mode=mode,
            witness=None if witness is None else tuple(int(w) for w in witness),
            law=law,
            detail=detail,
        )
        self.checks.append(result)
        return result

    def extend(self, other: "ValidationReport", prefix: str = "") -> "ValidationReport":
        for c in other.checks:
            self.checks.append(
                CheckResult(prefix + c.name, c.passed, c.checked, c.total, c.mode, c.witness, c.law, c.detail)
            )
        return self

    def raise_on_failure(self, message: str | None = None) -> "ValidationReport":
        if not self.passed:
            first = self.failures()[0]
            raise InternalInconsistencyError(
                message or f"{self.subject}: {first.name} fails at {first.witness}", self
            )
        return self

    def to_dict(self) -> dict[str, Any]:
        return {
            "subject": self.subject,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }

    def render(self) -> str:
        lines = [f"{self.subject}: {'PASS' if self.passed else 'FAIL'}"]
        width = max((len(c.name) for c in self.checks), default=0)
        for c in self.checks:
            status = "pass" if c.passed else "FAIL"
            line = f"  {c.name:<{width}}  {status}  {c.mode:<10} {c.checked}/{c.total}"
            if c.witness is not None:
                line += f"  witness={c.witness}"
            if c.detail:
                line += f"  ({c.detail})"
            lines.append(line)
        return "\n".join(lines)


def first_witness(mask) -> tuple[tuple[int, ...] | None, int]:
    """Lexicographically least True position of a boolean array.

    Returns ``(witness, checked)`` where ``checked`` counts the tuples up to and
    including the witness (all of them when there is none).
    """
    mask = np.asarray(mask, dtype=bool)
    flat = mask.ravel()
    if flat.size == 0:
        return None, 0
    i = int(np.argmax(flat))
    if not flat[i]:
        return None, int(flat.size)
    return tuple(int(v) for v in np.unravel_index(i, mask.shape)), i + 1


def first_witness_sliced(mask_fn, n: int, arity: int) -> tuple[tuple[int, ...] | None, int]:
    """:func:`first_witness` over ``n**arity`` tuples, one leading coordinate at a time.

    ``mask_fn(i)`` returns the violation mask of shape ``(n,) * (arity - 1)`` for
    leading coordinate ``i``.
    """
    block = n ** (arity - 1)
    for i in range(n):
        w, k = first_witness(mask_fn(i))
        if w is not None:
            return (i, *w), i * block + k
    return None, n**arity

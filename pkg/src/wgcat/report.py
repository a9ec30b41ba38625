"""Clause-tagged verdicts shared by every checker."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .labels import label


@dataclass(frozen=True)
class Report:
    ok: bool
    clause: str = ""
    path: tuple = ()
    detail: str = ""
    witness: tuple = ()
    truncation: int | None = None
    children: tuple = field(default=())

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"ok": self.ok}
        if self.clause:
            out["clause"] = self.clause
        if self.path:
            out["path"] = [label(p) for p in self.path]
        if self.detail:
            out["detail"] = self.detail
        if self.witness:
            out["witness"] = [label(w) for w in self.witness]
        if self.truncation is not None:
            out["truncation"] = self.truncation
        if self.children:
            out["checked"] = [c.to_json() for c in self.children]
        return out


def passed(clause: str = "", truncation: int | None = None, children=()) -> Report:
    return Report(True, clause=clause, truncation=truncation, children=tuple(children))


def failed(clause: str, detail: str = "", path=(), witness=(), truncation=None) -> Report:
    return Report(False, clause=clause, path=tuple(path), detail=detail,
                  witness=tuple(witness), truncation=truncation)


def prefixed(rep: Report, step) -> Report:
    """Push a path component onto a failing report."""
    if rep.ok:
        return rep
    return Report(False, rep.clause, (step,) + rep.path, rep.detail, rep.witness,
                  rep.truncation, rep.children)


class WgcatError(Exception):
    """Base error; ``kind`` names the failure class."""

    kind = "error"


class MalformedError(WgcatError):
    kind = "malformed"


class PreconditionError(WgcatError):
    kind = "precondition"


class GuardError(WgcatError):
    kind = "guard"

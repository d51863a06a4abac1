"""The line-oriented ``.dfa`` format.

::

    # comment lines start with '#'
    dfa <n> <k>
    initial 1
    finals <1-based state ids, possibly none>
    <k targets of state 1>
    ...
    <k targets of state n>

A target of ``0`` marks an undefined transition; any such entry makes the
structure partial.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import numpy as np

from .automata import UNDEFINED, Dfa, PartialTransitionStructure, TransitionStructure

LETTERS = "abcdefghijklmnopqrstuvwxyz"


class DfaFormatError(ValueError):
    pass


def format_dfa(dfa: Dfa) -> str:
    lines = [f"dfa {dfa.n} {dfa.k}", "initial 1",
             " ".join(["finals"] + [str(s + 1) for s in sorted(dfa.finals)])]
    for row in dfa.table.tolist():
        lines.append(" ".join(str(q + 1) for q in row))
    return "\n".join(lines) + "\n"


def parse_dfa(text: str) -> Dfa:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if len(lines) < 3:
        raise DfaFormatError("truncated .dfa input")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "dfa":
        raise DfaFormatError("first line must be 'dfa <n> <k>'")
    try:
        n, k = int(head[1]), int(head[2])
    except ValueError:
        raise DfaFormatError("n and k must be integers") from None
    if n < 1 or k < 1:
        raise DfaFormatError("n and k must be positive")
    if lines[1].split() != ["initial", "1"]:
        raise DfaFormatError("second line must be 'initial 1'")
    fin = lines[2].split()
    if not fin or fin[0] != "finals":
        raise DfaFormatError("third line must start with 'finals'")
    finals = [_int(tok, 1, n, "final state") - 1 for tok in fin[1:]]
    body = lines[3:]
    if len(body) != n:
        raise DfaFormatError(f"expected {n} transition rows, found {len(body)}")
    table = np.empty((n, k), dtype=np.int64)
    for i, line in enumerate(body):
        toks = line.split()
        if len(toks) != k:
            raise DfaFormatError(f"row {i + 1} needs {k} targets")
        for a, tok in enumerate(toks):
            table[i, a] = _int(tok, 0, n, "target") - 1
    if (table == UNDEFINED).any():
        return Dfa(PartialTransitionStructure(table), finals)
    return Dfa(TransitionStructure(table), finals)


def _int(tok: str, lo: int, hi: int, what: str) -> int:
    try:
        v = int(tok)
    except ValueError:
        raise DfaFormatError(f"{what} {tok!r} is not an integer") from None
    if not lo <= v <= hi:
        raise DfaFormatError(f"{what} {v} outside {lo}..{hi}")
    return v


def read_dfa(path) -> Dfa:
    return parse_dfa(Path(path).read_text(encoding="utf-8"))


def write_dfa(dfa: Dfa, path) -> None:
    Path(path).write_text(format_dfa(dfa), encoding="utf-8")


def word_to_str(word: Sequence[int]) -> str:
    return "".join(LETTERS[a] for a in word)


def str_to_word(s: str) -> tuple[int, ...]:
    try:
        return tuple(LETTERS.index(c) for c in s)
    except ValueError:
        raise DfaFormatError(f"word {s!r} uses a letter outside a..z") from None

from __future__ import annotations

from dataclasses import dataclass, field

from .automata import Dfa


@dataclass(frozen=True)
class MinimizeReport:
    """Outcome of one minimization run.

    ``iterations`` means main-loop rounds for Moore, worklist extractions for
    Hopcroft, and 0 for the algorithms without a refinement loop.
    ``operations`` is the algorithm's own work counter (see each minimizer).
    """

    minimal: Dfa
    iterations: int
    input_n: int
    algo: str
    elapsed_ns: int
    operations: int = 0
    round_operations: tuple[int, ...] = field(default=(), repr=False)

    @property
    def minimal_size(self) -> int:
        return self.minimal.n

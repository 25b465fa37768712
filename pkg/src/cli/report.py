"""Run options and the report every command produces."""

from dataclasses import dataclass, field as dataclass_field
from typing import Callable, List, Optional

from config.config import DEFAULT_LIMITS, SEED, Limits
from graded.ring import DegreeWindow

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_INCONCLUSIVE = 3


@dataclass
class RunOptions:
    """Command parameters; ``window`` stays ``None`` unless given, so each command can pick its own."""

    window: Optional[DegreeWindow] = None
    limits: Limits = DEFAULT_LIMITS
    twists: DegreeWindow = DegreeWindow(0, 4)
    max_h: int = 1
    limit: int = 4
    level: int = 0
    depth: Optional[int] = None
    module: Optional[str] = None
    scenario: Optional[str] = None
    pattern: Optional[str] = None
    suite: str = "all"
    seed: int = SEED
    include_slow: bool = False
    field: Optional[str] = None
    log_function: Optional[Callable[[str], None]] = None


@dataclass
class Report:
    """``verdict`` is ``None`` for plain computations and a bool for checks."""

    command: str
    verdict: Optional[bool] = None
    window: Optional[str] = None
    entries: List[dict] = dataclass_field(default_factory=list)
    certificates: List[dict] = dataclass_field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "verdict": self.verdict,
            "window": self.window,
            "entries": list(self.entries),
            "certificates": list(self.certificates),
        }

    @property
    def exit_code(self) -> int:
        return EXIT_FAILED if self.verdict is False else EXIT_OK

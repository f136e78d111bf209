"""Queue model parameters and light schedules."""

from enum import Enum
from fractions import Fraction

from pydantic import BaseModel, ConfigDict, field_serializer, field_validator


class ModelError(ValueError):
    """Raised for invalid model parameters."""


class ContractViolationError(RuntimeError):
    """Raised when an operation is called outside its contract."""


class Phase(str, Enum):
    """Light phase at a step."""

    RED = 'R'  # arrivals only
    GREEN = 'G'  # departures only


class Purpose(str, Enum):
    """What a parameter set is going to be used for."""

    SIMULATION = 'simulation'
    ASYMPTOTICS = 'asymptotics'


def _primitive_period(word: str) -> str:
    """Shortest word whose repetition gives the same infinite phase sequence."""
    n = len(word)
    for size in range(1, n + 1):
        if n % size == 0 and word[:size] * (n // size) == word:
            return word[:size]
    return word


class Schedule(BaseModel):
    """Red/green light schedule.

    A deterministic schedule is stored as the primitive period of its phase
    word, so ``block:2``, ``pattern:RRGG`` and ``pattern:RRGGRRGG`` are the
    same value. ``word=None`` denotes random lights (an independent fair coin
    per step).

    Attributes:
        word: Period over {R, G}, or None for random lights.
    """

    model_config = ConfigDict(frozen=True)

    word: str | None = None

    @field_validator('word')
    @classmethod
    def _normalize_word(cls, word: str | None) -> str | None:
        if word is None:
            return None
        if not word:
            raise ValueError('Schedule pattern must be nonempty')
        bad = [c for c in word if c not in 'RG']
        if bad:
            raise ValueError(f'Invalid phase character {bad[0]!r} in pattern {word!r}')
        return _primitive_period(word)

    @classmethod
    def blocks(cls, ell: int) -> 'Schedule':
        """ℓ red steps followed by ℓ green steps, repeated."""
        if ell < 1:
            raise ModelError(f'Block length must be at least 1, got {ell}')
        return cls(word='R' * ell + 'G' * ell)

    @classmethod
    def pattern(cls, word: str) -> 'Schedule':
        """Repeat an arbitrary phase word."""
        return cls(word=word)

    @classmethod
    def random_lights(cls) -> 'Schedule':
        """Independent Bernoulli(1/2) light per step."""
        return cls(word=None)

    @property
    def is_random(self) -> bool:
        return self.word is None

    @property
    def block_length(self) -> int | None:
        """ℓ when the schedule is R^ℓ G^ℓ repeated, else None."""
        if self.word is None or len(self.word) % 2:
            return None
        ell = len(self.word) // 2
        if self.word == 'R' * ell + 'G' * ell:
            return ell
        return None

    @property
    def is_blocks(self) -> bool:
        return self.block_length is not None

    @property
    def period(self) -> int:
        """Length of the repeating phase word (1 for random lights)."""
        return len(self.word) if self.word is not None else 1

    @property
    def is_degenerate(self) -> bool:
        """True for deterministic words lacking either a red or a green phase."""
        return self.word is not None and ('R' not in self.word or 'G' not in self.word)

    @property
    def phases(self) -> tuple[Phase, ...]:
        """One period of phases."""
        if self.word is None:
            raise ContractViolationError('Random lights have no deterministic phase sequence')
        return tuple(Phase(c) for c in self.word)

    def red_count(self, n: int) -> int:
        """Number of red steps among 1..n (an upper bound on M_n)."""
        if self.word is None:
            return n
        full, rest = divmod(n, len(self.word))
        return full * self.word.count('R') + self.word[:rest].count('R')

    def render(self) -> str:
        """Canonical text spelling accepted by ``parse_schedule``."""
        if self.word is None:
            return 'random'
        ell = self.block_length
        if ell is not None:
            return f'block:{ell}'
        return f'pattern:{self.word}'

    def __str__(self) -> str:
        return self.render()


class ModelParams(BaseModel):
    """Arrival probability and block length.

    ``p`` is kept exact when given as a Fraction; the spectral and recognition
    paths require that. ``q`` is always ``1 - p`` in the same arithmetic.

    Attributes:
        p: Arrival probability per step.
        ell: Block length (ignored by pattern and random schedules).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    p: Fraction | float
    ell: int = 1

    @field_validator('p', mode='before')
    @classmethod
    def _check_p(cls, p: Fraction | float) -> Fraction | float:
        if isinstance(p, int) and not isinstance(p, bool):
            p = Fraction(p)
        if not 0 <= p <= 1:
            raise ValueError(f'p must lie in [0, 1], got {p}')
        return p

    @field_validator('ell')
    @classmethod
    def _check_ell(cls, ell: int) -> int:
        if ell < 1:
            raise ValueError(f'ell must be at least 1, got {ell}')
        return ell

    @field_serializer('p')
    def _serialize_p(self, p: Fraction | float) -> str:
        return str(p)

    @property
    def q(self) -> Fraction | float:
        """Complement probability 1 - p."""
        return 1 - self.p

    @property
    def is_exact(self) -> bool:
        return isinstance(self.p, Fraction)

    @property
    def schedule(self) -> Schedule:
        """The ℓ-block schedule these parameters describe."""
        return Schedule.blocks(self.ell)

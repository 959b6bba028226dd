"""Magic-state factories as a fixed-rate source feeding a pooled buffer."""

from __future__ import annotations

from dataclasses import dataclass

PERIOD = 15  # beats per magic state per factory
PORT_BEATS = 1  # MSF -> CR transfer through the single port cell


@dataclass
class MsfState:
    factories: int
    buffer_capacity: int
    stock: int = 0
    phase: int = 0  # all factories run in phase
    beat: int = 0
    produced: int = 0  # states that entered the buffer
    discarded: int = 0  # states lost to a full buffer
    granted: int = 0

    def __post_init__(self) -> None:
        if self.factories < 0 or self.buffer_capacity < 0:
            raise ValueError("factories and buffer capacity must be >= 0")
        if not 0 <= self.stock <= self.buffer_capacity:
            raise ValueError("stock outside [0, capacity]")

    @classmethod
    def create(cls, factories: int, buffer_capacity: int | None = None, warm_start: bool = False) -> "MsfState":
        cap = 2 * factories if buffer_capacity is None else buffer_capacity
        return cls(factories, cap, stock=cap if warm_start else 0)

    def tick(self) -> "MsfState":
        """Advance one beat; a wrapping phase delivers one state per factory."""
        self.beat += 1
        self.phase = (self.phase + 1) % PERIOD
        if self.phase == 0 and self.factories:
            room = self.buffer_capacity - self.stock
            made = min(room, self.factories)
            self.stock += made
            self.produced += made
            self.discarded += self.factories - made
        return self

    def advance_to(self, beat: int) -> "MsfState":
        if beat < self.beat:
            raise ValueError("MSF clock cannot run backwards")
        # only wrap beats change the stock; jump between them
        while self.beat < beat:
            to_wrap = PERIOD - self.phase
            if self.beat + to_wrap > beat:
                self.phase += beat - self.beat
                self.beat = beat
                break
            self.beat += to_wrap - 1
            self.phase = PERIOD - 1
            self.tick()
        return self

    def request_magic(self) -> bool:
        """Take one state if any is buffered; False means the caller waits."""
        if self.stock > 0:
            self.stock -= 1
            self.granted += 1
            return True
        return False

    def next_delivery(self) -> int | None:
        """Beat of the next production event, or None when nothing can ever arrive."""
        if not self.factories:
            return None
        return self.beat + (PERIOD - self.phase)

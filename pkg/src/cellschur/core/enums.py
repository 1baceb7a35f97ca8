from enum import Enum


class MonoidKind(Enum):
    FULL = "full"
    ROOK = "rook"
    PARTIAL = "partial"


class Side(Enum):
    LEFT = "left"
    RIGHT = "right"


class RingKind(Enum):
    INTEGERS = "integers"
    RATIONALS = "rationals"
    PRIME_FIELD = "prime_field"


class WitnessKind(Enum):
    CHAR0_FULL = "char0-full"
    RIGHT_P = "right-p"
    LEFT_TOP = "left-top"
    LEFT_P = "left-p"
    ROOK = "rook"


class Verdict(Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not-applicable"

"""Truth-table Boolean functions and their structural operations.

Bit-order convention (fixed package-wide, and stated in every serialized
artifact): a function on n variables stores its table as the integer whose
bit k is the value at the input x with x_1 = bit 0 of k, x_2 = bit 1 of k,
and so on.  x_1 is the least-significant bit of the table index.  Variable
indices are 1-based in all public signatures.

Composition lays input blocks out left to right: in f(g_1, ..., g_n) the
first arity(g_1) input bits feed g_1, the next arity(g_2) feed g_2, etc.,
with block-internal bit order preserved.  Recursive powers label leaves
depth-first left to right, which is exactly what repeated block composition
produces.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

import numpy as np

from .errors import ArityError, BudgetError, PreconditionError, UsageError

#: Hard cap on table entries (2**24); operations that would exceed it raise
#: BudgetError instead of silently truncating.
TABLE_CAP_ENTRIES = 1 << 24
_MAX_ARITY = 24

_CHUNK = 1 << 18  # rows processed per numpy chunk in bulk table builders


def _popcount_array(idx: np.ndarray) -> np.ndarray:
    """Per-element popcount of a uint32/int64 index array."""
    v = idx.astype(np.uint64)
    out = np.zeros(v.shape, dtype=np.uint8)
    while True:
        out += (v & 1).astype(np.uint8)
        v >>= np.uint64(1)
        if not v.any():
            break
    return out


@dataclass(frozen=True)
class BooleanFunction:
    """Immutable truth table of a function {0,1}^arity -> {0,1}."""

    arity: int
    table: int

    def __post_init__(self):
        if self.arity < 0:
            raise UsageError(f"negative arity {self.arity}")
        if self.arity > _MAX_ARITY:
            raise BudgetError(
                f"arity {self.arity} exceeds the table cap of 2**{_MAX_ARITY} entries"
            )
        size = 1 << self.arity
        if not (0 <= self.table < (1 << size)):
            raise UsageError(
                f"table value does not fit 2**{self.arity} entries"
            )

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "BooleanFunction":
        n = (len(bits)).bit_length() - 1
        if len(bits) != (1 << n):
            raise UsageError(f"table length {len(bits)} is not a power of two")
        table = 0
        for k, b in enumerate(bits):
            if b not in (0, 1):
                raise UsageError(f"non-bit table entry {b!r}")
            table |= b << k
        return cls(n, table)

    @classmethod
    def from_callable(cls, arity: int, fn: Callable[[tuple], int]) -> "BooleanFunction":
        bits = []
        for k in range(1 << arity):
            x = tuple((k >> i) & 1 for i in range(arity))
            bits.append(1 if fn(x) else 0)
        return cls.from_bits(bits)

    @classmethod
    def from_tt_literal(cls, text: str) -> "BooleanFunction":
        """Parse the `tt:<arity>:<hex>` literal (hex is the packed table)."""
        parts = text.split(":")
        if len(parts) != 3 or parts[0] != "tt":
            raise UsageError(f"bad truth-table literal {text!r}")
        try:
            arity = int(parts[1])
            table = int(parts[2], 16)
        except ValueError as exc:
            raise UsageError(f"bad truth-table literal {text!r}") from exc
        return cls(arity, table)

    @classmethod
    def from_json(cls, obj: Mapping) -> "BooleanFunction":
        return cls(int(obj["arity"]), int(obj["table_hex"], 16))

    # -- views -------------------------------------------------------------

    def value_at(self, index: int) -> int:
        return (self.table >> index) & 1

    def evaluate(self, x: Sequence[int]) -> int:
        if len(x) != self.arity:
            raise ArityError(f"expected {self.arity} bits, got {len(x)}")
        index = 0
        for i, b in enumerate(x):
            if b not in (0, 1):
                raise UsageError(f"non-bit input {b!r}")
            index |= b << i
        return self.value_at(index)

    def bits(self) -> np.ndarray:
        """Table as a uint8 array of length 2**arity (index order)."""
        size = 1 << self.arity
        nbytes = (size + 7) // 8
        raw = np.frombuffer(self.table.to_bytes(nbytes, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[:size]

    def tt_literal(self) -> str:
        return f"tt:{self.arity}:{self.table:#x}"

    def to_json(self) -> dict:
        return {"arity": self.arity, "table_hex": f"{self.table:x}"}

    def __str__(self) -> str:
        return self.tt_literal()

    # -- pointwise algebra ---------------------------------------------------

    def negate(self) -> "BooleanFunction":
        mask = (1 << (1 << self.arity)) - 1
        return BooleanFunction(self.arity, self.table ^ mask)

    def is_constant(self) -> bool:
        size = 1 << self.arity
        return self.table == 0 or self.table == (1 << size) - 1


Assignment = Mapping[int, int]  # 1-based variable index -> bit


@dataclass(frozen=True)
class Var:
    """Projection target: the j-th (1-based) variable of the new function."""

    index: int

    def __post_init__(self):
        if self.index < 1:
            raise UsageError(f"variable index {self.index} must be >= 1")


@dataclass(frozen=True)
class Const:
    value: int

    def __post_init__(self):
        if self.value not in (0, 1):
            raise UsageError(f"constant must be a bit, got {self.value!r}")


ProjEntry = Union[Var, Const]


@dataclass(frozen=True)
class Projection:
    """Substitution of each source variable by a target variable or constant."""

    source_arity: int
    targets: tuple

    def __post_init__(self):
        if len(self.targets) != self.source_arity:
            raise ArityError(
                f"projection has {len(self.targets)} targets for source arity "
                f"{self.source_arity}"
            )
        for t in self.targets:
            if not isinstance(t, (Var, Const)):
                raise UsageError(f"bad projection entry {t!r}")

    def to_json(self) -> dict:
        out = []
        for t in self.targets:
            out.append({"var": t.index} if isinstance(t, Var) else {"const": t.value})
        return {"source_arity": self.source_arity, "targets": out}

    @classmethod
    def from_json(cls, obj: Mapping) -> "Projection":
        targets = []
        for t in obj["targets"]:
            targets.append(Var(t["var"]) if "var" in t else Const(t["const"]))
        return cls(int(obj["source_arity"]), tuple(targets))


class Classification(enum.Enum):
    PARITY = "Parity"
    NEG_PARITY = "NegParity"
    AND = "And"
    OR = "Or"
    MONOTONE_OTHER = "Monotone-other"
    NON_MONOTONE_OTHER = "NonMonotone-other"
    DEGENERATE = "Degenerate"


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

_BUILTIN_TAGS = ("AND", "OR", "MAJ", "PARITY", "XOR", "NOT", "CONST0", "CONST1")


def make_builtin(name: str, arity: int) -> BooleanFunction:
    """Standard named functions; MAJ requires odd arity, NOT arity 1."""
    tag = name.upper()
    if tag == "XOR":
        tag = "PARITY"
    if tag in ("CONST0", "CONST1"):
        if arity < 0:
            raise UsageError("negative arity")
        size = 1 << arity
        return BooleanFunction(arity, 0 if tag == "CONST0" else (1 << size) - 1)
    if arity < 1:
        raise UsageError(f"{tag} requires arity >= 1")
    if arity > _MAX_ARITY:
        raise BudgetError(f"arity {arity} exceeds the table cap")
    size = 1 << arity
    if tag == "AND":
        return BooleanFunction(arity, 1 << (size - 1))
    if tag == "OR":
        return BooleanFunction(arity, (1 << size) - 2)
    if tag == "NOT":
        if arity != 1:
            raise UsageError("NOT has arity 1")
        return BooleanFunction(1, 0b01)
    if tag in ("MAJ", "PARITY"):
        if tag == "MAJ" and arity % 2 == 0:
            raise UsageError(f"MAJ requires odd arity, got {arity}")
        table = 0
        for start in range(0, size, _CHUNK):
            idx = np.arange(start, min(size, start + _CHUNK), dtype=np.int64)
            w = _popcount_array(idx)
            if tag == "MAJ":
                vals = (w > arity // 2).astype(np.uint8)
            else:
                vals = (w & 1).astype(np.uint8)
            table |= int.from_bytes(
                np.packbits(vals, bitorder="little").tobytes(), "little"
            ) << start
        return BooleanFunction(arity, table)
    raise UsageError(f"unknown builtin {name!r} (known: {', '.join(_BUILTIN_TAGS)})")


def _bits_to_table(vals: np.ndarray) -> int:
    return int.from_bytes(np.packbits(vals.astype(np.uint8), bitorder="little").tobytes(), "little")


# ---------------------------------------------------------------------------
# composition / restriction / projection
# ---------------------------------------------------------------------------

def compose(f: BooleanFunction, gs: Sequence[BooleanFunction]) -> BooleanFunction:
    """Block composition f(g_1, ..., g_n); blocks concatenated left to right."""
    if len(gs) != f.arity:
        raise ArityError(f"outer arity {f.arity} != number of inner functions {len(gs)}")
    total = sum(g.arity for g in gs)
    if total > _MAX_ARITY:
        raise BudgetError(f"composed arity {total} exceeds the table cap")
    fbits = f.bits()
    gbits = [g.bits() for g in gs]
    size = 1 << total
    table = 0
    for start in range(0, size, _CHUNK):
        idx = np.arange(start, min(size, start + _CHUNK), dtype=np.int64)
        findex = np.zeros(idx.shape, dtype=np.int64)
        shift = 0
        for i, g in enumerate(gs):
            sub = (idx >> shift) & ((1 << g.arity) - 1)
            findex |= gbits[i][sub].astype(np.int64) << i
            shift += g.arity
        table |= _bits_to_table(fbits[findex]) << start
    return BooleanFunction(total, table)


def power(h: BooleanFunction, d: int) -> BooleanFunction:
    """d-fold recursion h^d on arity(h)**d variables (complete-tree layout)."""
    if d < 1:
        raise UsageError(f"power exponent must be >= 1, got {d}")
    if h.arity < 1:
        raise PreconditionError("cannot take powers of a 0-ary function")
    if h.arity ** d > _MAX_ARITY:
        raise BudgetError(
            f"h^{d} would have {h.arity ** d} inputs, over the 2**{_MAX_ARITY}-entry cap"
        )
    out = h
    for _ in range(d - 1):
        out = compose(out, [h] * out.arity)
    return out


def restrict(f: BooleanFunction, assignment: Assignment) -> BooleanFunction:
    """Fix some variables to constants; remaining variables keep their order."""
    for i in assignment:
        if not (1 <= i <= f.arity):
            raise UsageError(f"assignment key {i} out of range 1..{f.arity}")
        if assignment[i] not in (0, 1):
            raise UsageError(f"assignment value for x{i} must be a bit")
    free = [i for i in range(1, f.arity + 1) if i not in assignment]
    base = sum(assignment[i] << (i - 1) for i in assignment)
    fbits = f.bits()
    size = 1 << len(free)
    table = 0
    for start in range(0, size, _CHUNK):
        idx = np.arange(start, min(size, start + _CHUNK), dtype=np.int64)
        src = np.full(idx.shape, base, dtype=np.int64)
        for pos, i in enumerate(free):
            src |= ((idx >> pos) & 1) << (i - 1)
        table |= _bits_to_table(fbits[src]) << start
    return BooleanFunction(len(free), table)


def apply_projection(g: BooleanFunction, p: Projection, target_arity: int) -> BooleanFunction:
    """f(x_1..x_t) = g(a_1..a_m) where each a_i is a constant or some x_j."""
    if p.source_arity != g.arity:
        raise ArityError(f"projection source arity {p.source_arity} != arity(g) {g.arity}")
    for t in p.targets:
        if isinstance(t, Var) and t.index > target_arity:
            raise ArityError(f"projection refers to x{t.index} beyond target arity {target_arity}")
    gbits = g.bits()
    size = 1 << target_arity
    table = 0
    for start in range(0, size, _CHUNK):
        idx = np.arange(start, min(size, start + _CHUNK), dtype=np.int64)
        src = np.zeros(idx.shape, dtype=np.int64)
        for pos, t in enumerate(p.targets):
            if isinstance(t, Const):
                src |= t.value << pos
            else:
                src |= ((idx >> (t.index - 1)) & 1) << pos
        table |= _bits_to_table(gbits[src]) << start
    return BooleanFunction(target_arity, table)


# ---------------------------------------------------------------------------
# structure predicates
# ---------------------------------------------------------------------------

def depends_on(f: BooleanFunction, i: int) -> bool:
    """True iff flipping x_i changes f somewhere."""
    if not (1 <= i <= f.arity):
        raise UsageError(f"variable index {i} out of range 1..{f.arity}")
    b = f.bits()
    stride = 1 << (i - 1)
    view = b.reshape(-1, 2, stride)
    return bool((view[:, 0, :] != view[:, 1, :]).any())


def depends_on_all(f: BooleanFunction) -> bool:
    return all(depends_on(f, i) for i in range(1, f.arity + 1))


def is_monotone(f: BooleanFunction) -> bool:
    """f(x) <= f(y) whenever x <= y coordinatewise."""
    b = f.bits()
    for i in range(1, f.arity + 1):
        view = b.reshape(-1, 2, 1 << (i - 1))
        if (view[:, 0, :] > view[:, 1, :]).any():
            return False
    return True


def classify(f: BooleanFunction) -> Classification:
    """Coarse structural tag used by the gadget constructions."""
    if f.arity < 2 or not depends_on_all(f):
        return Classification.DEGENERATE
    n = f.arity
    if f == make_builtin("AND", n):
        return Classification.AND
    if f == make_builtin("OR", n):
        return Classification.OR
    parity = make_builtin("PARITY", n)
    if f == parity:
        return Classification.PARITY
    if f == parity.negate():
        return Classification.NEG_PARITY
    if is_monotone(f):
        return Classification.MONOTONE_OTHER
    return Classification.NON_MONOTONE_OTHER


# ---------------------------------------------------------------------------
# enumeration helpers (used by censuses and test corpora)
# ---------------------------------------------------------------------------

def all_functions(arity: int) -> Iterator[BooleanFunction]:
    """All 2**(2**arity) functions on exactly `arity` bits, ascending table."""
    if arity > 4:
        raise BudgetError(f"exhaustive enumeration at arity {arity} is out of budget")
    for table in range(1 << (1 << arity)):
        yield BooleanFunction(arity, table)


def functions_depending_on_all(arity: int) -> Iterator[BooleanFunction]:
    for f in all_functions(arity):
        if depends_on_all(f):
            yield f

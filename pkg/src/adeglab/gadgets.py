"""Constructive gadget extraction from a base function h.

Three constructions, each verified exhaustively against its target table:

* negation gadget: for non-monotone h, a restriction of h computing NOT x
  (a point a with h(a)=1, a_i=0, h(a xor e_i)=0; all other inputs fixed);
* minimal sensitive block of size 2: a point b and pair {i, j} with
  h(b) = h(b^i) = h(b^j) != h(b^{ij}) - a shifted AND2/OR2 square.  It
  exists whenever h depends on all variables and is not parity-like; we
  find the lexicographically least one by exhaustive scan;
* AND2 / OR2 simulation circuits of h-depth <= 3.  Monotone h: keep two
  1-coordinates of a minimal 1-input free (and dually two 0-coordinates of
  a maximal 0-input for OR2).  Non-monotone h: route the two free inputs
  of the block square through the negation gadget where the block corner
  has a 1, and wrap the whole thing in the negation gadget when the block
  orientation is opposite to the target (De Morgan).

Majority-from-recursive-base projections are found by seeded random leaf
assignment over the complete base^d tree and verified by exhaustive
evaluation over all 2^n inputs; the tree is evaluated as a circuit, never
materialized as a 2**(arity^d) table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .boolfn import (BooleanFunction, Classification, Const, Projection, Var,
                     apply_projection, classify, compose, make_builtin)
from .errors import PreconditionError, SearchExhausted, UsageError

# ---------------------------------------------------------------------------
# circuits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Gate:
    children: tuple  # one entry per base input: Gate | Var | Const


CircuitNode = Union[Gate, Var, Const]


@dataclass
class SimulationCircuit:
    """Tree of base-function gates with constant/variable leaves."""

    base: BooleanFunction
    root: CircuitNode
    target_arity: int
    verified: bool = False

    def depth(self) -> int:
        def rec(node) -> int:
            if isinstance(node, Gate):
                return 1 + max((rec(c) for c in node.children), default=0)
            return 0
        return rec(self.root)

    def evaluate(self, x: Sequence[int]) -> int:
        if len(x) != self.target_arity:
            raise UsageError("input length mismatch")

        def rec(node) -> int:
            if isinstance(node, Const):
                return node.value
            if isinstance(node, Var):
                return x[node.index - 1]
            vals = tuple(rec(c) for c in node.children)
            return self.base.evaluate(vals)
        return rec(self.root)

    def to_function(self) -> BooleanFunction:
        bits = []
        for k in range(1 << self.target_arity):
            x = tuple((k >> i) & 1 for i in range(self.target_arity))
            bits.append(self.evaluate(x))
        return BooleanFunction.from_bits(bits)

    def to_json(self) -> dict:
        def rec(node):
            if isinstance(node, Const):
                return {"const": node.value}
            if isinstance(node, Var):
                return {"var": node.index}
            return {"gate": [rec(c) for c in node.children]}
        return {
            "base": self.base.to_json(),
            "target_arity": self.target_arity,
            "depth": self.depth(),
            "verified": self.verified,
            "root": rec(self.root),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SimulationCircuit":
        def rec(node):
            if "const" in node:
                return Const(node["const"])
            if "var" in node:
                return Var(node["var"])
            return Gate(tuple(rec(c) for c in node["gate"]))
        return cls(base=BooleanFunction.from_json(obj["base"]),
                   root=rec(obj["root"]),
                   target_arity=int(obj["target_arity"]),
                   verified=bool(obj.get("verified", False)))


def verify_circuit(circuit: SimulationCircuit, target: BooleanFunction) -> bool:
    """Exhaustive table equality; records the outcome on the circuit."""
    if circuit.target_arity != target.arity:
        raise UsageError("circuit target arity differs from the target function")
    ok = circuit.to_function() == target
    circuit.verified = ok
    return ok


# ---------------------------------------------------------------------------
# structure finders
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SensitiveBlock:
    """Point and index pair with h constant under single flips only."""

    point: tuple            # bits of x, x_1 first
    indices: tuple          # (i, j) with i < j, 1-based
    orientation: int        # h(x); 0 = shifted AND2, 1 = shifted OR2

    def check(self, h: BooleanFunction) -> bool:
        x = sum(b << k for k, b in enumerate(self.point))
        i, j = self.indices
        bi, bj = 1 << (i - 1), 1 << (j - 1)
        v = h.value_at(x)
        return (v == self.orientation
                and h.value_at(x ^ bi) == v
                and h.value_at(x ^ bj) == v
                and h.value_at(x ^ bi ^ bj) != v)


def find_negation_gadget(h: BooleanFunction):
    """Restriction computing NOT x, or None when h is monotone.

    Returns (assignment for the other variables, free index i) with
    h(a)=1, a_i=0, h(a xor e_i)=0, smallest (a, i) first.
    """
    for x in range(1 << h.arity):
        vx = h.value_at(x)
        if vx != 1:
            continue
        for i in range(1, h.arity + 1):
            bit = 1 << (i - 1)
            if x & bit:
                continue
            if h.value_at(x | bit) == 0:
                assignment = {k: (x >> (k - 1)) & 1
                              for k in range(1, h.arity + 1) if k != i}
                return assignment, i
    return None


def find_min_sensitive_block2(h: BooleanFunction) -> SensitiveBlock:
    """Lexicographically least minimal sensitive block of size 2.

    Requires h to depend on all of its >= 2 variables and to not be
    parity-like; under those preconditions a block is guaranteed to exist.
    """
    tag = classify(h)
    if tag in (Classification.PARITY, Classification.NEG_PARITY):
        raise PreconditionError(
            "parity-like functions have no minimal sensitive block of size 2"
        )
    if tag is Classification.DEGENERATE:
        raise PreconditionError(
            "need arity >= 2 and dependence on every variable"
        )
    for x in range(1 << h.arity):
        v = h.value_at(x)
        for i in range(1, h.arity):
            bi = 1 << (i - 1)
            if h.value_at(x ^ bi) != v:
                continue
            for j in range(i + 1, h.arity + 1):
                bj = 1 << (j - 1)
                if h.value_at(x ^ bj) == v and h.value_at(x ^ bi ^ bj) != v:
                    point = tuple((x >> k) & 1 for k in range(h.arity))
                    return SensitiveBlock(point=point, indices=(i, j), orientation=v)
    raise PreconditionError("no size-2 minimal sensitive block found")


def find_minimal_one_input(h: BooleanFunction):
    """Least minimal 1-input of weight >= 2 of a monotone h, else None.

    None happens exactly when every minimal 1-input is a singleton, i.e.
    when (a dependent) h is OR, or when h is constant.
    """
    if not _is_monotone_checked(h):
        raise PreconditionError("minimal 1-inputs are only scanned for monotone h")
    for x in range(1 << h.arity):
        if h.value_at(x) != 1 or x.bit_count() < 2:
            continue
        if all(h.value_at(x ^ (1 << k)) == 0
               for k in range(h.arity) if x >> k & 1):
            return tuple((x >> k) & 1 for k in range(h.arity))
    return None


def find_maximal_zero_input(h: BooleanFunction):
    """Order-dual scan: least maximal 0-input with >= 2 zero coordinates."""
    if not _is_monotone_checked(h):
        raise PreconditionError("maximal 0-inputs are only scanned for monotone h")
    full = (1 << h.arity) - 1
    for x in range(1 << h.arity):
        zeros = [k for k in range(h.arity) if not (x >> k) & 1]
        if h.value_at(x) != 0 or len(zeros) < 2:
            continue
        if all(h.value_at(x | (1 << k)) == 1 for k in zeros):
            return tuple((x >> k) & 1 for k in range(h.arity))
    return None


def _is_monotone_checked(h: BooleanFunction) -> bool:
    from .boolfn import is_monotone
    return is_monotone(h)


# ---------------------------------------------------------------------------
# AND2 / OR2 simulation
# ---------------------------------------------------------------------------

def _negation_node(h: BooleanFunction, gadget, child) -> Gate:
    assignment, free = gadget
    children = []
    for k in range(1, h.arity + 1):
        children.append(child if k == free else Const(assignment[k]))
    return Gate(tuple(children))


def simulate_and2(h: BooleanFunction) -> SimulationCircuit:
    return _simulate_two_bit(h, target="and")


def simulate_or2(h: BooleanFunction) -> SimulationCircuit:
    return _simulate_two_bit(h, target="or")


def _simulate_two_bit(h: BooleanFunction, target: str) -> SimulationCircuit:
    tag = classify(h)
    if tag not in (Classification.MONOTONE_OTHER, Classification.NON_MONOTONE_OTHER):
        raise PreconditionError(
            f"cannot extract {target.upper()}2 from a function classified {tag.value}"
        )
    if tag is Classification.MONOTONE_OTHER:
        root = _monotone_two_bit(h, target)
    else:
        root = _non_monotone_two_bit(h, target)
    circuit = SimulationCircuit(base=h, root=root, target_arity=2)
    want = make_builtin("AND" if target == "and" else "OR", 2)
    if not verify_circuit(circuit, want):
        raise PreconditionError(
            f"{target.upper()}2 extraction produced an unverified circuit for {h}"
        )
    if circuit.depth() > 3:
        raise PreconditionError("extraction exceeded the depth-3 budget")
    return circuit


def _monotone_two_bit(h: BooleanFunction, target: str) -> Gate:
    if target == "and":
        point = find_minimal_one_input(h)
        keep_value = 1
    else:
        point = find_maximal_zero_input(h)
        keep_value = 0
    if point is None:
        # Excluded by classification: monotone-other is neither OR nor AND.
        raise PreconditionError("monotone extraction point unexpectedly missing")
    free = [k + 1 for k, b in enumerate(point) if b == keep_value][:2]
    children = []
    for k in range(1, h.arity + 1):
        if k == free[0]:
            children.append(Var(1))
        elif k == free[1]:
            children.append(Var(2))
        else:
            children.append(Const(point[k - 1]))
    return Gate(tuple(children))


def _non_monotone_two_bit(h: BooleanFunction, target: str):
    gadget = find_negation_gadget(h)
    if gadget is None:
        raise PreconditionError("non-monotone function lacks a negation gadget?")
    block = find_min_sensitive_block2(h)
    i, j = block.indices
    b_i, b_j = block.point[i - 1], block.point[j - 1]

    # orientation 0 square: value 1 exactly at (not b_i, not b_j);
    # orientation 1 square: value 0 exactly at (not b_i, not b_j).
    # The unique corner must be hit exactly at inputs (1,1) for AND and (0,0)
    # for OR, so slot k is negated iff b_k disagrees with that; pushing the
    # inputs of the De Morgan case through the negation gadget lands on the
    # same per-slot rule, and only the outer wrap distinguishes the cases.
    hit = 1 if target == "and" else 0
    flip_i = b_i == hit
    flip_j = b_j == hit
    wrap = block.orientation != (0 if target == "and" else 1)

    def slot(var_index, flip):
        leaf = Var(var_index)
        return _negation_node(h, gadget, leaf) if flip else leaf

    children = []
    for k in range(1, h.arity + 1):
        if k == i:
            children.append(slot(1, flip_i))
        elif k == j:
            children.append(slot(2, flip_j))
        else:
            children.append(Const(block.point[k - 1]))
    core = Gate(tuple(children))
    return _negation_node(h, gadget, core) if wrap else core


# ---------------------------------------------------------------------------
# majority as a projection of recursive bases
# ---------------------------------------------------------------------------

BASE_MAJ3 = "maj3"
BASE_ANDOR = "andor"

# Leaf mixing for the alternating AND-OR tree: the variable-only map has its
# unstable fixed point at (3-sqrt(5))/2 ~ 0.382, so constants re-center the
# leaf distribution around it.  With P(const) = 0.3 and P(1 | const) ~ 0.107
# the two majority thresholds 2/5 and 3/5 land on opposite sides.
_ANDOR_CONST_PROB = 0.3
_ANDOR_CONST_ONE_BIAS = 0.107


@dataclass
class MajorityProjectionResult:
    n: int
    base: str
    depth: int
    projection: Projection
    circuit: SimulationCircuit
    attempts: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "n": self.n, "base": self.base, "depth": self.depth,
            "projection": self.projection.to_json(),
            "attempts": self.attempts,
        }


def _base_function(base: str) -> BooleanFunction:
    if base == BASE_MAJ3:
        return make_builtin("MAJ", 3)
    if base == BASE_ANDOR:
        return compose(make_builtin("AND", 2), [make_builtin("OR", 2)] * 2)
    raise UsageError(f"unknown projection base {base!r} (use maj3 or andor)")


def _evaluate_leaf_batch(base: str, leaves: np.ndarray, inputs: np.ndarray) -> np.ndarray:
    """Evaluate base^d trees for a batch of leaf assignments on all inputs.

    leaves: (batch, L) with entries 0..n-1 = variable, n = const0, n+1 = const1;
    inputs: (2**n, n) bit matrix.  Returns (batch, 2**n) boolean outputs.
    """
    num_inputs, n = inputs.shape
    extended = np.concatenate(
        [inputs, np.zeros((num_inputs, 1), np.uint8), np.ones((num_inputs, 1), np.uint8)],
        axis=1,
    )
    vals = extended[:, leaves]              # (2**n, batch, L)
    vals = np.moveaxis(vals, 0, -1)         # (batch, L, 2**n)
    while vals.shape[1] > 1:
        if base == BASE_MAJ3:
            g = vals.reshape(vals.shape[0], -1, 3, vals.shape[2])
            vals = (g.sum(axis=2) >= 2).astype(np.uint8)
        else:
            g = vals.reshape(vals.shape[0], -1, 2, 2, vals.shape[2])
            ors = g.max(axis=3)
            vals = ors.min(axis=2).astype(np.uint8)
    return vals[:, 0, :]                    # (batch, 2**n)


def majority_projection(n: int, base: str, d_max: int, seed: int,
                        attempts_per_depth: int = 100_000,
                        const_prob: float = _ANDOR_CONST_PROB,
                        const_one_bias: float = _ANDOR_CONST_ONE_BIAS
                        ) -> MajorityProjectionResult:
    """Search d = 1..d_max for a verified projection of base^d onto MAJ_n.

    Each attempt assigns every leaf of the complete base^d tree independently
    (a uniform variable for the MAJ3 base; variable-or-constant for the
    AND-OR base) and verifies exhaustively over all 2**n inputs.  Exhausting
    the retry budget raises SearchExhausted with per-depth statistics.
    """
    if n < 3 or n % 2 == 0 or n > 9:
        raise UsageError("n must be odd and within 3..9")
    h = _base_function(base)
    k = h.arity
    maj_bits = make_builtin("MAJ", n).bits()
    inputs = np.zeros((1 << n, n), dtype=np.uint8)
    for idx in range(1 << n):
        for i in range(n):
            inputs[idx, i] = (idx >> i) & 1
    rng = np.random.default_rng(seed)
    stats = {}
    for depth in range(1, d_max + 1):
        leaves_count = k ** depth
        batch = max(1, min(4096, (1 << 22) // max(1, leaves_count * (1 << n))))
        done = 0
        while done < attempts_per_depth:
            this = min(batch, attempts_per_depth - done)
            if base == BASE_MAJ3:
                leaves = rng.integers(0, n, size=(this, leaves_count))
            else:
                leaves = rng.integers(0, n, size=(this, leaves_count))
                is_const = rng.random(size=leaves.shape) < const_prob
                const_val = (rng.random(size=leaves.shape) < const_one_bias).astype(np.int64)
                leaves = np.where(is_const, n + const_val, leaves)
            outs = _evaluate_leaf_batch(base, leaves, inputs)
            hits = np.nonzero((outs == maj_bits).all(axis=1))[0]
            done += this
            if hits.size:
                chosen = leaves[hits[0]]
                stats[depth] = done - this + int(hits[0]) + 1
                targets = tuple(
                    Const(int(v - n)) if v >= n else Var(int(v) + 1) for v in chosen
                )
                projection = Projection(source_arity=leaves_count, targets=targets)
                circuit = _projection_circuit(h, depth, projection, target_arity=n)
                if not verify_circuit(circuit, make_builtin("MAJ", n)):
                    raise PreconditionError("projection verification mismatch")
                return MajorityProjectionResult(
                    n=n, base=base, depth=depth, projection=projection,
                    circuit=circuit, attempts=stats,
                )
        stats[depth] = done
    raise SearchExhausted(
        f"no projection of {base}^d onto MAJ_{n} found for d <= {d_max}", stats
    )


def _projection_circuit(h: BooleanFunction, depth: int, projection: Projection,
                        target_arity: int) -> SimulationCircuit:
    """Complete base^depth tree with leaves labelled by the projection."""
    k = h.arity
    leaves = list(projection.targets)

    def build(level: int, offset: int):
        if level == 0:
            return leaves[offset]
        span = k ** (level - 1)
        return Gate(tuple(build(level - 1, offset + c * span) for c in range(k)))

    return SimulationCircuit(base=h, root=build(depth, 0), target_arity=target_arity)

"""Exact-rational multilinear polynomials on the Boolean hypercube.

Coefficients live in the {0,1} monomial basis: a polynomial is a sparse map
from variable subsets (bitmask over x_1..x_n, bit i-1 <-> x_i) to Fraction
coefficients.  Interpolation from a truth table is the subset Moebius
transform; evaluation on the whole cube is the inverse zeta transform.
Both run in O(n * 2^n) exact rational operations.

Everything here is exact; the LP module owns all floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .boolfn import BooleanFunction
from .errors import ArityError, BudgetError, PreconditionError, UsageError
from .rational import format_rational, parse_rational

_INTERP_MAX_ARITY = 20

#: A point in R^n is just a sequence of exact rationals.
RealPoint = Sequence[Fraction]


def _as_fraction(v) -> Fraction:
    if isinstance(v, float):
        raise UsageError("floats are not accepted where exact rationals are required")
    return Fraction(v)


@dataclass(frozen=True)
class MultilinearPolynomial:
    """Sparse multilinear polynomial; absent coefficients are zero."""

    arity: int
    coeffs: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for mask, c in self.coeffs.items():
            if not (0 <= mask < (1 << self.arity)):
                raise UsageError(f"monomial mask {mask:#x} out of range for arity {self.arity}")
            c = _as_fraction(c)
            if c != 0:
                clean[mask] = c
        object.__setattr__(self, "coeffs", clean)

    # -- construction --------------------------------------------------------

    @classmethod
    def constant(cls, arity: int, value) -> "MultilinearPolynomial":
        return cls(arity, {0: _as_fraction(value)})

    @classmethod
    def from_values(cls, arity: int, values: Sequence[Fraction]) -> "MultilinearPolynomial":
        """Unique multilinear polynomial taking the given values on {0,1}^n."""
        if len(values) != 1 << arity:
            raise ArityError(f"need 2**{arity} values, got {len(values)}")
        a = [_as_fraction(v) for v in values]
        for i in range(arity):
            bit = 1 << i
            for mask in range(1 << arity):
                if mask & bit:
                    a[mask] -= a[mask ^ bit]
        return cls(arity, {m: c for m, c in enumerate(a) if c != 0})

    # -- views ----------------------------------------------------------------

    def degree(self) -> int:
        if not self.coeffs:
            return 0
        return max(mask.bit_count() for mask in self.coeffs)

    def evaluate(self, point: RealPoint) -> Fraction:
        if len(point) != self.arity:
            raise ArityError(f"point has {len(point)} coordinates, expected {self.arity}")
        xs = [_as_fraction(v) for v in point]
        total = Fraction(0)
        for mask, c in self.coeffs.items():
            term = c
            m = mask
            while m:
                i = (m & -m).bit_length() - 1
                term *= xs[i]
                m &= m - 1
            total += term
        return total

    def values_on_cube(self) -> list:
        """Values at all 2**arity Boolean points, table-index order."""
        a = [Fraction(0)] * (1 << self.arity)
        for mask, c in self.coeffs.items():
            a[mask] = c
        for i in range(self.arity):
            bit = 1 << i
            for mask in range(1 << self.arity):
                if mask & bit:
                    a[mask] += a[mask ^ bit]
        return a

    # -- arithmetic -------------------------------------------------------------

    def add(self, other: "MultilinearPolynomial") -> "MultilinearPolynomial":
        if other.arity != self.arity:
            raise ArityError("cannot add polynomials of different arities")
        out = dict(self.coeffs)
        for mask, c in other.coeffs.items():
            out[mask] = out.get(mask, Fraction(0)) + c
        return MultilinearPolynomial(self.arity, out)

    def scale(self, factor) -> "MultilinearPolynomial":
        factor = _as_fraction(factor)
        return MultilinearPolynomial(
            self.arity, {m: factor * c for m, c in self.coeffs.items()}
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultilinearPolynomial):
            return NotImplemented
        return self.arity == other.arity and dict(self.coeffs) == dict(other.coeffs)

    # -- serialization ------------------------------------------------------------

    def to_json(self) -> list:
        items = sorted(self.coeffs.items(), key=lambda kv: (kv[0].bit_count(), kv[0]))
        return [
            {
                "vars": [i + 1 for i in range(self.arity) if mask >> i & 1],
                "coeff": format_rational(c),
            }
            for mask, c in items
        ]

    @classmethod
    def from_json(cls, arity: int, obj: Sequence[Mapping]) -> "MultilinearPolynomial":
        coeffs = {}
        for term in obj:
            mask = 0
            for i in term["vars"]:
                mask |= 1 << (int(i) - 1)
            coeffs[mask] = coeffs.get(mask, Fraction(0)) + parse_rational(term["coeff"])
        return cls(arity, coeffs)


def interpolate(f: BooleanFunction) -> MultilinearPolynomial:
    """The unique multilinear polynomial agreeing with f on {0,1}^n."""
    if f.arity > _INTERP_MAX_ARITY:
        raise BudgetError(f"interpolation capped at arity {_INTERP_MAX_ARITY}")
    values = [Fraction(int(b)) for b in f.bits()]
    return MultilinearPolynomial.from_values(f.arity, values)


def eval_poly(p: MultilinearPolynomial, point: RealPoint) -> Fraction:
    return p.evaluate(point)


def linf_error(p: MultilinearPolynomial, f: BooleanFunction) -> Fraction:
    """max over Boolean x of |p(x) - f(x)|, exact."""
    if p.arity != f.arity:
        raise ArityError(f"polynomial arity {p.arity} != function arity {f.arity}")
    bits = f.bits()
    worst = Fraction(0)
    for k, v in enumerate(p.values_on_cube()):
        err = abs(v - int(bits[k]))
        if err > worst:
            worst = err
    return worst


def robustness_probe(
    p: MultilinearPolynomial,
    x: Sequence[int],
    delta_vec: RealPoint,
    delta: Fraction,
) -> bool:
    """Check |p(x) - p(x + D)| <= delta for a perturbation with ||D||_inf <= delta/n.

    Preconditions (violations raise, they are not a False return): p maps the
    cube into [0,1] and the perturbation respects the delta/n box.  A False
    return therefore signals a genuine counterexample to the robustness
    property, which for multilinear p in [0,1] should never happen.
    """
    n = p.arity
    if len(x) != n or len(delta_vec) != n:
        raise ArityError("point/perturbation length mismatch")
    delta = _as_fraction(delta)
    vals = p.values_on_cube()
    if min(vals) < 0 or max(vals) > 1:
        raise PreconditionError("polynomial is not [0,1]-bounded on the cube")
    box = delta / n
    dd = [_as_fraction(d) for d in delta_vec]
    if any(abs(d) > box for d in dd):
        raise PreconditionError("perturbation exceeds the delta/n box")
    base = vals[sum(b << i for i, b in enumerate(x))]
    shifted = p.evaluate([Fraction(b) + d for b, d in zip(x, dd)])
    return abs(base - shifted) <= delta

"""Dual-witness amplification machinery.

A dual witness psi of the inner function splits into two probability
distributions: mu1 proportional to its positive part and mu0 to its
negative part.  Orthogonality to constants makes the two parts carry mass
exactly 1/2 each, so mu1 = 2 psi_plus and mu0 = 2 psi_minus are exact
distributions with psi = (mu1 - mu0)/2.  Correlation above (1-eps)/2 pins
the conditional errors: E_{mu1}[g] > 1-eps and E_{mu0}[g] < eps.

The linear operator L replaces each inner block of a polynomial by its
expectation under mu_{z_i}: monomial-wise, every block factor collapses to
the affine (1-z_i) E_mu0[.] + z_i E_mu1[.].  Copy-monomials of degree below
the witness purity have equal expectations under both sides (orthogonality),
so a block only contributes z_i when one of its copies reaches the purity
degree, giving deg(Lp) <= deg(p) / purity exactly, monomial by monomial.

The pipeline composes outer o middle_t o inner, takes an eps-approximant of
the composition, applies L, and measures everything: the mu-errors, the
degree drop, and the exact l-infinity distance from Lp to the outer
function.  The noise bound uses the exact binomial tail of t coins at the
measured mu-errors rather than an asymptotic choice of t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .boolfn import BooleanFunction, compose, make_builtin
from .degrees import (DegreesConfig, DualWitness, Refutation, approx_degree,
                      dual_witness, one_sided_approx_degree)
from .errors import ArityError, InvariantError, PreconditionError, UsageError
from .polynomial import MultilinearPolynomial, interpolate, linf_error
from .rational import format_rational


@dataclass(frozen=True)
class SplitDual:
    """The witness' conditional distributions, exact and support-only."""

    mu0: dict
    mu1: dict
    inner_arity: int
    epsilon_threshold: Fraction

    def expectation_tables(self):
        """Dense monomial expectations e_b[T] = E_{mu_b}[x^T] for T over [m]."""
        size = 1 << self.inner_arity
        e0 = [Fraction(0)] * size
        e1 = [Fraction(0)] * size
        for t_mask in range(size):
            e0[t_mask] = sum(
                (p for x, p in self.mu0.items() if x & t_mask == t_mask), Fraction(0))
            e1[t_mask] = sum(
                (p for x, p in self.mu1.items() if x & t_mask == t_mask), Fraction(0))
        return e0, e1


def split_dual(w: DualWitness) -> SplitDual:
    """Condition |psi| on the sign of psi; exact renormalization by 2."""
    if w.purity_degree < 1:
        raise PreconditionError(
            "splitting needs orthogonality to constants (purity degree >= 1)"
        )
    mu1 = {x: 2 * v for x, v in w.values.items() if v > 0}
    mu0 = {x: -2 * v for x, v in w.values.items() if v < 0}
    if sum(mu1.values()) != 1 or sum(mu0.values()) != 1:
        raise InvariantError("witness mass is not split evenly between signs")
    return SplitDual(mu0=mu0, mu1=mu1, inner_arity=w.arity,
                     epsilon_threshold=w.epsilon)


def mu_expectation(s: SplitDual, g: BooleanFunction, side: int) -> Fraction:
    """Exact E_{mu_side}[g]."""
    if g.arity != s.inner_arity:
        raise ArityError(f"g has arity {g.arity}, split has {s.inner_arity}")
    if side not in (0, 1):
        raise UsageError("side must be 0 or 1")
    mu = s.mu1 if side else s.mu0
    return sum((p for x, p in mu.items() if g.value_at(x)), Fraction(0))


def apply_L(p: MultilinearPolynomial, s: SplitDual, n_blocks: int,
            copies: int) -> MultilinearPolynomial:
    """Expectation operator over block layout x_11..x_1t, x_21.., exact.

    Requires arity(p) == n_blocks * copies * inner_arity; returns a
    multilinear polynomial in z_1..z_{n_blocks}.
    """
    m = s.inner_arity
    if p.arity != n_blocks * copies * m:
        raise ArityError(
            f"polynomial arity {p.arity} != blocks {n_blocks} x copies {copies} x {m}"
        )
    e0, e1 = s.expectation_tables()
    copy_mask = (1 << m) - 1
    out: dict = {}
    for mask, coef in p.coeffs.items():
        factors = []               # (block, E0, E1) for blocks the monomial touches
        for i in range(n_blocks):
            block_bits = (mask >> (i * copies * m)) & ((1 << (copies * m)) - 1)
            if block_bits == 0:
                continue
            f0 = f1 = Fraction(1)
            for j in range(copies):
                t_mask = (block_bits >> (j * m)) & copy_mask
                if t_mask:
                    f0 *= e0[t_mask]
                    f1 *= e1[t_mask]
            factors.append((i, f0, f1))
        # Expand the product of affine factors (1-z_i) f0 + z_i f1.
        terms = {0: coef}
        for i, f0, f1 in factors:
            new: dict = {}
            diff = f1 - f0
            for zmask, c in terms.items():
                if f0 != 0:
                    new[zmask] = new.get(zmask, Fraction(0)) + c * f0
                if diff != 0:
                    zm = zmask | (1 << i)
                    new[zm] = new.get(zm, Fraction(0)) + c * diff
            terms = new
        for zmask, c in terms.items():
            out[zmask] = out.get(zmask, Fraction(0)) + c
    return MultilinearPolynomial(n_blocks, out)


# ---------------------------------------------------------------------------
# middle layers
# ---------------------------------------------------------------------------

def majority_vote_prob(t: int, q: Fraction) -> Fraction:
    """P(MAJ_t = 1) for t independent coins of bias q, exact."""
    if t % 2 == 0 or t < 1:
        raise UsageError("majority needs an odd positive number of coins")
    q = Fraction(q)
    total = Fraction(0)
    for k in range((t + 1) // 2, t + 1):
        total += math.comb(t, k) * q**k * (1 - q) ** (t - k)
    return total


def all_ones_prob(t: int, q: Fraction) -> Fraction:
    """P(AND_t = 1) for t independent coins of bias q."""
    if t < 1:
        raise UsageError("need at least one coin")
    return Fraction(q) ** t


MiddleSpec = Union[str, BooleanFunction]      # "MAJ" | "AND" | explicit function


@dataclass
class AmplifierReport:
    outer: str
    inner: str
    middle: str
    copies: int
    epsilon: Fraction
    delta: Fraction
    d_inner: int
    mu1_expectation: Fraction
    mu0_expectation: Fraction
    deg_before: int
    deg_after: int
    approx_error_of_Lp: Fraction
    bound_used: Fraction
    noise_bound: Fraction              # exact |z - z'| bound from the coin tails
    delta_actual: Fraction             # exact max_z |f(z) - f~(z')|
    degree_reduction_ok: bool
    approximation_ok: bool
    mu_ok: bool
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        enc = lambda v: format_rational(v) if isinstance(v, Fraction) else v
        return {k: enc(v) for k, v in self.__dict__.items() if k != "details"}

    CSV_COLUMNS = [
        "outer", "inner", "middle", "copies", "epsilon", "delta", "d_inner",
        "mu1_expectation", "mu0_expectation", "deg_before", "deg_after",
        "approx_error_of_Lp", "bound_used", "noise_bound", "delta_actual",
        "degree_reduction_ok", "approximation_ok", "mu_ok",
    ]

    def csv_row(self) -> list:
        obj = self.to_json()
        return [obj[c] for c in self.CSV_COLUMNS]


def _middle_function(middle: MiddleSpec, t: int) -> BooleanFunction:
    if isinstance(middle, BooleanFunction):
        return middle
    tag = middle.upper()
    if tag == "MAJ":
        return make_builtin("MAJ", t)
    if tag == "AND":
        return make_builtin("AND", t)
    raise UsageError(f"middle must be 'MAJ', 'AND', or a BooleanFunction, got {middle!r}")


def verify_amplifier_pipeline(f: BooleanFunction, g: BooleanFunction, t: int,
                              eps: Fraction, delta: Fraction,
                              middle: MiddleSpec = "MAJ", *,
                              config: Optional[DegreesConfig] = None,
                              inner_witness: Optional[DualWitness] = None
                              ) -> AmplifierReport:
    """Execute the full amplification argument on a concrete instance.

    Steps: inner dual at threshold (1-eps)/2 (one-sided at eps for the AND
    middle), split, eps-approximant p of outer o middle o inner, apply L,
    then measure the mu-errors, the degree drop against purity, and the
    exact error of Lp against the outer function.
    """
    eps = Fraction(eps)
    delta = Fraction(delta)
    if not Fraction(0) < eps < Fraction(1, 2):
        raise PreconditionError("eps must lie in (0, 1/2)")
    generic = isinstance(middle, BooleanFunction)
    mid_fn = _middle_function(middle, t)
    mid_name = middle if not generic else f"given:{middle.tt_literal()}"
    one_sided = (not generic) and middle.upper() == "AND"

    # Inner dual witness and its split.
    if generic:
        inner = compose(mid_fn, [g] * mid_fn.arity)
        threshold = (1 - eps) / 2
        copies_for_L = 1
    else:
        inner = g
        threshold = eps if one_sided else (1 - eps) / 2
        copies_for_L = t
    if inner_witness is None:
        if one_sided:
            d_inner = one_sided_approx_degree(inner, threshold, config=config,
                                              want_witness=False).degree
            witness = dual_witness(inner, threshold, d_inner, one_sided=True,
                                   config=config)
        else:
            d_inner = approx_degree(inner, threshold, config=config,
                                    want_witness=False).degree
            witness = dual_witness(inner, threshold, d_inner, config=config)
        if isinstance(witness, Refutation):
            raise InvariantError("no witness at the inner function's own degree")
    else:
        witness = inner_witness
        d_inner = witness.purity_degree
    split = split_dual(witness)

    q1 = mu_expectation(split, inner, 1)
    q0 = mu_expectation(split, inner, 0)
    if q1 <= Fraction(1, 2) or q0 >= Fraction(1, 2):
        raise PreconditionError(
            f"degenerate witness: E_mu1={q1}, E_mu0={q0}; majority amplification "
            "is meaningless past 1/2"
        )
    if one_sided:
        # One-sided support: mu1 lives inside inner^-1(1), and correlation
        # above eps forces E_mu0 = 1 - 2 corr < 1 - 2 eps.
        mu_ok = q1 == 1 and q0 < 1 - 2 * Fraction(witness.epsilon)
    else:
        mu_ok = q1 > 1 - eps and q0 < eps

    # The composed function and its approximant.
    if generic:
        big = compose(f, [inner] * f.arity)
    else:
        layer = compose(f, [mid_fn] * f.arity)
        big = compose(layer, [g] * (f.arity * t))
    cert = approx_degree(big, eps, config=config, want_witness=False)
    p_h = cert.approximant

    Lp = apply_L(p_h, split, n_blocks=f.arity, copies=copies_for_L)

    # Exact wire values z' and the noise they inflict on the outer function.
    if generic:
        tau0, tau1 = q0, q1
    elif one_sided:
        tau0, tau1 = all_ones_prob(t, q0), all_ones_prob(t, q1)
    else:
        tau0, tau1 = majority_vote_prob(t, q0), majority_vote_prob(t, q1)
    noise = max(tau0 - 0, 1 - tau1)
    f_tilde = interpolate(f)
    delta_actual = Fraction(0)
    for z in range(1 << f.arity):
        point = [tau1 if (z >> i) & 1 else tau0 for i in range(f.arity)]
        err = abs(Fraction(f.value_at(z)) - f_tilde.evaluate(point))
        if err > delta_actual:
            delta_actual = err

    err_Lp = linf_error(Lp, f)
    deg_before, deg_after = p_h.degree(), Lp.degree()
    report = AmplifierReport(
        outer=f.tt_literal(), inner=g.tt_literal(), middle=str(mid_name),
        copies=t, epsilon=eps, delta=delta, d_inner=d_inner,
        mu1_expectation=q1, mu0_expectation=q0,
        deg_before=deg_before, deg_after=deg_after,
        approx_error_of_Lp=err_Lp, bound_used=delta + eps,
        noise_bound=noise, delta_actual=delta_actual,
        degree_reduction_ok=deg_after <= deg_before // d_inner,
        approximation_ok=err_Lp <= delta + eps,
        mu_ok=bool(mu_ok),
        details={"witness_correlation": format_rational(witness.correlation),
                 "threshold": format_rational(threshold),
                 "composed_adeg": cert.degree},
    )
    return report

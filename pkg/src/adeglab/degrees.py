"""Degree measures with machine-checkable certificates.

Four measures are computed, each by ascending-d linear programs:

* exact degree        - degree of the unique multilinear interpolation;
* approximate degree  - least d with a degree-d polynomial within eps of f
                        everywhere on the cube (closed inequality);
* sign degree         - least d admitting p with (1-2f(x)) p(x) > 0 for all
                        x (normalized to margin >= 1, which is scale-free);
* one-sided degree    - least d admitting p with |p-1| <= eps on f^-1(1) and
                        p <= eps on f^-1(0).

Certificates: the upper bound is an exact-rational polynomial whose error
is re-verified exactly by a zeta transform over the whole cube; the lower
bound is a dual witness psi with l1-mass exactly 1, exact orthogonality to
every monomial of degree < d, and exact correlation strictly above eps.
At exact equality (correlation == eps) the witness is rejected: the strict
inequality is decided in rationals, never in floats.

Strategy ladder: problems whose LP fits the exact nonzero cap are solved by
the rational simplex directly.  Larger ones are solved in floats (HiGHS) and
then made exact: approximants are rounded to dyadic rationals and verified;
witnesses are rounded and their orthogonality defects cancelled exactly by
subcube correction measures (for each monomial T, the signed measure
(-1)^{|T \\ R|} on the points with support R inside T has exactly the moment
pattern delta_{S,T}, so small defects can be zeroed without touching the
rest), then renormalized to l1-mass 1 and re-verified exactly.  Either way
the returned certificate is exact; when a float margin is too thin to round
safely the call escalates or fails loudly instead of guessing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import lp
from .boolfn import BooleanFunction
from .cache import CertificateCache, shared_cache
from .errors import BudgetError, InvariantError, PreconditionError, UsageError
from .polynomial import MultilinearPolynomial, interpolate, linf_error
from .rational import format_rational, parse_rational

_APPROX_MAX_ARITY = 16


@dataclass
class DegreesConfig:
    nonzero_cap: int = lp.DEFAULT_EXACT_NONZERO_CAP
    exact_direct_cells: int = 20_000   # tableau cells below which the rational
                                       # simplex is cheaper than float+reconstruct
    exact_escalate_cells: int = 150_000  # ceiling for knife-edge escalations
    accept_margin: float = 1e-6     # float value must clear thresholds by this much
    escalate_margin: float = 1e-5   # float margins below this force exact handling
    round_bits: int = 48            # dyadic denominator for float->rational rounding
    float_tolerance: float = 1e-7
    use_cache: bool = True
    dump_dir: Optional[str] = None


_DEFAULT_CONFIG = DegreesConfig()


def _tableau_cells(problem: lp.LpProblem) -> int:
    # Tableau width includes one slack and one artificial per row; a pivot
    # touches every cell, so tall problems are far costlier than their
    # nonzero count suggests.
    m = len(problem.rows)
    return m * (problem.num_vars() + 2 * m)


def _fits_direct(problem: lp.LpProblem, cfg: DegreesConfig) -> bool:
    return (problem.nonzeros() <= cfg.nonzero_cap
            and _tableau_cells(problem) <= cfg.exact_direct_cells)


def _fits_escalation(problem: lp.LpProblem, cfg: DegreesConfig) -> bool:
    return (problem.nonzeros() <= cfg.nonzero_cap
            and _tableau_cells(problem) <= cfg.exact_escalate_cells)


# ---------------------------------------------------------------------------
# certificate objects
# ---------------------------------------------------------------------------

@dataclass
class DualWitness:
    """psi certifying adeg_eps(f) >= purity_degree via the dual conditions."""

    arity: int
    values: dict                    # point index -> Fraction, support only
    purity_degree: int
    epsilon: Fraction
    correlation: Fraction
    one_sided: bool = False

    def to_json(self) -> dict:
        return {
            "arity": self.arity,
            "purity_degree": self.purity_degree,
            "epsilon": format_rational(self.epsilon),
            "correlation": format_rational(self.correlation),
            "one_sided": self.one_sided,
            "values": {str(k): format_rational(v) for k, v in sorted(self.values.items())},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DualWitness":
        return cls(
            arity=int(obj["arity"]),
            values={int(k): parse_rational(v) for k, v in obj["values"].items()},
            purity_degree=int(obj["purity_degree"]),
            epsilon=parse_rational(obj["epsilon"]),
            correlation=parse_rational(obj["correlation"]),
            one_sided=bool(obj["one_sided"]),
        )


@dataclass
class Refutation:
    """Optimal dual correlation <= epsilon: certifies adeg_eps(f) < purity_degree."""

    arity: int
    purity_degree: int
    epsilon: Fraction
    optimal_correlation: Optional[Fraction]   # None when the dual LP is infeasible (n = 0)
    one_sided: bool = False
    exact: bool = True
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "arity": self.arity,
            "purity_degree": self.purity_degree,
            "epsilon": format_rational(self.epsilon),
            "optimal_correlation": None if self.optimal_correlation is None
            else format_rational(self.optimal_correlation),
            "one_sided": self.one_sided,
            "exact": self.exact,
        }


@dataclass
class DegreeCertificate:
    kind: str                        # "exact" | "approx" | "sign" | "one_sided"
    degree: int
    epsilon: Optional[Fraction] = None
    approximant: Optional[MultilinearPolynomial] = None
    witness: Optional[DualWitness] = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "degree": self.degree,
            "epsilon": None if self.epsilon is None else format_rational(self.epsilon),
            "approximant": None if self.approximant is None else {
                "arity": self.approximant.arity,
                "terms": self.approximant.to_json(),
            },
            "witness": None if self.witness is None else self.witness.to_json(),
            "details": {k: v for k, v in self.details.items() if isinstance(v, (str, int, float, bool))},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DegreeCertificate":
        approximant = None
        if obj.get("approximant") is not None:
            approximant = MultilinearPolynomial.from_json(
                obj["approximant"]["arity"], obj["approximant"]["terms"]
            )
        witness = DualWitness.from_json(obj["witness"]) if obj.get("witness") else None
        return cls(
            kind=obj["kind"],
            degree=int(obj["degree"]),
            epsilon=None if obj.get("epsilon") is None else parse_rational(obj["epsilon"]),
            approximant=approximant,
            witness=witness,
            details=dict(obj.get("details", {})),
        )


# ---------------------------------------------------------------------------
# monomial machinery
# ---------------------------------------------------------------------------

def monomial_masks(n: int, max_degree: int) -> list:
    """Variable-subset bitmasks of size <= max_degree, by (size, value)."""
    out = []
    for k in range(min(max_degree, n) + 1):
        for combo in itertools.combinations(range(n), k):
            mask = 0
            for i in combo:
                mask |= 1 << i
            out.append(mask)
    out.sort(key=lambda m: (m.bit_count(), m))
    return out


def _superset_sums(dense: list, n: int) -> list:
    """a[S] = sum over points x containing S of dense[x] (in place on a copy)."""
    a = list(dense)
    for i in range(n):
        bit = 1 << i
        for mask in range(1 << n):
            if not mask & bit:
                a[mask] += a[mask | bit]
    return a


def _sparse_moments(values: dict, max_degree: int) -> dict:
    """Moments sum_{x >= S} psi(x) for all |S| < max_degree, from sparse psi."""
    r: dict = {}
    for x, v in values.items():
        pos = [i for i in range(x.bit_length()) if x >> i & 1]
        for k in range(min(max_degree - 1, len(pos)) + 1):
            for combo in itertools.combinations(pos, k):
                s = 0
                for i in combo:
                    s |= 1 << i
                r[s] = r.get(s, Fraction(0)) + v
    return r


def verify_witness(w: DualWitness, f: BooleanFunction):
    """Exact re-check of every dual condition; raises InvariantError on failure."""
    if w.arity != f.arity:
        raise InvariantError("witness arity mismatch")
    size = 1 << w.arity
    dense = [Fraction(0)] * size
    for x, v in w.values.items():
        if not 0 <= x < size:
            raise InvariantError("witness support outside the cube")
        dense[x] = Fraction(v)
    if sum(abs(v) for v in dense) != 1:
        raise InvariantError("witness l1 mass is not exactly 1")
    moments = _superset_sums(dense, w.arity)
    for mask in monomial_masks(w.arity, w.purity_degree - 1):
        if moments[mask] != 0:
            raise InvariantError(
                f"witness is not orthogonal to monomial {mask:#x} of degree "
                f"{mask.bit_count()} < {w.purity_degree}"
            )
    bits = f.bits()
    corr = sum((dense[x] for x in range(size) if bits[x]), Fraction(0))
    if corr != w.correlation:
        raise InvariantError("recorded witness correlation is wrong")
    if not corr > w.epsilon:
        raise InvariantError("witness correlation does not exceed epsilon strictly")
    if w.one_sided:
        for x in range(size):
            if not bits[x] and dense[x] > 0:
                raise InvariantError("one-sided witness is positive on a 0-input")


def verify_approximant(p: MultilinearPolynomial, f: BooleanFunction,
                       eps: Fraction, one_sided: bool = False):
    """Exact re-check that p eps-approximates f (one-sided variant optional)."""
    if p.arity != f.arity:
        raise InvariantError("approximant arity mismatch")
    bits = f.bits()
    vals = p.values_on_cube()
    for x in range(1 << f.arity):
        v = vals[x]
        if bits[x]:
            if abs(v - 1) > eps:
                raise InvariantError(f"approximant misses a 1-input by {abs(v - 1)}")
        elif one_sided:
            if v > eps:
                raise InvariantError(f"approximant exceeds eps on a 0-input by {v - eps}")
        elif abs(v) > eps:
            raise InvariantError(f"approximant misses a 0-input by {abs(v)}")


def verify_sign_representation(p: MultilinearPolynomial, f: BooleanFunction):
    bits = f.bits()
    vals = p.values_on_cube()
    for x in range(1 << f.arity):
        if (1 - 2 * int(bits[x])) * vals[x] <= 0:
            raise InvariantError("claimed sign representation has a wrong sign")


# ---------------------------------------------------------------------------
# LP builders
# ---------------------------------------------------------------------------

def _minimax_problem(f: BooleanFunction, d: int, one_sided: bool) -> tuple:
    """min e over degree-<=d polynomials; rows constrain |p - f| by e."""
    n = f.arity
    masks = monomial_masks(n, d)
    nm = len(masks)
    bits = f.bits()
    rows = []
    for x in range(1 << n):
        row = [Fraction(1) if (x & m) == m else Fraction(0) for m in masks]
        target = Fraction(int(bits[x]))
        if one_sided and not bits[x]:
            rows.append((row + [Fraction(-1)], lp.LEQ, target))      # p - e <= 0
        else:
            rows.append((row + [Fraction(-1)], lp.LEQ, target))      # p - e <= f
            rows.append((row + [Fraction(1)], lp.GEQ, target))       # p + e >= f
    problem = lp.LpProblem(
        objective=[Fraction(0)] * nm + [Fraction(1)],
        sense="min",
        rows=rows,
        bounds=[(None, None)] * nm + [(Fraction(0), None)],
        name=f"minimax-{'one_sided-' if one_sided else ''}n{n}-d{d}",
    )
    return problem, masks


def _dual_problem(f: BooleanFunction, d: int, one_sided: bool) -> tuple:
    """max correlation of psi with f, st. l1 <= 1 and orthogonality below d.

    Variables are the split psi = psi_plus - psi_minus; in the one-sided case
    psi_plus exists only on f^-1(1) (psi <= 0 elsewhere).
    """
    n = f.arity
    size = 1 << n
    bits = f.bits()
    plus_idx = [x for x in range(size) if (not one_sided) or bits[x]]
    minus_idx = list(range(size))
    nv = len(plus_idx) + len(minus_idx)
    obj = [Fraction(int(bits[x])) for x in plus_idx] + \
          [Fraction(-int(bits[x])) for x in minus_idx]
    rows = [([Fraction(1)] * nv, lp.LEQ, Fraction(1))]
    for mask in monomial_masks(n, d - 1):
        row = [Fraction(1) if (x & mask) == mask else Fraction(0) for x in plus_idx]
        row += [Fraction(-1) if (x & mask) == mask else Fraction(0) for x in minus_idx]
        rows.append((row, lp.EQ, Fraction(0)))
    problem = lp.LpProblem(
        objective=obj, sense="max", rows=rows,
        bounds=[(Fraction(0), None)] * nv,
        name=f"dual-{'one_sided-' if one_sided else ''}n{n}-d{d}",
    )
    return problem, plus_idx, minus_idx


def _sign_problem(f: BooleanFunction, d: int) -> tuple:
    """min s st. (1-2f(x)) p(x) >= 1 - s; s* == 0 iff a sign rep of degree d exists."""
    n = f.arity
    masks = monomial_masks(n, d)
    bits = f.bits()
    rows = []
    for x in range(1 << n):
        sign = 1 - 2 * int(bits[x])
        row = [Fraction(sign) if (x & m) == m else Fraction(0) for m in masks]
        rows.append((row + [Fraction(1)], lp.GEQ, Fraction(1)))
    problem = lp.LpProblem(
        objective=[Fraction(0)] * len(masks) + [Fraction(1)],
        sense="min", rows=rows,
        bounds=[(None, None)] * len(masks) + [(Fraction(0), None)],
        name=f"sign-n{n}-d{d}",
    )
    return problem, masks


def _poly_from_vector(arity: int, masks, coeffs) -> MultilinearPolynomial:
    return MultilinearPolynomial(arity, {m: Fraction(c) for m, c in zip(masks, coeffs) if c})


# ---------------------------------------------------------------------------
# float -> exact reconstruction
# ---------------------------------------------------------------------------

def _round_candidates(values: Sequence[float], round_bits: int):
    """Yield exact-rational roundings of a float vector, nicest first."""
    for den_cap in (4, 12, 60, 720, 10080):
        yield [Fraction(v).limit_denominator(den_cap) for v in values]
    scale = 1 << round_bits
    yield [Fraction(round(v * scale), scale) for v in values]


def _repair_orthogonality(values: dict, n: int, d: int) -> dict:
    """Add subcube correction measures so all moments of degree < d vanish.

    For a monomial set T the signed measure eta_T(x) = (-1)^{|T| - |R|} on
    points with support R inside T satisfies moment(eta_T, S) = [S == T], so
    subtracting r_T * eta_T cancels the defect at T without creating new ones.
    """
    defects = _sparse_moments(values, d)
    out = dict(values)
    for t_mask, r in defects.items():
        if r == 0:
            continue
        pos = [i for i in range(n) if t_mask >> i & 1]
        for k in range(len(pos) + 1):
            for combo in itertools.combinations(pos, k):
                x = 0
                for i in combo:
                    x |= 1 << i
                signc = -1 if (len(pos) - k) % 2 else 1
                out[x] = out.get(x, Fraction(0)) - r * signc
    return {x: v for x, v in out.items() if v != 0}


def _witness_from_float(f: BooleanFunction, d: int, eps: Fraction,
                        psi_float: dict, cfg: DegreesConfig) -> DualWitness:
    scale = 1 << cfg.round_bits
    rounded = {}
    for x, v in psi_float.items():
        if abs(v) > 0.5 / scale:
            rounded[x] = Fraction(round(v * scale), scale)
    repaired = _repair_orthogonality(rounded, f.arity, d)
    mass = sum(abs(v) for v in repaired.values())
    if mass == 0:
        raise InvariantError("witness reconstruction collapsed to zero")
    normalized = {x: v / mass for x, v in repaired.items()}
    bits = f.bits()
    corr = sum((v for x, v in normalized.items() if bits[x]), Fraction(0))
    w = DualWitness(arity=f.arity, values=normalized, purity_degree=d,
                    epsilon=eps, correlation=corr)
    verify_witness(w, f)
    return w


# ---------------------------------------------------------------------------
# feasibility ladders
# ---------------------------------------------------------------------------

def _approx_feasible_at(f: BooleanFunction, d: int, eps: Fraction, one_sided: bool,
                        mode: str, cfg: DegreesConfig):
    """Decide whether a degree-<=d polynomial achieves error <= eps.

    Returns (feasible, approximant-or-None, details).  The returned
    approximant is always exactly verified, whichever path produced it.
    """
    problem, masks = _minimax_problem(f, d, one_sided)
    details = {"degree": d}

    def exact_path():
        out = lp.solve(problem, "exact", nonzero_cap=cfg.nonzero_cap,
                       dump=_dump_path(cfg, problem.name))
        e_star = out.objective_value
        details.update(e_star=format_rational(e_star), path="exact-simplex")
        if e_star <= eps:
            poly = _poly_from_vector(f.arity, masks, out.primal[:-1])
            verify_approximant(poly, f, eps, one_sided)
            return True, poly, details
        return False, None, details

    if _fits_direct(problem, cfg) and mode != "float":
        return exact_path()

    out = lp.solve(problem, "float", tolerance=cfg.float_tolerance,
                   dump=_dump_path(cfg, problem.name))
    if out.status != "optimal":
        raise InvariantError(f"minimax LP unexpectedly {out.status}")
    e_star = out.objective_value
    margin = abs(e_star - float(eps))
    details.update(e_star=repr(e_star), path="float+round", margin=margin)
    if margin <= cfg.escalate_margin and _fits_escalation(problem, cfg):
        details["escalated"] = True
        return exact_path()
    if e_star <= float(eps) - cfg.accept_margin or margin <= cfg.accept_margin:
        for cand in _round_candidates(out.primal[:-1], cfg.round_bits):
            poly = _poly_from_vector(f.arity, masks, cand)
            try:
                verify_approximant(poly, f, eps, one_sided)
            except InvariantError:
                continue
            return True, poly, details
        if margin <= cfg.accept_margin:
            raise BudgetError(
                f"degree-{d} feasibility sits on the eps knife edge "
                f"(float optimum {e_star!r}) and the LP is over the exact cap"
            )
        raise InvariantError("float-feasible approximant failed exact verification")
    return False, None, details


def _dual_optimum(f: BooleanFunction, d: int, eps: Fraction, one_sided: bool,
                  mode: str, cfg: DegreesConfig):
    """Maximize dual correlation at purity d; returns witness or refutation."""
    if f.arity == 0:
        return Refutation(arity=0, purity_degree=d, epsilon=eps,
                          optimal_correlation=None, one_sided=one_sided,
                          details={"reason": "dual LP infeasible on the empty cube"})
    problem, plus_idx, minus_idx = _dual_problem(f, d, one_sided)
    if (mode != "float" or one_sided) and (_fits_direct(problem, cfg) or (one_sided and _fits_escalation(problem, cfg))):
        out = lp.solve(problem, "exact", nonzero_cap=cfg.nonzero_cap,
                       dump=_dump_path(cfg, problem.name))
        corr = out.objective_value
        if corr > eps:
            np_ = len(plus_idx)
            values: dict = {}
            for j, x in enumerate(plus_idx):
                values[x] = values.get(x, Fraction(0)) + out.primal[j]
            for j, x in enumerate(minus_idx):
                values[x] = values.get(x, Fraction(0)) - out.primal[np_ + j]
            values = {x: v for x, v in values.items() if v != 0}
            mass = sum(abs(v) for v in values.values())
            if mass != 1:      # overlap between the split halves cancelled out
                values = {x: v / mass for x, v in values.items()}
                corr = corr / mass
            w = DualWitness(arity=f.arity, values=values, purity_degree=d,
                            epsilon=eps, correlation=corr, one_sided=one_sided)
            verify_witness(w, f)
            return w
        return Refutation(arity=f.arity, purity_degree=d, epsilon=eps,
                          optimal_correlation=corr, one_sided=one_sided)

    if one_sided:
        raise BudgetError(
            f"one-sided dual LP for arity {f.arity} exceeds the exact cap "
            "(no float reconstruction path for the sign-constrained dual)"
        )
    out = lp.solve(problem, "float", tolerance=cfg.float_tolerance,
                   dump=_dump_path(cfg, problem.name))
    if out.status != "optimal":
        raise InvariantError(f"dual LP unexpectedly {out.status}")
    v_star = out.objective_value
    if abs(v_star - float(eps)) <= cfg.escalate_margin and _fits_escalation(problem, cfg):
        return _dual_optimum(f, d, eps, one_sided, "exact", cfg)
    if v_star > float(eps) + cfg.accept_margin:
        np_ = len(plus_idx)
        psi_float: dict = {}
        for j, x in enumerate(plus_idx):
            psi_float[x] = psi_float.get(x, 0.0) + out.primal[j]
        for j, x in enumerate(minus_idx):
            psi_float[x] = psi_float.get(x, 0.0) - out.primal[np_ + j]
        return _witness_from_float(f, d, eps, psi_float, cfg)
    if v_star < float(eps) - cfg.accept_margin:
        # Certify the refutation through the primal side: an exact degree-(d-1)
        # approximant proves adeg <= d-1 < d.
        feasible, poly, _ = _approx_feasible_at(f, d - 1, eps, False, mode, cfg)
        if not feasible:
            raise InvariantError("float refutation contradicts exact primal feasibility")
        return Refutation(arity=f.arity, purity_degree=d, epsilon=eps,
                          optimal_correlation=Fraction(v_star).limit_denominator(10**9),
                          one_sided=one_sided, exact=False,
                          details={"certified_by": f"exact approximant at degree {d - 1}"})
    raise BudgetError(
        f"dual optimum at purity {d} sits on the eps knife edge "
        f"(float optimum {v_star!r}) and the LP is over the exact cap"
    )


def _dump_path(cfg: DegreesConfig, name: str):
    if cfg.dump_dir is None:
        return None
    import os
    os.makedirs(cfg.dump_dir, exist_ok=True)
    return os.path.join(cfg.dump_dir, f"{name}.lp")


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def _check_eps(eps: Fraction):
    eps = Fraction(eps)
    if not Fraction(0) < eps < Fraction(1, 2):
        raise PreconditionError(f"epsilon must lie in (0, 1/2), got {eps}")
    return eps


def exact_degree(f: BooleanFunction) -> DegreeCertificate:
    """Degree of the unique multilinear representation, with the polynomial."""
    poly = interpolate(f)
    if linf_error(poly, f) != 0:
        raise InvariantError("interpolation failed to reproduce the table")
    return DegreeCertificate(kind="exact", degree=poly.degree(), approximant=poly)


def approx_degree(f: BooleanFunction, eps: Fraction = Fraction(1, 3), *,
                  mode: str = "exact", want_witness: bool = True,
                  config: Optional[DegreesConfig] = None,
                  cache: Optional[CertificateCache] = None) -> DegreeCertificate:
    """Least d admitting a degree-d eps-approximant; both certificates attached."""
    eps = _check_eps(eps)
    cfg = config or _DEFAULT_CONFIG
    if f.arity > _APPROX_MAX_ARITY:
        raise BudgetError(f"approximate degree capped at arity {_APPROX_MAX_ARITY}")
    cache = cache if cache is not None else (shared_cache() if cfg.use_cache else None)
    key = CertificateCache.key("approx", f.arity, f"{f.table:x}", eps, mode, want_witness)
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            cert = DegreeCertificate.from_json(hit)
            _reverify_certificate(cert, f, eps)
            return cert

    if f.is_constant():
        poly = MultilinearPolynomial.constant(f.arity, f.value_at(0))
        cert = DegreeCertificate(kind="approx", degree=0, epsilon=eps,
                                 approximant=poly, details={"constant": True})
    else:
        cert = None
        for d in range(1, f.arity + 1):
            feasible, poly, details = _approx_feasible_at(f, d, eps, False, mode, cfg)
            if feasible:
                witness = None
                if want_witness:
                    witness = dual_witness(f, eps, d, mode=mode, config=cfg, cache=cache)
                    if isinstance(witness, Refutation):
                        raise InvariantError(
                            f"primal says degree {d - 1} is infeasible but the dual "
                            f"refutes purity {d}: duality violated"
                        )
                cert = DegreeCertificate(kind="approx", degree=d, epsilon=eps,
                                         approximant=poly, witness=witness,
                                         details=details)
                break
        if cert is None:
            raise InvariantError("interpolation degree bound violated in the search")

    if cache is not None:
        cache.put(key, cert.to_json())
    return cert


def dual_witness(f: BooleanFunction, eps: Fraction, d: int, *,
                 one_sided: bool = False, mode: str = "exact",
                 config: Optional[DegreesConfig] = None,
                 cache: Optional[CertificateCache] = None):
    """Witness with purity d and correlation > eps, or a Refutation.

    A returned DualWitness certifies adeg_eps(f) >= d (odeg for the one-sided
    flavour); a Refutation carries the optimal correlation and certifies the
    opposite strict inequality.
    """
    eps = _check_eps(eps)
    if d < 1:
        raise PreconditionError("purity degree must be >= 1")
    cfg = config or _DEFAULT_CONFIG
    cache = cache if cache is not None else (shared_cache() if cfg.use_cache else None)
    key = CertificateCache.key("dual", f.arity, f"{f.table:x}", eps, d, one_sided, mode)
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            if hit.get("witness"):
                w = DualWitness.from_json(hit["witness"])
                verify_witness(w, f)
                return w
            r = hit["refutation"]
            return Refutation(
                arity=f.arity, purity_degree=d, epsilon=eps,
                optimal_correlation=None if r["optimal_correlation"] is None
                else parse_rational(r["optimal_correlation"]),
                one_sided=one_sided, exact=bool(r.get("exact", True)))

    result = _dual_optimum(f, d, eps, one_sided, mode, cfg)
    if cache is not None:
        if isinstance(result, DualWitness):
            cache.put(key, {"witness": result.to_json()})
        else:
            cache.put(key, {"refutation": result.to_json()})
    return result


def sign_degree(f: BooleanFunction, *, mode: str = "exact",
                config: Optional[DegreesConfig] = None,
                cache: Optional[CertificateCache] = None) -> DegreeCertificate:
    """Least degree of a polynomial with (1-2f(x)) p(x) > 0 everywhere."""
    cfg = config or _DEFAULT_CONFIG
    cache = cache if cache is not None else (shared_cache() if cfg.use_cache else None)
    key = CertificateCache.key("sign", f.arity, f"{f.table:x}", mode)
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            cert = DegreeCertificate.from_json(hit)
            if cert.approximant is not None:
                verify_sign_representation(cert.approximant, f)
            return cert

    cert = None
    for d in range(0, f.arity + 1):
        problem, masks = _sign_problem(f, d)
        if _fits_direct(problem, cfg):
            out = lp.solve(problem, "exact", nonzero_cap=cfg.nonzero_cap,
                           dump=_dump_path(cfg, problem.name))
            if out.objective_value == 0:
                poly = _poly_from_vector(f.arity, masks, out.primal[:-1])
                verify_sign_representation(poly, f)
                cert = DegreeCertificate(kind="sign", degree=d, approximant=poly,
                                         details={"path": "exact-simplex"})
                break
        else:
            out = lp.solve(problem, "float", tolerance=cfg.float_tolerance,
                           dump=_dump_path(cfg, problem.name))
            s_star = out.objective_value
            if s_star <= cfg.escalate_margin:
                found = False
                for cand in _round_candidates(out.primal[:-1], cfg.round_bits):
                    poly = _poly_from_vector(f.arity, masks, cand)
                    try:
                        verify_sign_representation(poly, f)
                    except InvariantError:
                        continue
                    cert = DegreeCertificate(kind="sign", degree=d, approximant=poly,
                                             details={"path": "float+round"})
                    found = True
                    break
                if found:
                    break
                raise BudgetError(
                    f"sign LP at degree {d} is float-feasible (s*={s_star!r}) but no "
                    "rounded representation verified and the LP is over the exact cap"
                )
    if cert is None:
        raise InvariantError("sign degree search exceeded the arity bound")
    if cache is not None:
        cache.put(key, cert.to_json())
    return cert


def is_full_sign_degree(f: BooleanFunction, **kwargs) -> bool:
    return sign_degree(f, **kwargs).degree == f.arity


def one_sided_approx_degree(f: BooleanFunction, eps: Fraction = Fraction(1, 3), *,
                            mode: str = "exact", want_witness: bool = True,
                            config: Optional[DegreesConfig] = None,
                            cache: Optional[CertificateCache] = None) -> DegreeCertificate:
    """Least d with |p-1| <= eps on 1-inputs and p <= eps on 0-inputs."""
    eps = _check_eps(eps)
    cfg = config or _DEFAULT_CONFIG
    cache = cache if cache is not None else (shared_cache() if cfg.use_cache else None)
    key = CertificateCache.key("one_sided", f.arity, f"{f.table:x}", eps, mode, want_witness)
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            cert = DegreeCertificate.from_json(hit)
            _reverify_certificate(cert, f, eps)
            return cert

    cert = None
    for d in range(0, f.arity + 1):
        feasible, poly, details = _approx_feasible_at(f, d, eps, True, mode, cfg)
        if feasible:
            witness = None
            if want_witness and d >= 1:
                witness = dual_witness(f, eps, d, one_sided=True, mode=mode,
                                       config=cfg, cache=cache)
                if isinstance(witness, Refutation):
                    raise InvariantError("one-sided duality violated")
            cert = DegreeCertificate(kind="one_sided", degree=d, epsilon=eps,
                                     approximant=poly, witness=witness,
                                     details=details)
            break
    if cert is None:
        raise InvariantError("one-sided degree search exceeded the arity bound")
    if cache is not None:
        cache.put(key, cert.to_json())
    return cert


def _reverify_certificate(cert: DegreeCertificate, f: BooleanFunction, eps: Fraction):
    if cert.approximant is not None and cert.kind in ("approx", "one_sided"):
        verify_approximant(cert.approximant, f, eps, one_sided=cert.kind == "one_sided")
    if cert.witness is not None:
        verify_witness(cert.witness, f)

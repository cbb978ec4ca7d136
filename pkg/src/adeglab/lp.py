"""Dense linear programming with an exact-rational mode and a float fallback.

Exact mode is a self-contained two-phase tableau simplex over Fractions.
Pivoting uses Dantzig's rule with a permanent switch to Bland's rule after a
degeneracy stall, so termination is guaranteed.  Every Optimal outcome is
re-verified before being returned: primal feasibility is rechecked exactly in
the original problem space, and in the standard-form space we recheck dual
feasibility plus exact strong duality (objective equality), which together
imply complementary slackness.  Infeasible outcomes carry an exactly verified
Farkas certificate from phase one.

Float mode delegates to scipy's HiGHS (`scipy.optimize.linprog`) and reports
the measured constraint violation and duality gap; violations beyond the
tolerance are rejected.  Exact mode is capped by a configurable nonzero
budget; the callers that need exact answers above the cap reconstruct them
from float solutions and re-verify with exact arithmetic on their side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import BudgetError, InvariantError, UsageError
from .rational import format_rational

LEQ, EQ, GEQ = "<=", "=", ">="

DEFAULT_EXACT_NONZERO_CAP = 20_000
_STALL_LIMIT = 60          # objective-flat pivots before switching to Bland
_ITERATION_CAP = 500_000


@dataclass
class LpProblem:
    objective: list
    sense: str                       # "max" | "min"
    rows: list                       # (coefficients, relation, rhs)
    bounds: Optional[list] = None    # per-variable (lower, upper); None side = unbounded;
                                     # bounds=None means every variable is free
    name: str = "lp"

    def num_vars(self) -> int:
        return len(self.objective)

    def validate(self):
        nv = self.num_vars()
        if nv == 0:
            raise UsageError("LP needs at least one variable")
        if self.sense not in ("max", "min"):
            raise UsageError(f"bad sense {self.sense!r}")
        for coefs, rel, _rhs in self.rows:
            if len(coefs) != nv:
                raise UsageError("constraint width differs from objective width")
            if rel not in (LEQ, EQ, GEQ):
                raise UsageError(f"bad relation {rel!r}")
        if self.bounds is not None and len(self.bounds) != nv:
            raise UsageError("bounds list width differs from objective width")

    def nonzeros(self) -> int:
        n = sum(1 for c in self.objective if c)
        for coefs, _rel, _rhs in self.rows:
            n += sum(1 for c in coefs if c)
        return n


@dataclass
class LpOutcome:
    status: str                      # "optimal" | "infeasible" | "unbounded"
    primal: Optional[list] = None
    dual: Optional[list] = None      # shadow price per original row: d(objective)/d(rhs)
    objective_value: object = None   # Fraction in exact mode, float in float mode
    details: dict = field(default_factory=dict)


def solve(problem: LpProblem, mode: str = "exact", tolerance: float = 1e-7,
          nonzero_cap: int = DEFAULT_EXACT_NONZERO_CAP, dump=None) -> LpOutcome:
    """Solve in the requested mode; see the module docstring for guarantees."""
    problem.validate()
    if dump is not None:
        write_lp_text(problem, dump)
    if mode == "exact":
        if problem.nonzeros() > nonzero_cap:
            raise BudgetError(
                f"LP '{problem.name}' has {problem.nonzeros()} nonzeros, over the "
                f"exact-mode cap {nonzero_cap}"
            )
        return _solve_exact(problem)
    if mode == "float":
        return _solve_float(problem, tolerance)
    raise UsageError(f"unknown LP mode {mode!r}")


# ---------------------------------------------------------------------------
# exact simplex
# ---------------------------------------------------------------------------

class _Standardized:
    """Standard-form image: min c.x st. A x = b, x >= 0, with back-maps."""

    def __init__(self, problem: LpProblem):
        nv = problem.num_vars()
        bounds = problem.bounds if problem.bounds is not None else [(None, None)] * nv
        self.sense_sign = Fraction(-1) if problem.sense == "max" else Fraction(1)

        # Variable substitutions: original x_j = offset_j + sum coef * new-var.
        self.subst = []
        self.ncols = 0
        pending_bound_rows = []      # (new_col, upper_value) for two-sided bounds
        for j in range(nv):
            lo, hi = bounds[j]
            lo = Fraction(lo) if lo is not None else None
            hi = Fraction(hi) if hi is not None else None
            if lo is not None and hi is not None:
                if hi < lo:
                    raise UsageError(f"variable {j} has empty bound interval")
                col = self._new_col()
                self.subst.append((lo, [(col, Fraction(1))]))
                pending_bound_rows.append((col, hi - lo))
            elif lo is not None:
                col = self._new_col()
                self.subst.append((lo, [(col, Fraction(1))]))
            elif hi is not None:
                col = self._new_col()
                self.subst.append((hi, [(col, Fraction(-1))]))
            else:
                cp, cn = self._new_col(), self._new_col()
                self.subst.append((Fraction(0), [(cp, Fraction(1)), (cn, Fraction(-1))]))
        self.n_struct = self.ncols

        # Rewrite rows over the new columns; record sign flips for dual mapping.
        rows = []                     # (dense coefs over struct cols, rhs)
        self.row_flip = []            # +-1 per original row
        self.is_eq = []
        for coefs, rel, rhs in problem.rows:
            dense = [Fraction(0)] * self.n_struct
            r = Fraction(rhs)
            for j, c in enumerate(coefs):
                c = Fraction(c)
                if c == 0:
                    continue
                off, terms = self.subst[j]
                r -= c * off
                for col, k in terms:
                    dense[col] += c * k
            flip = Fraction(1)
            if rel == GEQ:
                dense = [-v for v in dense]
                r = -r
                flip = -flip
            rows.append((dense, r))
            self.row_flip.append(flip)
            self.is_eq.append(rel == EQ)
        self.n_orig_rows = len(rows)
        for col, ub in pending_bound_rows:
            dense = [Fraction(0)] * self.n_struct
            dense[col] = Fraction(1)
            rows.append((dense, Fraction(ub)))
            self.is_eq.append(False)

        # Objective over new columns (constant part folded out).
        self.obj_const = Fraction(0)
        cvec = [Fraction(0)] * self.n_struct
        for j, c in enumerate(problem.objective):
            c = self.sense_sign * Fraction(c)
            if c == 0:
                continue
            off, terms = self.subst[j]
            self.obj_const += c * off
            for col, k in terms:
                cvec[col] += c * k

        # Slacks for inequality rows, then force b >= 0, then artificials.
        m = len(rows)
        self.slack_col = [None] * m
        for i in range(m):
            if not (i < self.n_orig_rows and self.is_eq[i]):
                self.slack_col[i] = self._new_col()
        self.rhs_flip = [Fraction(1)] * m
        self.A = []
        self.b = []
        for i, (dense, r) in enumerate(rows):
            row = dense + [Fraction(0)] * (self.ncols - self.n_struct)
            if self.slack_col[i] is not None:
                row[self.slack_col[i]] = Fraction(1)
            if r < 0:
                row = [-v for v in row]
                r = -r
                self.rhs_flip[i] = Fraction(-1)
            self.A.append(row)
            self.b.append(r)
        self.art_col = []
        for i in range(m):
            col = self._new_col()
            self.art_col.append(col)
            for k in range(m):
                self.A[k].append(Fraction(1) if k == i else Fraction(0))
        self.c = cvec + [Fraction(0)] * (self.ncols - self.n_struct)
        self.nrows = m

    def _new_col(self) -> int:
        col = self.ncols
        self.ncols += 1
        return col

    def primal_back(self, x_std: Sequence[Fraction]) -> list:
        out = []
        for off, terms in self.subst:
            v = off
            for col, k in terms:
                v += k * x_std[col]
            out.append(v)
        return out

    def dual_back(self, y_std: Sequence[Fraction]) -> list:
        # Reported dual = d(original objective)/d(original rhs).
        out = []
        for i in range(self.n_orig_rows):
            out.append(self.sense_sign * self.row_flip[i] * self.rhs_flip[i] * y_std[i])
        return out


def _solve_exact(problem: LpProblem) -> LpOutcome:
    std = _Standardized(problem)
    m, N = std.nrows, std.ncols
    T = [list(row) + [std.b[i]] for i, row in enumerate(std.A)]  # tableau, rhs last
    basis = list(std.art_col)
    art_set = set(std.art_col)
    stats = {"pivots": 0}

    def price_out(costs):
        r = list(costs) + [Fraction(0)]
        for i, bi in enumerate(basis):
            cb = costs[bi]
            if cb != 0:
                row = T[i]
                for j in range(N + 1):
                    if row[j] != 0:
                        r[j] -= cb * row[j]
        return r  # r[N] = -objective

    def pivot(i, j):
        row = T[i]
        piv = row[j]
        if piv != 1:
            inv = Fraction(1) / piv
            T[i] = row = [v * inv for v in row]
        for k in range(m):
            if k != i and T[k][j] != 0:
                f = T[k][j]
                rk = T[k]
                T[k] = [a - f * b for a, b in zip(rk, row)]
        f = r[j]
        if f != 0:
            for j2 in range(N + 1):
                r[j2] -= f * row[j2]
        basis[i] = j
        stats["pivots"] += 1

    def run_simplex(allowed):
        bland = False
        stall = 0
        while True:
            if stats["pivots"] > _ITERATION_CAP:
                raise InvariantError("simplex iteration cap exhausted (cycling guard)")
            entering = -1
            if bland:
                for j in range(N):
                    if allowed[j] and r[j] < 0:
                        entering = j
                        break
            else:
                best = Fraction(0)
                for j in range(N):
                    if allowed[j] and r[j] < best:
                        best = r[j]
                        entering = j
            if entering < 0:
                return "optimal"
            # Evict a zero-valued basic artificial first (degenerate pivot on any
            # nonzero entry); keeps artificials out of the way in phase 2.
            evict = -1
            for i in range(m):
                if basis[i] in art_set and T[i][entering] != 0 and T[i][N] == 0:
                    evict = i
                    break
            if evict >= 0:
                pivot(evict, entering)
                continue
            leave, best_ratio = -1, None
            for i in range(m):
                a = T[i][entering]
                if a > 0:
                    ratio = T[i][N] / a
                    if best_ratio is None or ratio < best_ratio or (
                        ratio == best_ratio and basis[i] < basis[leave]
                    ):
                        best_ratio = ratio
                        leave = i
            if leave < 0:
                return "unbounded"
            obj = r[N]
            pivot(leave, entering)
            if r[N] == obj:
                stall += 1
                if stall >= _STALL_LIMIT:
                    bland = True
            else:
                stall = 0

    # Phase 1: minimize the sum of artificials.
    c1 = [Fraction(0)] * N
    for col in std.art_col:
        c1[col] = Fraction(1)
    r = price_out(c1)
    allowed1 = [True] * N
    status = run_simplex(allowed1)
    if status != "optimal":
        raise InvariantError("phase-1 simplex cannot be unbounded")
    phase1_obj = -r[N]
    if phase1_obj > 0:
        # Phase-1 artificials have cost 1, so r[a_i] = 1 - y_i.
        y = [Fraction(1) - r[std.art_col[i]] for i in range(m)]
        _verify_farkas(std, y, phase1_obj)
        out = LpOutcome(status="infeasible", details={
            "phase1_objective": format_rational(phase1_obj),
            "farkas_verified": True, "pivots": stats["pivots"],
        })
        return out

    # Phase 2: real objective; artificials barred from entering.
    r = price_out(std.c)
    allowed2 = [j not in art_set for j in range(N)]
    status = run_simplex(allowed2)
    if status == "unbounded":
        return LpOutcome(status="unbounded", details={"pivots": stats["pivots"]})

    x_std = [Fraction(0)] * N
    for i, bi in enumerate(basis):
        x_std[bi] = T[i][N]
    for col in std.art_col:
        if x_std[col] != 0:
            raise InvariantError("artificial variable positive at phase-2 optimum")
    y_std = [-r[std.art_col[i]] for i in range(m)]
    _verify_exact_optimum(std, x_std, y_std)

    primal = std.primal_back(x_std)
    obj = _objective_value(problem, primal)
    out = LpOutcome(
        status="optimal",
        primal=primal,
        dual=std.dual_back(y_std),
        details={"pivots": stats["pivots"], "mode": "exact", "verified": True},
    )
    out.objective_value = obj
    _verify_original_feasibility(problem, primal)
    return out


def _objective_value(problem: LpProblem, primal) -> Fraction:
    return sum((Fraction(c) * x for c, x in zip(problem.objective, primal)), Fraction(0))


def _verify_original_feasibility(problem: LpProblem, primal):
    nv = problem.num_vars()
    bounds = problem.bounds if problem.bounds is not None else [(None, None)] * nv
    for j, (lo, hi) in enumerate(bounds):
        if lo is not None and primal[j] < Fraction(lo):
            raise InvariantError(f"primal violates lower bound on variable {j}")
        if hi is not None and primal[j] > Fraction(hi):
            raise InvariantError(f"primal violates upper bound on variable {j}")
    for k, (coefs, rel, rhs) in enumerate(problem.rows):
        lhs = sum((Fraction(c) * x for c, x in zip(coefs, primal)), Fraction(0))
        rhs = Fraction(rhs)
        ok = lhs <= rhs if rel == LEQ else lhs >= rhs if rel == GEQ else lhs == rhs
        if not ok:
            raise InvariantError(f"primal violates original row {k}")


def _verify_exact_optimum(std: _Standardized, x_std, y_std):
    # Standard-space certificate: feasibility, dual feasibility, strong duality.
    for i in range(std.nrows):
        lhs = sum((a * x for a, x in zip(std.A[i], x_std)), Fraction(0))
        if lhs != std.b[i]:
            raise InvariantError("standard-form equality violated at optimum")
    if any(v < 0 for v in x_std):
        raise InvariantError("negative standard variable at optimum")
    art = set(std.art_col)
    for j in range(std.ncols):
        if j in art:
            continue
        red = std.c[j] - sum(y_std[i] * std.A[i][j] for i in range(std.nrows))
        if red < 0:
            raise InvariantError("dual infeasibility at claimed optimum")
    primal_obj = sum((c * x for c, x in zip(std.c, x_std)), Fraction(0))
    dual_obj = sum((y * b for y, b in zip(y_std, std.b)), Fraction(0))
    if primal_obj != dual_obj:
        raise InvariantError("duality gap at claimed exact optimum")


def _verify_farkas(std: _Standardized, y, phase1_obj):
    # y.A <= 0 on structural+slack columns and y.b > 0 certify infeasibility.
    art = set(std.art_col)
    for j in range(std.ncols):
        if j in art:
            continue
        val = sum(y[i] * std.A[i][j] for i in range(std.nrows))
        if val > 0:
            raise InvariantError("Farkas certificate failed re-verification")
    yb = sum((yi * bi for yi, bi in zip(y, std.b)), Fraction(0))
    if yb <= 0 or yb != phase1_obj:
        raise InvariantError("Farkas certificate failed re-verification")


# ---------------------------------------------------------------------------
# float mode (HiGHS via scipy)
# ---------------------------------------------------------------------------

def _solve_float(problem: LpProblem, tolerance: float) -> LpOutcome:
    from scipy.optimize import linprog

    nv = problem.num_vars()
    sense_sign = -1.0 if problem.sense == "max" else 1.0
    c = [sense_sign * float(v) for v in problem.objective]
    A_ub, b_ub, ub_map = [], [], []   # ub_map: (orig_row, flip)
    A_eq, b_eq, eq_map = [], [], []
    for k, (coefs, rel, rhs) in enumerate(problem.rows):
        dense = [float(v) for v in coefs]
        if rel == EQ:
            A_eq.append(dense)
            b_eq.append(float(rhs))
            eq_map.append((k, 1.0))
        elif rel == LEQ:
            A_ub.append(dense)
            b_ub.append(float(rhs))
            ub_map.append((k, 1.0))
        else:
            A_ub.append([-v for v in dense])
            b_ub.append(-float(rhs))
            ub_map.append((k, -1.0))
    bounds = problem.bounds if problem.bounds is not None else [(None, None)] * nv
    fbounds = [(None if lo is None else float(lo), None if hi is None else float(hi))
               for lo, hi in bounds]
    res = linprog(
        c,
        A_ub=A_ub or None, b_ub=b_ub or None,
        A_eq=A_eq or None, b_eq=b_eq or None,
        bounds=fbounds, method="highs",
    )
    if res.status == 2:
        return LpOutcome(status="infeasible", details={"mode": "float"})
    if res.status == 3:
        return LpOutcome(status="unbounded", details={"mode": "float"})
    if res.status != 0:
        raise InvariantError(f"float LP solver failed: {res.message}")

    x = [float(v) for v in res.x]
    max_violation = 0.0
    for coefs, rel, rhs in problem.rows:
        lhs = sum(float(a) * v for a, v in zip(coefs, x))
        rhs = float(rhs)
        if rel == LEQ:
            max_violation = max(max_violation, lhs - rhs)
        elif rel == GEQ:
            max_violation = max(max_violation, rhs - lhs)
        else:
            max_violation = max(max_violation, abs(lhs - rhs))
    for (lo, hi), v in zip(fbounds, x):
        if lo is not None:
            max_violation = max(max_violation, lo - v)
        if hi is not None:
            max_violation = max(max_violation, v - hi)
    obj = sum(float(a) * v for a, v in zip(problem.objective, x))

    # Duality gap in the minimized space, bounds terms included.
    dual_obj = 0.0
    if len(b_ub):
        dual_obj += sum(m * b for m, b in zip(res.ineqlin.marginals, b_ub))
    if len(b_eq):
        dual_obj += sum(m * b for m, b in zip(res.eqlin.marginals, b_eq))
    for j in range(nv):
        lo, hi = fbounds[j]
        if lo is not None:
            dual_obj += res.lower.marginals[j] * lo
        if hi is not None:
            dual_obj += res.upper.marginals[j] * hi
    gap = abs(res.fun - dual_obj)
    scale = 1.0 + abs(obj)
    if max_violation > tolerance * scale or gap > tolerance * scale:
        raise InvariantError(
            f"float LP certificate too loose: violation={max_violation:.3g} gap={gap:.3g}"
        )

    dual = [0.0] * len(problem.rows)
    for (k, flip), marg in zip(ub_map, res.ineqlin.marginals if len(b_ub) else []):
        dual[k] = sense_sign * flip * marg
    for (k, flip), marg in zip(eq_map, res.eqlin.marginals if len(b_eq) else []):
        dual[k] = sense_sign * flip * marg
    out = LpOutcome(
        status="optimal", primal=x, dual=dual,
        details={"mode": "float", "max_violation": max_violation, "duality_gap": gap},
    )
    out.objective_value = obj
    return out


# ---------------------------------------------------------------------------
# interchange dump
# ---------------------------------------------------------------------------

def write_lp_text(problem: LpProblem, target):
    """Write the problem in CPLEX-LP-style text for external cross-checking."""
    own = isinstance(target, (str, bytes))
    fh = open(target, "w", encoding="utf-8") if own else target

    def term(coef, j):
        coef = float(coef)
        return f"{'+' if coef >= 0 else '-'} {abs(coef)!r} x{j + 1} "

    try:
        fh.write(f"\\ {problem.name}\n")
        fh.write("Maximize\n" if problem.sense == "max" else "Minimize\n")
        fh.write(" obj: " + "".join(term(c, j) for j, c in enumerate(problem.objective) if c) + "\n")
        fh.write("Subject To\n")
        for k, (coefs, rel, rhs) in enumerate(problem.rows):
            body = "".join(term(c, j) for j, c in enumerate(coefs) if c) or "0 x1 "
            fh.write(f" c{k + 1}: {body}{rel} {float(rhs)!r}\n")
        fh.write("Bounds\n")
        bounds = problem.bounds if problem.bounds is not None else [(None, None)] * problem.num_vars()
        for j, (lo, hi) in enumerate(bounds):
            if lo is None and hi is None:
                fh.write(f" x{j + 1} free\n")
            elif hi is None:
                fh.write(f" {float(lo)!r} <= x{j + 1}\n")
            elif lo is None:
                fh.write(f" -inf <= x{j + 1} <= {float(hi)!r}\n")
            else:
                fh.write(f" {float(lo)!r} <= x{j + 1} <= {float(hi)!r}\n")
        fh.write("End\n")
    finally:
        if own:
            fh.close()

"""LP solver: exact simplex vs float HiGHS, certificates, interchange dump."""

import io
import random
from fractions import Fraction

import pytest

from adeglab import lp
from adeglab.boolfn import make_builtin
from adeglab.errors import BudgetError, UsageError


F = Fraction


class TestBasics:
    def test_bounded_maximum(self):
        prob = lp.LpProblem(objective=[F(1)], sense="max",
                            rows=[([F(1)], lp.LEQ, F(1))],
                            bounds=[(F(0), None)])
        out = lp.solve(prob, "exact")
        assert out.status == "optimal"
        assert out.primal == [F(1)]
        assert out.objective_value == 1
        assert out.details["verified"]

    def test_infeasible(self):
        prob = lp.LpProblem(objective=[F(1)], sense="max",
                            rows=[([F(1)], lp.GEQ, F(1)), ([F(1)], lp.LEQ, F(0))],
                            bounds=None)
        out = lp.solve(prob, "exact")
        assert out.status == "infeasible"
        assert out.details["farkas_verified"]

    def test_unbounded(self):
        prob = lp.LpProblem(objective=[F(1)], sense="max",
                            rows=[([F(1)], lp.GEQ, F(0))], bounds=None)
        assert lp.solve(prob, "exact").status == "unbounded"

    def test_two_sided_bounds(self):
        prob = lp.LpProblem(objective=[F(1), F(-1)], sense="max",
                            rows=[([F(1), F(1)], lp.LEQ, F(10))],
                            bounds=[(F(-2), F(3)), (F(1), F(5))])
        out = lp.solve(prob, "exact")
        assert out.status == "optimal"
        assert out.primal == [F(3), F(1)]

    def test_equality_rows(self):
        prob = lp.LpProblem(objective=[F(1), F(2)], sense="min",
                            rows=[([F(1), F(1)], lp.EQ, F(4)),
                                  ([F(1), F(-1)], lp.LEQ, F(2))],
                            bounds=[(F(0), None), (F(0), None)])
        out = lp.solve(prob, "exact")
        assert out.status == "optimal"
        assert out.objective_value == F(5)          # x = (3, 1)

    def test_nonzero_cap(self):
        prob = lp.LpProblem(objective=[F(1)] * 10, sense="max",
                            rows=[([F(1)] * 10, lp.LEQ, F(1))] * 300,
                            bounds=[(F(0), F(1))] * 10)
        with pytest.raises(BudgetError):
            lp.solve(prob, "exact", nonzero_cap=100)

    def test_validation(self):
        with pytest.raises(UsageError):
            lp.LpProblem(objective=[], sense="max", rows=[]).validate()
        with pytest.raises(UsageError):
            lp.LpProblem(objective=[F(1)], sense="upward", rows=[]).validate()


class TestDualValues:
    def test_shadow_price_of_binding_row(self):
        prob = lp.LpProblem(objective=[F(1)], sense="max",
                            rows=[([F(1)], lp.LEQ, F(1))],
                            bounds=[(F(0), None)])
        out = lp.solve(prob, "exact")
        assert out.dual == [F(1)]

    def test_parity_dual_lp_hand_value(self):
        """The spec's hand-solved instance: orthogonality to affine monomials
        forces psi proportional to (1,-1,-1,1) and l1 = 1 gives 1/2."""
        parity = make_builtin("PARITY", 2)
        fvals = [parity.value_at(k) for k in range(4)]
        obj = [F(fvals[k]) for k in range(4)] + [F(-fvals[k]) for k in range(4)]
        rows = [([F(1)] * 8, lp.LEQ, F(1))]
        for mask in (0b00, 0b01, 0b10):
            row = [F(1) if (k & mask) == mask else F(0) for k in range(4)]
            rows.append((row + [-v for v in row], lp.EQ, F(0)))
        prob = lp.LpProblem(objective=obj, sense="max", rows=rows,
                            bounds=[(F(0), None)] * 8)
        out = lp.solve(prob, "exact")
        assert out.status == "optimal"
        assert out.objective_value == F(1, 2)
        psi = [out.primal[k] - out.primal[4 + k] for k in range(4)]
        assert sorted(psi) == [F(-1, 4), F(-1, 4), F(1, 4), F(1, 4)]
        assert psi[0] == psi[3] and psi[1] == psi[2] and psi[0] == -psi[1]


def _random_problem(rng):
    nv = rng.randint(1, 30)
    m = rng.randint(1, 12)
    obj = [F(rng.randint(-5, 5)) for _ in range(nv)]
    rows = []
    for _ in range(m):
        coefs = [F(rng.randint(-4, 4)) for _ in range(nv)]
        rel = rng.choice([lp.LEQ, lp.GEQ, lp.EQ])
        rhs = F(rng.randint(-10, 10))
        rows.append((coefs, rel, rhs))
    bounds = [(F(0), F(rng.randint(1, 8))) for _ in range(nv)]
    sense = rng.choice(["max", "min"])
    return lp.LpProblem(objective=obj, sense=sense, rows=rows, bounds=bounds)


class TestCrossCheck:
    def test_exact_and_float_agree_on_200_random_problems(self):
        """Statuses agree and optimal objectives match within 1e-6."""
        rng = random.Random(12345)
        solved_both = 0
        for _ in range(200):
            prob = _random_problem(rng)
            exact = lp.solve(prob, "exact")
            approx = lp.solve(prob, "float")
            assert exact.status == approx.status, prob.name
            if exact.status == "optimal":
                solved_both += 1
                assert abs(float(exact.objective_value) - approx.objective_value) <= 1e-6
        assert solved_both >= 50   # the generator must exercise the optimal path

    def test_float_reports_violation_and_gap(self):
        prob = lp.LpProblem(objective=[F(3), F(2)], sense="max",
                            rows=[([F(1), F(1)], lp.LEQ, F(4)),
                                  ([F(1), F(3)], lp.LEQ, F(6))],
                            bounds=[(F(0), None), (F(0), None)])
        out = lp.solve(prob, "float")
        assert out.status == "optimal"
        assert out.details["max_violation"] <= 1e-7
        assert out.details["duality_gap"] <= 1e-6


class TestDump:
    def test_interchange_text(self):
        prob = lp.LpProblem(objective=[F(1), F(1, 2)], sense="min",
                            rows=[([F(1), F(-1)], lp.GEQ, F(0))],
                            bounds=[(F(0), F(1)), (None, None)],
                            name="probe")
        buf = io.StringIO()
        lp.write_lp_text(prob, buf)
        text = buf.getvalue()
        assert text.startswith("\\ probe")
        assert "Minimize" in text and "Subject To" in text
        assert "x2 free" in text and text.rstrip().endswith("End")

    def test_solve_accepts_dump_target(self, tmp_path):
        prob = lp.LpProblem(objective=[F(1)], sense="max",
                            rows=[([F(1)], lp.LEQ, F(1))], bounds=[(F(0), None)])
        path = tmp_path / "dump.lp"
        lp.solve(prob, "exact", dump=str(path))
        assert path.read_text().startswith("\\ lp")

"""Exact multilinear polynomials: interpolation, evaluation, robustness."""

import random
from fractions import Fraction

import pytest

from adeglab.boolfn import BooleanFunction, compose, make_builtin
from adeglab.errors import PreconditionError, UsageError
from adeglab.polynomial import (MultilinearPolynomial, interpolate, linf_error,
                                robustness_probe)

AND2 = make_builtin("AND", 2)
MAJ3 = make_builtin("MAJ", 3)
PARITY2 = make_builtin("PARITY", 2)


def moebius_oracle(f):
    """Independent interpolation: c_S = sum_{T subset S} (-1)^{|S \\ T|} f(T)."""
    n = f.arity
    coeffs = {}
    for s in range(1 << n):
        total = Fraction(0)
        t = s
        while True:
            sign = -1 if (s ^ t).bit_count() % 2 else 1
            total += sign * f.value_at(t)
            if t == 0:
                break
            t = (t - 1) & s
        if total:
            coeffs[s] = total
    return coeffs


class TestInterpolate:
    def test_and2_is_x1x2(self):
        p = interpolate(AND2)
        assert dict(p.coeffs) == {0b11: Fraction(1)}

    def test_parity2_identity(self):
        p = interpolate(PARITY2)
        assert dict(p.coeffs) == {0b01: Fraction(1), 0b10: Fraction(1),
                                  0b11: Fraction(-2)}
        for k in range(4):
            x = [Fraction((k >> i) & 1) for i in range(2)]
            assert p.evaluate(x) == PARITY2.value_at(k)

    def test_maj3_against_moebius_oracle(self):
        p = interpolate(MAJ3)
        assert dict(p.coeffs) == moebius_oracle(MAJ3)
        assert dict(p.coeffs) == {0b011: Fraction(1), 0b101: Fraction(1),
                                  0b110: Fraction(1), 0b111: Fraction(-2)}
        assert p.degree() == 3

    def test_random_functions_against_oracle(self):
        rng = random.Random(3)
        for arity in range(0, 6):
            f = BooleanFunction(arity, rng.getrandbits(1 << arity))
            assert dict(interpolate(f).coeffs) == moebius_oracle(f)

    def test_reproduces_table_exhaustively(self):
        rng = random.Random(5)
        for arity in range(0, 11):
            f = BooleanFunction(arity, rng.getrandbits(1 << arity))
            p = interpolate(f)
            values = p.values_on_cube()
            for k in range(1 << arity):
                assert values[k] == f.value_at(k)

    def test_moebius_zeta_round_trip(self):
        rng = random.Random(9)
        for arity in (1, 3, 5):
            values = [Fraction(rng.randint(-20, 20), rng.randint(1, 9))
                      for _ in range(1 << arity)]
            p = MultilinearPolynomial.from_values(arity, values)
            assert p.values_on_cube() == values


class TestEvaluate:
    def test_quarter_point(self):
        p = MultilinearPolynomial(2, {0b11: Fraction(1)})
        assert p.evaluate([Fraction(1, 2), Fraction(1, 2)]) == Fraction(1, 4)

    def test_constant(self):
        p = MultilinearPolynomial.constant(3, Fraction(7, 3))
        assert p.evaluate([Fraction(1), Fraction(0), Fraction(1, 7)]) == Fraction(7, 3)

    def test_majority_centre_by_symmetry(self):
        p = interpolate(MAJ3)
        assert p.evaluate([Fraction(1, 2)] * 3) == Fraction(1, 2)

    def test_floats_rejected(self):
        p = interpolate(AND2)
        with pytest.raises(UsageError):
            p.evaluate([0.5, 0.5])


class TestLinfError:
    def test_interpolation_is_exact(self):
        rng = random.Random(1)
        for arity in range(0, 9):
            f = BooleanFunction(arity, rng.getrandbits(1 << arity))
            assert linf_error(interpolate(f), f) == 0

    def test_affine_and_approximant(self):
        p = MultilinearPolynomial(2, {0: Fraction(-1, 3), 0b01: Fraction(2, 3),
                                      0b10: Fraction(2, 3)})
        assert linf_error(p, AND2) == Fraction(1, 3)

    def test_constant_half_against_parity(self):
        p = MultilinearPolynomial.constant(2, Fraction(1, 2))
        assert linf_error(p, PARITY2) == Fraction(1, 2)

    def test_degree_submultiplicative_on_compositions(self):
        fam = [AND2, make_builtin("OR", 2), PARITY2, MAJ3]
        for f in fam:
            for g in fam:
                if f.arity * g.arity > 10:
                    continue
                fg = compose(f, [g] * f.arity)
                assert interpolate(fg).degree() <= \
                    interpolate(f).degree() * interpolate(g).degree()


class TestRobustnessProbe:
    def test_zero_perturbation(self):
        p = interpolate(MAJ3)
        assert robustness_probe(p, (1, 1, 0), [Fraction(0)] * 3, Fraction(1, 10))

    def test_and2_example(self):
        p = interpolate(AND2)
        delta = [Fraction(-1, 20), Fraction(-1, 20)]
        # p(0.95, 0.95) = 0.9025 and |1 - 0.9025| <= 0.1
        assert robustness_probe(p, (1, 1), delta, Fraction(1, 10))

    def test_box_violation_raises(self):
        p = interpolate(AND2)
        with pytest.raises(PreconditionError):
            robustness_probe(p, (1, 1), [Fraction(1, 2), Fraction(0)], Fraction(1, 10))

    def test_unbounded_polynomial_rejected(self):
        p = MultilinearPolynomial.constant(2, Fraction(3))
        with pytest.raises(PreconditionError):
            robustness_probe(p, (0, 0), [Fraction(0), Fraction(0)], Fraction(1, 10))

    def test_randomized_multilinear_robustness(self):
        # Multilinear [0,1]-valued polynomials move by at most delta under
        # delta/n box perturbations; checked on seeded random instances.
        rng = random.Random(42)
        delta = Fraction(1, 10)
        for _ in range(300):
            arity = rng.randint(1, 6)
            f = BooleanFunction(arity, rng.getrandbits(1 << arity))
            p = interpolate(f)
            k = rng.randrange(1 << arity)
            x = tuple((k >> i) & 1 for i in range(arity))
            box = delta / arity
            dvec = [Fraction(rng.randint(-100, 100), 1) * box / 100
                    for _ in range(arity)]
            assert robustness_probe(p, x, dvec, delta)


class TestSerialization:
    def test_json_round_trip(self):
        p = interpolate(MAJ3)
        q = MultilinearPolynomial.from_json(3, p.to_json())
        assert q == p

    def test_rational_strings(self):
        p = MultilinearPolynomial(1, {0: Fraction(-1, 3)})
        assert p.to_json() == [{"vars": [], "coeff": "-1/3"}]

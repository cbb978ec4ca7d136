"""Degree measures and their certificates."""

import random
from fractions import Fraction

import pytest

from adeglab.boolfn import (BooleanFunction, Projection, Var, Const,
                            apply_projection, compose, make_builtin)
from adeglab.cache import CertificateCache
from adeglab.degrees import (DegreesConfig, DualWitness, Refutation,
                             approx_degree, dual_witness, exact_degree,
                             is_full_sign_degree, one_sided_approx_degree,
                             sign_degree, verify_witness)
from adeglab.errors import InvariantError, PreconditionError
from adeglab.polynomial import linf_error

EPS = Fraction(1, 3)
AND2 = make_builtin("AND", 2)
OR2 = make_builtin("OR", 2)
MAJ3 = make_builtin("MAJ", 3)
PARITY2 = make_builtin("PARITY", 2)

NO_CACHE = DegreesConfig(use_cache=False)


class TestExactDegree:
    def test_and2(self):
        assert exact_degree(AND2).degree == 2

    def test_maj3_has_cubic_term(self):
        cert = exact_degree(MAJ3)
        assert cert.degree == 3
        assert cert.approximant.coeffs[0b111] == Fraction(-2)

    def test_constant(self):
        assert exact_degree(make_builtin("CONST1", 3)).degree == 0


class TestApproxDegree:
    def test_and2_value_and_certificates(self):
        cert = approx_degree(AND2, EPS)
        assert cert.degree == 1
        assert linf_error(cert.approximant, AND2) <= EPS
        assert cert.approximant.degree() <= 1
        assert cert.witness.purity_degree == 1
        assert cert.witness.correlation > EPS

    def test_parity_has_full_degree(self):
        for n in range(1, 5):
            cert = approx_degree(make_builtin("PARITY", n), EPS)
            assert cert.degree == n

    def test_constant_has_degree_zero(self):
        cert = approx_degree(make_builtin("CONST0", 2), EPS)
        assert cert.degree == 0 and cert.witness is None

    def test_epsilon_range_enforced(self):
        with pytest.raises(PreconditionError):
            approx_degree(AND2, Fraction(1, 2))

    def test_error_reduction_monotone(self):
        # smaller eps can only raise the degree
        for f in (AND2, MAJ3, PARITY2, compose(OR2, [AND2, AND2])):
            degs = [approx_degree(f, e, config=NO_CACHE).degree
                    for e in (Fraction(1, 3), Fraction(1, 5), Fraction(1, 10))]
            assert degs == sorted(degs)

    def test_projection_monotonicity(self):
        # projections never raise the approximate degree
        g = compose(AND2, [OR2, OR2])
        proj = Projection(4, (Var(1), Var(2), Var(1), Const(1)))
        f = apply_projection(g, proj, 2)
        assert approx_degree(f, EPS).degree <= approx_degree(g, EPS).degree

    def test_negation_invariances(self):
        rng = random.Random(17)
        for _ in range(6):
            arity = rng.randint(2, 4)
            f = BooleanFunction(arity, rng.getrandbits(1 << arity))
            base = approx_degree(f, EPS, config=NO_CACHE).degree
            assert approx_degree(f.negate(), EPS, config=NO_CACHE).degree == base
            flip = Projection(arity, tuple(Var(i + 1) for i in range(arity)))
            negated_input = compose(
                f, [make_builtin("NOT", 1)] + [BooleanFunction.from_bits([0, 1])] * (arity - 1))
            assert approx_degree(negated_input, EPS, config=NO_CACHE).degree == base


class TestDualWitness:
    def test_parity2_witness_at_two(self):
        w = dual_witness(PARITY2, EPS, 2)
        assert isinstance(w, DualWitness)
        assert w.correlation == Fraction(1, 2)
        assert dict(sorted(w.values.items())) == {
            0: Fraction(-1, 4), 1: Fraction(1, 4), 2: Fraction(1, 4),
            3: Fraction(-1, 4)}

    def test_and2_refutation_at_two(self):
        r = dual_witness(AND2, EPS, 2)
        assert isinstance(r, Refutation)
        assert r.optimal_correlation == Fraction(1, 4)

    def test_and2_witness_at_one(self):
        w = dual_witness(AND2, EPS, 1)
        assert isinstance(w, DualWitness)
        assert w.correlation == Fraction(1, 2)

    def test_witness_reverification_catches_tampering(self):
        w = dual_witness(PARITY2, EPS, 2)
        bad = DualWitness(arity=w.arity, values={**w.values, 0: Fraction(0)},
                          purity_degree=w.purity_degree, epsilon=w.epsilon,
                          correlation=w.correlation)
        with pytest.raises(InvariantError):
            verify_witness(bad, PARITY2)

    def test_purity_zero_rejected(self):
        with pytest.raises(PreconditionError):
            dual_witness(AND2, EPS, 0)


class TestDualityConsistency:
    def test_witness_at_answer_refutation_above(self):
        rng = random.Random(23)
        corpus = [AND2, OR2, PARITY2, MAJ3,
                  compose(AND2, [OR2, OR2]), compose(OR2, [PARITY2, PARITY2])]
        corpus += [BooleanFunction(3, rng.getrandbits(8)) for _ in range(4)]
        for f in corpus:
            if f.is_constant():
                continue
            d = approx_degree(f, EPS, config=NO_CACHE).degree
            assert isinstance(dual_witness(f, EPS, d, config=NO_CACHE), DualWitness)
            above = dual_witness(f, EPS, d + 1, config=NO_CACHE)
            assert isinstance(above, Refutation)


class TestSignDegree:
    def test_examples(self):
        assert sign_degree(MAJ3).degree == 1
        assert sign_degree(PARITY2).degree == 2
        assert sign_degree(AND2).degree == 1

    def test_sign_polynomial_verified(self):
        cert = sign_degree(MAJ3)
        vals = cert.approximant.values_on_cube()
        for k in range(8):
            assert (1 - 2 * MAJ3.value_at(k)) * vals[k] > 0

    def test_constant(self):
        assert sign_degree(make_builtin("CONST0", 2)).degree == 0

    def test_full_sign_degree_scan_at_three_bits(self):
        # a nonempty set of 3-bit functions has full sign degree
        full = []
        for table in range(256):
            f = BooleanFunction(3, table)
            if is_full_sign_degree(f, config=NO_CACHE):
                full.append(table)
        assert full, "expected at least one full-sign-degree function"
        parity3 = make_builtin("PARITY", 3)
        assert parity3.table in full

    def test_full_sign_degree_examples(self):
        assert is_full_sign_degree(PARITY2)
        assert not is_full_sign_degree(MAJ3)


class TestOneSided:
    def test_or2(self):
        cert = one_sided_approx_degree(OR2, EPS)
        assert cert.degree == 1
        vals = cert.approximant.values_on_cube()
        assert vals[0] <= EPS
        for k in (1, 2, 3):
            assert abs(vals[k] - 1) <= EPS
        assert cert.witness.one_sided
        assert cert.witness.correlation > EPS

    def test_and2(self):
        assert one_sided_approx_degree(AND2, EPS).degree == 1

    def test_parity2(self):
        assert one_sided_approx_degree(PARITY2, EPS).degree == 2

    def test_one_sided_witness_sign_condition(self):
        cert = one_sided_approx_degree(OR2, EPS)
        for x, v in cert.witness.values.items():
            if OR2.value_at(x) == 0:
                assert v <= 0


class TestMeasureSandwich:
    def test_odeg_le_adeg_le_deg_and_sign_le_adeg(self):
        rng = random.Random(31)
        corpus = [AND2, OR2, PARITY2, MAJ3]
        corpus += [BooleanFunction(3, rng.getrandbits(8)) for _ in range(6)]
        for f in corpus:
            adeg = approx_degree(f, EPS, config=NO_CACHE).degree
            odeg = one_sided_approx_degree(f, EPS, config=NO_CACHE).degree
            deg = exact_degree(f).degree
            sdeg = sign_degree(f, config=NO_CACHE).degree
            assert odeg <= adeg <= deg
            assert sdeg <= adeg


class TestCacheAndModes:
    def test_cache_round_trip(self, tmp_path):
        cache = CertificateCache(tmp_path)
        cfg = DegreesConfig()
        first = approx_degree(MAJ3, EPS, config=cfg, cache=cache)
        again = approx_degree(MAJ3, EPS, config=cfg, cache=cache)
        assert first.degree == again.degree
        assert again.witness.correlation == first.witness.correlation
        assert list(tmp_path.glob("*.json"))

    def test_float_mode_matches_exact(self):
        for f in (AND2, PARITY2, MAJ3):
            e = approx_degree(f, EPS, mode="exact", config=NO_CACHE).degree
            fl = approx_degree(f, EPS, mode="float", config=NO_CACHE).degree
            assert e == fl

    def test_float_path_certificates_are_exact(self):
        # Force the reconstruction ladder by shrinking the direct-cells cap.
        cfg = DegreesConfig(use_cache=False, exact_direct_cells=0)
        cert = approx_degree(MAJ3, EPS, config=cfg)
        assert cert.degree == 1
        assert linf_error(cert.approximant, MAJ3) <= EPS
        assert cert.witness.correlation > EPS
        verify_witness(cert.witness, MAJ3)

"""Truth-table core: builders, composition, restriction, classification."""

import random

import pytest

from adeglab.boolfn import (BooleanFunction, Classification, Const, Projection,
                            Var, apply_projection, classify, compose,
                            depends_on, functions_depending_on_all,
                            make_builtin, power, restrict)
from adeglab.errors import ArityError, BudgetError, UsageError

AND2 = make_builtin("AND", 2)
OR2 = make_builtin("OR", 2)
MAJ3 = make_builtin("MAJ", 3)
PARITY2 = make_builtin("PARITY", 2)
IDENTITY = BooleanFunction.from_bits([0, 1])


def brute_compose(f, gs, x):
    """Independent nested evaluation used as the composition oracle."""
    inner = []
    offset = 0
    for g in gs:
        block = x[offset:offset + g.arity]
        inner.append(g.evaluate(block))
        offset += g.arity
    return f.evaluate(inner)


class TestBuiltins:
    def test_and2_table(self):
        assert [AND2.value_at(k) for k in range(4)] == [0, 0, 0, 1]

    def test_maj3_weight_rule(self):
        for k in range(8):
            want = 1 if bin(k).count("1") >= 2 else 0
            assert MAJ3.value_at(k) == want

    def test_parity2_values(self):
        assert [PARITY2.value_at(k) for k in range(4)] == [0, 1, 1, 0]

    def test_even_majority_rejected(self):
        with pytest.raises(UsageError):
            make_builtin("MAJ", 4)

    def test_unknown_tag_rejected(self):
        with pytest.raises(UsageError):
            make_builtin("NAND", 2)

    def test_constants_any_arity(self):
        assert make_builtin("CONST1", 3).is_constant()
        assert make_builtin("CONST0", 0).arity == 0

    def test_arity_one_conventions(self):
        for tag in ("AND", "OR", "MAJ", "PARITY"):
            assert make_builtin(tag, 1) == IDENTITY
        assert make_builtin("NOT", 1) == BooleanFunction.from_bits([1, 0])


class TestEvaluate:
    def test_maj3_example(self):
        assert MAJ3.evaluate((1, 1, 0)) == 1

    def test_and2_example(self):
        assert AND2.evaluate((1, 0)) == 0

    def test_parity2_example(self):
        assert PARITY2.evaluate((1, 1)) == 0

    def test_length_mismatch(self):
        with pytest.raises(ArityError):
            MAJ3.evaluate((1, 0))


class TestCompose:
    def test_or_blocks_example(self):
        f = compose(AND2, [OR2, OR2])
        assert f.evaluate((1, 0, 0, 0)) == 0

    def test_identity_copies_is_identity(self):
        for arity in range(1, 5):
            for _ in range(5):
                table = random.Random(arity).getrandbits(1 << arity)
                f = BooleanFunction(arity, table)
                assert compose(f, [IDENTITY] * arity) == f

    def test_parity_blocks_pointwise(self):
        f = compose(AND2, [PARITY2, PARITY2])
        for k in range(16):
            x = tuple((k >> i) & 1 for i in range(4))
            assert f.evaluate(x) == ((x[0] ^ x[1]) & (x[2] ^ x[3]))

    def test_matches_nested_evaluation_exhaustively(self):
        rng = random.Random(7)
        outers = [AND2, MAJ3, PARITY2, OR2]
        inners = [AND2, OR2, PARITY2, MAJ3, IDENTITY]
        for f in outers:
            for _ in range(4):
                gs = [rng.choice(inners) for _ in range(f.arity)]
                total = sum(g.arity for g in gs)
                if total > 12:
                    continue
                composed = compose(f, gs)
                for k in range(1 << total):
                    x = tuple((k >> i) & 1 for i in range(total))
                    assert composed.evaluate(x) == brute_compose(f, gs, x)

    def test_arity_mismatch(self):
        with pytest.raises(ArityError):
            compose(AND2, [OR2])


class TestPower:
    def test_depth_one_is_identity_of_construction(self):
        assert power(MAJ3, 1) == MAJ3

    def test_two_level_majority_hand_oracle(self):
        f = power(MAJ3, 2)
        assert f.arity == 9
        x = (1, 1, 0, 0, 0, 0, 1, 0, 1)
        inner = (MAJ3.evaluate(x[0:3]), MAJ3.evaluate(x[3:6]), MAJ3.evaluate(x[6:9]))
        assert inner == (1, 0, 1)
        assert f.evaluate(x) == 1

    def test_and_or_square_arity(self):
        andor = compose(AND2, [OR2, OR2])
        assert power(andor, 2).arity == 16

    def test_associativity_within_cap(self):
        # h^(d1+d2) == h^d1 composed with copies of h^d2, as tables.
        for h in (PARITY2, AND2.negate()):
            for d1, d2 in [(1, 1), (1, 2), (2, 1)]:
                left = power(h, d1 + d2)
                right = compose(power(h, d1), [power(h, d2)] * (h.arity ** d1))
                assert left == right
        assert power(MAJ3, 2) == compose(MAJ3, [MAJ3] * 3)

    def test_cap_is_enforced(self):
        with pytest.raises(BudgetError):
            power(MAJ3, 3)   # 27 inputs exceeds the 2**24-entry table cap


class TestRestrictAndProject:
    def test_majority_cofactors(self):
        assert restrict(MAJ3, {3: 0}) == AND2
        assert restrict(MAJ3, {3: 1}) == OR2

    def test_restrict_to_constant(self):
        f = restrict(AND2, {1: 0})
        assert f.arity == 1 and f.is_constant() and f.value_at(0) == 0

    def test_key_out_of_range(self):
        with pytest.raises(UsageError):
            restrict(AND2, {3: 0})

    def test_projection_examples(self):
        p = Projection(3, (Var(1), Var(2), Const(0)))
        assert apply_projection(MAJ3, p, 2) == AND2
        p = Projection(3, (Var(1), Var(1), Const(0)))
        assert apply_projection(MAJ3, p, 1) == IDENTITY
        p = Projection(2, (Var(1), Var(1)))
        assert apply_projection(AND2, p, 1) == IDENTITY

    def test_restrict_is_a_projection_special_case(self):
        rng = random.Random(11)
        for _ in range(25):
            arity = rng.randint(2, 6)
            f = BooleanFunction(arity, rng.getrandbits(1 << arity))
            fixed = {i: rng.randint(0, 1) for i in
                     rng.sample(range(1, arity + 1), rng.randint(1, arity - 1))}
            free = [i for i in range(1, arity + 1) if i not in fixed]
            targets = []
            for i in range(1, arity + 1):
                if i in fixed:
                    targets.append(Const(fixed[i]))
                else:
                    targets.append(Var(free.index(i) + 1))
            proj = Projection(arity, tuple(targets))
            assert restrict(f, fixed) == apply_projection(f, proj, len(free))

    def test_projection_arity_mismatch(self):
        with pytest.raises(ArityError):
            apply_projection(MAJ3, Projection(2, (Var(1), Var(2))), 2)


class TestStructure:
    def test_depends_on_examples(self):
        proj_to_x1 = BooleanFunction.from_bits([0, 1, 0, 1])
        assert not depends_on(proj_to_x1, 2)
        assert depends_on(MAJ3, 1)

    def test_dependent_census_matches_inclusion_exclusion(self):
        census = sum(1 for _ in functions_depending_on_all(3))
        assert census == 256 - 3 * 16 + 3 * 4 - 2 == 218

    def test_classify_examples(self):
        assert classify(make_builtin("PARITY", 3)) is Classification.PARITY
        assert classify(MAJ3) is Classification.MONOTONE_OTHER
        assert classify(AND2.negate()) is Classification.NON_MONOTONE_OTHER
        assert classify(AND2) is Classification.AND
        assert classify(OR2) is Classification.OR
        assert classify(PARITY2.negate()) is Classification.NEG_PARITY
        assert classify(IDENTITY) is Classification.DEGENERATE

    def test_classify_invariant_under_input_permutation(self):
        # symmetric tags survive permuting inputs
        perm = Projection(3, (Var(3), Var(1), Var(2)))
        for f, tag in [(make_builtin("PARITY", 3), Classification.PARITY),
                       (make_builtin("AND", 3), Classification.AND),
                       (make_builtin("OR", 3), Classification.OR)]:
            assert classify(apply_projection(f, perm, 3)) is tag


class TestSerialization:
    def test_tt_literal_round_trip(self):
        for f in (AND2, MAJ3, PARITY2, make_builtin("CONST1", 0)):
            assert BooleanFunction.from_tt_literal(f.tt_literal()) == f

    def test_and2_literal_value(self):
        assert AND2.tt_literal() == "tt:2:0x8"

    def test_json_round_trip(self):
        for f in (AND2, MAJ3, OR2.negate()):
            assert BooleanFunction.from_json(f.to_json()) == f

    def test_bad_literal(self):
        with pytest.raises(UsageError):
            BooleanFunction.from_tt_literal("tt:2")

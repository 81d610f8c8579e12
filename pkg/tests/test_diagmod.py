from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semihomology.diagmod import (
    DiagramModule,
    act,
    check_map,
    compose_maps,
    direct_sum,
    generators_for,
    identity_map,
    make_module,
    map_from_json,
    map_to_json,
    module_from_json,
    module_to_json,
    representable,
    sum_inclusion,
    sum_projection,
    truncate_module,
    validate,
    yoneda_map,
    zero_module,
)
from semihomology.exactlin import RatMatrix
from semihomology.simplexcat import (
    GeneratorId,
    LinComb,
    apply_functor,
    compose,
    cube_delta,
    delta,
    hom_basis,
    identity_inj,
    omega_d,
)

N = 4


class TestValidate:
    def test_representables_validate(self):
        # every object within truncation 6, all kinds
        for kind, objs in (
            ("ssimp", range(0, 7)),
            ("aug_ssimp", range(-1, 7)),
            ("scube", range(0, 7)),
        ):
            for c in objs:
                assert validate(representable(kind, c, 6)), (kind, c)

    def test_zero_module_ok(self):
        assert validate(zero_module("scube", N))

    def test_deliberate_violation_located(self):
        # dims all 1; delta(0, n) acts by 1, delta(1, n) by 2 -- breaks the relation
        dims = {0: 1, 1: 1, 2: 1}
        actions = {}
        for g in generators_for("ssimp", 2):
            val = 1 if g.index == 0 else 2
            actions[g] = RatMatrix(1, 1, [val])
        x = make_module("ssimp", 2, dims, actions)
        report = validate(x)
        assert not report
        assert "degree 2" in report.message

    def test_chain_square_zero(self):
        good = make_module(
            "chain0", 2, {0: 1, 1: 1, 2: 1},
            {GeneratorId("d", 1): RatMatrix(1, 1, [1]), GeneratorId("d", 2): RatMatrix(1, 1, [0])},
        )
        assert validate(good)
        bad = make_module(
            "chain0", 2, {0: 1, 1: 1, 2: 1},
            {GeneratorId("d", 1): RatMatrix(1, 1, [1]), GeneratorId("d", 2): RatMatrix(1, 1, [1])},
        )
        assert not validate(bad)


class TestRepresentable:
    def test_cube_interval_dims(self):
        x = representable("scube", 1, N)
        assert [x.dim(n) for n in range(N + 1)] == [2, 1, 0, 0, 0]

    def test_augmented_point_dims_and_bottom_action(self):
        x = representable("aug_ssimp", 0, N)
        assert x.dim(-1) == 1 and x.dim(0) == 1
        assert all(x.dim(n) == 0 for n in range(1, N + 1))
        assert x.actions[GeneratorId("delta", 0, index=0)] == RatMatrix.identity(1)

    def test_dims_are_hom_counts(self):
        for c in range(0, N + 1):
            x = representable("ssimp", c, N)
            for n in range(0, N + 1):
                assert x.dim(n) == (comb(c + 1, n + 1) if n <= c else 0)


class TestAct:
    def test_identity_acts_as_identity(self):
        x = representable("ssimp", 2, N)
        assert act(x, LinComb.of(identity_inj(1))) == RatMatrix.identity(x.dim(1))

    def test_alternating_sum(self):
        x = representable("ssimp", 2, N)
        for n in range(1, N + 1):
            expected = RatMatrix.zeros(x.dim(n - 1), x.dim(n))
            for i in range(n + 1):
                expected = expected + x.actions[GeneratorId("delta", n, index=i)].scale(Fraction(-1) ** i)
            assert act(x, apply_functor("u_delta", omega_d(n))) == expected

    def test_sign_embedding_action(self):
        x = representable("scube", 1, N)
        got = act(x, apply_functor("v", delta(0, 0)))
        want = x.actions[GeneratorId("cube", 1, index=1, color=1)] - x.actions[
            GeneratorId("cube", 1, index=1, color=0)
        ]
        assert got == want

    def test_multiplicative_on_hom_pairs(self):
        # contravariant contract: act(g o f) = act(f) @ act(g), all pairs n <= 5
        for x in (representable("ssimp", 3, 5), representable("scube", 2, 5)):
            hk = "ssimp" if x.kind == "ssimp" else "scube"
            for m in range(0, 6):
                for q in range(m, 6):
                    for n in range(q, 6):
                        for f in hom_basis(hk, m, q):
                            for g in hom_basis(hk, q, n):
                                lhs = act(x, LinComb.of(compose(g, f)))
                                rhs = act(x, LinComb.of(f)) @ act(x, LinComb.of(g))
                                assert lhs == rhs

    def test_unvalidated_module_refused(self):
        x = make_module(
            "chain0", 1, {0: 1, 1: 1}, {GeneratorId("d", 1): RatMatrix(1, 1, [1])}
        )
        y = DiagramModule(x.kind, x.truncation, x.dims, x.actions)
        y.dims[1] = 2  # break shape so validation fails
        with pytest.raises(ValueError):
            act(y, GeneratorId("d", 1))


class TestMaps:
    def test_identity_checks(self):
        x = representable("scube", 1, N)
        assert check_map(identity_map(x))

    def test_yoneda_map_checks_and_example(self):
        f = yoneda_map("scube", cube_delta(1, 0, 1), N)
        assert check_map(f)
        # degree 0: id of the point goes to the inserted-0 coface
        basis = hom_basis("scube", 0, 1)
        col = f.components[0].column(0)
        assert [c for c in col] == [1 if b == cube_delta(1, 0, 1) else 0 for b in basis]

    def test_yoneda_respects_composition(self):
        h = delta(0, 1)   # [0] -> [1]
        g = delta(2, 2)   # [1] -> [2]
        lhs = yoneda_map("ssimp", compose(g, h), N)
        rhs = compose_maps(yoneda_map("ssimp", g, N), yoneda_map("ssimp", h, N))
        assert lhs.components == rhs.components

    def test_perturbed_map_fails(self):
        x = representable("ssimp", 1, N)
        f = identity_map(x)
        f.components[0] = RatMatrix(2, 2, [1, 1, 0, 1])
        assert not check_map(f)


class TestSums:
    def test_dims_add(self):
        x = representable("ssimp", 1, N)
        y = representable("ssimp", 2, N)
        s = direct_sum(x, y)
        for n in s.degrees():
            assert s.dim(n) == x.dim(n) + y.dim(n)
        assert validate(s)

    def test_sum_with_zero(self):
        x = representable("scube", 1, N)
        s = direct_sum(x, zero_module("scube", N))
        assert {n: s.dim(n) for n in s.degrees()} == {n: x.dim(n) for n in x.degrees()}

    def test_inclusion_projection_identity(self):
        x = representable("ssimp", 1, N)
        y = representable("ssimp", 0, N)
        inc = sum_inclusion(x, y, 0)
        proj = sum_projection(x, y, 0)
        assert check_map(inc) and check_map(proj)
        round_trip = compose_maps(proj, inc)
        for n in x.degrees():
            assert round_trip.components[n] == RatMatrix.identity(x.dim(n))


class TestSerialization:
    def test_module_round_trip_bit_exact(self):
        x = representable("scube", 2, 3)
        text = module_to_json(x)
        y = module_from_json(text)
        assert module_to_json(y) == text
        assert validate(y)
        assert y.dims == x.dims and y.actions == x.actions

    def test_map_round_trip(self):
        f = yoneda_map("aug_ssimp", delta(0, 1), 3)
        text = map_to_json(f)
        g = map_from_json(text)
        assert map_to_json(g) == text
        assert check_map(g)

    def test_truncate(self):
        x = representable("ssimp", 3, N)
        t = truncate_module(x, 2)
        assert t.truncation == 2
        assert t.dims == {n: x.dim(n) for n in range(0, 3)}

    def test_bad_format_rejected(self):
        with pytest.raises(ValueError):
            module_from_json('{"format": "something-else"}\n')

    @given(st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=25, deadline=None)
    def test_random_chain_modules_round_trip(self, seed):
        import random

        from semihomology.chainkit import complex_to_module, disk_sphere_complex
        from semihomology.exactlin import RatMatrix as RM

        rng = random.Random(seed)
        pieces = [("sphere", rng.randint(0, 3)) for _ in range(rng.randint(1, 2))]
        pieces += [("disk", rng.randint(1, 4)) for _ in range(rng.randint(1, 2))]
        plain = disk_sphere_complex(pieces, 4)
        twists = {}
        for n in plain.degrees():
            d = plain.dim(n)
            lo = [[1 if i == j else (rng.randint(-2, 2) if i > j else 0) for j in range(d)] for i in range(d)]
            up = [[1 if i == j else (rng.randint(-2, 2) if i < j else 0) for j in range(d)] for i in range(d)]
            twists[n] = RM.from_rows(lo, cols=d) @ RM.from_rows(up, cols=d)
        x = complex_to_module(disk_sphere_complex(pieces, 4, twists=twists))
        text = module_to_json(x)
        assert module_to_json(module_from_json(text)) == text

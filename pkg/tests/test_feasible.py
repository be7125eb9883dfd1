from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from attractor_class.feasible import (
    ConditionIII,
    ConditionIV,
    Element,
    ElementMismatch,
    EmptyBase,
    EndKind,
    FeasibleSet,
    MissingPrefix,
    MissingSibling,
    NoLengthTwoKey,
    Parity,
    PrefixTie,
    RhoSigmaOutOfRange,
    Third,
    classify_ends,
    compare_lex,
    dumps_feasible,
    enumerate_bases,
    enumerate_feasible_sets,
    feasible_from_elements,
    loads_feasible,
    parity_map,
    validate_complete,
    validate_feasible,
)
from attractor_class.tables import TABLE_ELEMENTS, table_feasible_set
from helpers import feasible_sets


def E(text: str) -> Element:
    return Element.parse(text)


class TestThird:
    def test_parse_and_format(self):
        assert Third.parse("5/3") == Third(5)
        assert Third.parse("2") == Third(6)
        assert str(Third(5)) == "5/3" and str(Third(6)) == "2"
        assert float(Third(1)) == pytest.approx(1 / 3)

    def test_rejects_negative_and_other_denominators(self):
        with pytest.raises(ValueError):
            Third(-1)
        with pytest.raises(ValueError):
            Third.parse("1/2")

    def test_orders_by_numerator(self):
        assert Third(4) < Third(5)


class TestCompleteBase:
    def test_three_level_chain(self):
        base = validate_complete({(1,), (1, 1), (1, 1, 1)})
        assert base.top == 1
        assert (base.lam((1,)), base.lam((1, 1)), base.lam((1, 1, 1))) == (1, 1, 0)

    def test_missing_sibling_below(self):
        with pytest.raises(MissingSibling) as err:
            validate_complete({(1,), (1, 2)})
        assert err.value.sibling == (1, 1)

    def test_missing_sibling_at_top(self):
        with pytest.raises(MissingSibling) as err:
            validate_complete({(2,)})
        assert err.value.sibling == (1,)

    def test_missing_prefix(self):
        with pytest.raises(MissingPrefix):
            validate_complete({(1,), (2, 1), (2,)} - {(2,)})

    def test_empty(self):
        with pytest.raises(EmptyBase):
            validate_complete(set())


class TestValidation:
    def test_table1(self):
        L = validate_feasible({(1,), (1, 1), (1, 1, 1)}, {(1, 1): 0, (1, 1, 1): 0},
                              {(1,): 1, (1, 1): 0, (1, 1, 1): 0})
        assert set(L.elements) == {E(s) for s in TABLE_ELEMENTS["table1"]}

    def test_simplest(self):
        L = validate_feasible({(1,), (1, 1)}, {(1, 1): 0}, {(1,): 1, (1, 1): 0})
        assert set(L.elements) == {E(s) for s in TABLE_ELEMENTS["simplest"]}

    def test_condition_iii(self):
        with pytest.raises(ConditionIII) as err:
            validate_feasible({(1,), (2,), (1, 1)}, {(1, 1): 0}, {(1,): 1, (2,): 0, (1, 1): 0})
        assert err.value.index == 1

    def test_condition_iii_wraps_around(self):
        # sigma(2) = lambda(2) and sigma(1) = 0: the pair (2, 1) is checked cyclically
        with pytest.raises(ConditionIII) as err:
            validate_feasible({(1,), (2,), (1, 1), (2, 1)}, {(1, 1): 0, (2, 1): 0},
                              {(1,): 0, (2,): 1, (1, 1): 0, (2, 1): 0})
        assert err.value.index == 2

    def test_condition_iv(self):
        keys = {(1,), (1, 1), (1, 1, 1)}
        with pytest.raises(ConditionIV) as err:
            validate_feasible(keys, {(1, 1): 0, (1, 1, 1): 0}, {(1,): 1, (1, 1): 1, (1, 1, 1): 0})
        assert err.value.key == (1, 1)

    def test_condition_iv_ignores_top_level(self):
        # lambda(1) = 1, sigma(1) = 1 and the child matches the rest of the pattern;
        # a top-level key has no rho, so (iv) does not apply to it
        validate_feasible({(1,), (1, 1)}, {(1, 1): 0}, {(1,): 1, (1, 1): 0})

    def test_needs_a_length_two_key(self):
        with pytest.raises(NoLengthTwoKey):
            validate_feasible({(1,), (2,)}, {}, {(1,): 0, (2,): 0})

    @pytest.mark.parametrize("rho, sigma", [
        ({(1, 1): 0}, {(1,): 2, (1, 1): 0}),
        ({(1, 1): 1}, {(1,): 1, (1, 1): 0}),
        ({}, {(1,): 1, (1, 1): 0}),
        ({(1, 1): 0, (1,): 0}, {(1,): 1, (1, 1): 0}),
    ])
    def test_marker_ranges(self, rho, sigma):
        with pytest.raises(RhoSigmaOutOfRange):
            validate_feasible({(1,), (1, 1)}, rho, sigma)

    def test_from_elements_rejects_wrong_shapes(self):
        with pytest.raises(ElementMismatch):
            feasible_from_elements(["(1,2)", "(1,5/3)", "(1,1,0)", "(1,1,1)", "(1,1,1/3)"])


class TestParityAndEnds:
    def test_simplest(self, expected):
        L = table_feasible_set("simplest")
        par = parity_map(L)
        assert {f"({','.join(map(str, k))})": p.value for k, p in par.items()} == \
            expected["simplest"]["parity"]
        ends = classify_ends(L)
        assert {str(e): k.value for e, k in ends.items()} == expected["simplest"]["ends"]

    def test_table3(self, expected):
        L = table_feasible_set("table3")
        par = parity_map(L)
        for key, value in expected["table3"]["parity"].items():
            k = tuple(int(c) for c in key.strip("()").split(","))
            assert par[k].value == value
        assert classify_ends(L)[E("(2,1,3)")].value == expected["table3"]["end_2_1_3"]

    @given(feasible_sets())
    def test_counts(self, L):
        ones = sum(1 for k in L.base.keys if len(k) == 1)
        assert len(L) == 2 * ones + 4 * (len(L.base) - ones)
        ends = classify_ends(L)
        for key in L.base.keys:
            kinds = [ends[e] for e in L.elements_of(key)]
            if len(key) == 1:
                assert kinds == [EndKind.OMEGA, EndKind.OMEGA]
            else:
                assert sorted(k.value for k in kinds) == ["alpha", "alpha", "omega", "omega"]

    @given(feasible_sets())
    def test_deterministic(self, L):
        assert parity_map(L) == parity_map(L)
        assert classify_ends(L) == classify_ends(L)

    @given(feasible_sets())
    def test_length_one_parent_rule(self, L):
        par = parity_map(L)
        for key in L.base.keys:
            if len(key) == 1:
                assert par[key] is Parity.EVEN
            if len(key) == 2:
                assert (par[key] is Parity.EVEN) == (key[1] <= L.sigma_of(key[:1]))


class TestLex:
    def test_examples(self, expected):
        assert expected["lex"]["(1,1,0)<(1,5/3)"]
        assert compare_lex(E("(1,1,0)"), E("(1,5/3)")) == -1
        assert compare_lex(E("(1,1,1/3)"), E("(1,1,2/3)")) == -1
        assert compare_lex(E("(1,5/3)"), E("(1,5/3)")) == 0

    def test_prefix_tie_is_an_error(self):
        with pytest.raises(PrefixTie):
            compare_lex(Element((1,), Third(3)), Element((1, 1), Third(0)))

    def test_total_order_on_all_small_sets(self):
        for L in enumerate_feasible_sets(4):
            els = L.elements
            for a, b in itertools.product(els, repeat=2):
                assert compare_lex(a, b) == -compare_lex(b, a)
                assert (compare_lex(a, b) == 0) == (a == b)
            for a, b, c in itertools.combinations(els, 3):
                assert compare_lex(a, b) == compare_lex(b, c) == -1 and compare_lex(a, c) == -1


class TestSerialization:
    @given(feasible_sets())
    def test_round_trip(self, L):
        assert loads_feasible(dumps_feasible(L)) == L

    def test_fixture_files(self, fixture_text):
        for name in ("table1", "table3", "simplest"):
            L = loads_feasible(fixture_text(f"{name}.json"))
            assert L == table_feasible_set(name)

    def test_element_list_must_agree(self, fixture_text):
        import json
        doc = json.loads(fixture_text("table1.json"))
        doc["elements"][0][1] = 9
        with pytest.raises(ElementMismatch):
            loads_feasible(json.dumps(doc))

    def test_malformed(self):
        from attractor_class.feasible import FeasibleError
        for text in ("[", "[]", '{"base": 3}', '{"base": [[1]], "sigma": {"x": 1}}'):
            with pytest.raises(FeasibleError):
                loads_feasible(text)


def test_enumeration_matches_brute_force():
    # complete bases with up to 4 keys: 1 + 2 + 5 + 14 ordered forests
    assert [sum(1 for b in enumerate_bases(m) if len(b) == m) for m in range(1, 5)] == [1, 2, 5, 14]
    assert all(isinstance(L, FeasibleSet) for L in enumerate_feasible_sets(3))


@given(st.data())
def test_immutability_of_views(data):
    L = data.draw(feasible_sets(max_keys=6))
    rho = L.rho
    rho[(99,)] = 1
    assert (99,) not in L.rho

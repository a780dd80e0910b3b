import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phirank.automata import compile
from phirank.core import Alphabet, parse_regex, words_up_to
from phirank.errors import AlphabetMismatchError, ProbeLimitError, UnseparatedPairError
from phirank.oracles import (
    BUILTIN,
    MembershipOracle,
    TERNARY,
    balanced01,
    decode_seq,
    dcfl_seq,
    encode_seq,
    get_oracle,
    naive_table,
    triple,
)
from phirank.phitypes import (
    LanguageHandle,
    distinguishing_suffixes,
    psi_param,
    rank_report,
    separation_certificate,
    theta_classes,
    two_type_bound,
    two_type_bound_check,
    verify_witness_tree,
    witness_tree,
)


def dfa(regex, alphabet="01"):
    a = Alphabet(alphabet)
    return compile(parse_regex(regex, a), a)


def handle(regex, alphabet="01"):
    return LanguageHandle.from_dfa(dfa(regex, alphabet))


def oracle_handle(name):
    return LanguageHandle.from_oracle(name)


def naive_class_count(member, alphabet, max_len):
    words = list(words_up_to(alphabet, max_len))
    return len({tuple(member(p + s) for s in words) for p in words})


class TestOracles:
    def test_triple(self):
        assert triple("") and triple("012") and triple("001122")
        assert not triple("0012") and not triple("021") and not triple("0")

    def test_balanced(self):
        assert balanced01("") and balanced01("10") and balanced01("0011")
        assert not balanced01("02") and not balanced01("0")

    def test_seq_round_trip(self):
        for ns in ([0], [3], [1, 0, 2], [0, 0]):
            assert decode_seq(encode_seq(ns)) == ns
        assert encode_seq([1, 0, 2]) == "01100"
        with pytest.raises(ValueError):
            encode_seq([])

    def test_dcfl_seq(self):
        # u = (0)_*, v = (1)_*: m_0 = n_0 + 1
        assert dcfl_seq("20")
        assert not dcfl_seq("2")
        # u = (2, 5)_*, v = (6)_*: m_0 = n_1 + 1
        assert dcfl_seq(encode_seq([2, 5]) + "2" + encode_seq([6]))
        assert not dcfl_seq(encode_seq([2, 5]) + "2" + encode_seq([3]))
        # v longer than u
        assert not dcfl_seq("0" + "2" + "1" + "00")
        assert not dcfl_seq("0220")

    def test_get_oracle(self):
        assert get_oracle("triple").name == "triple"
        with pytest.raises(KeyError):
            get_oracle("nope")

    @pytest.mark.parametrize("name", sorted(BUILTIN))
    def test_batch_matches_naive(self, name):
        o = BUILTIN[name]
        words = list(words_up_to(TERNARY, 4))
        assert np.array_equal(o.table(words, words), naive_table(o.decide, words, words))

    @settings(max_examples=50, deadline=None)
    @given(
        st.lists(st.text("012", max_size=9), min_size=1, max_size=12),
        st.lists(st.text("012", max_size=9), min_size=1, max_size=12),
    )
    def test_batch_matches_naive_random(self, prefixes, suffixes):
        for name in ("balanced01", "triple"):
            o = BUILTIN[name]
            assert np.array_equal(o.table(prefixes, suffixes), naive_table(o.decide, prefixes, suffixes))

    def test_batch_on_members(self):
        rng = random.Random(7)
        prefixes = ["0" * n + "1" * m for n in range(5) for m in range(5)]
        suffixes = ["1" * m + "2" * n for n in range(6) for m in range(6)]
        rng.shuffle(suffixes)
        t = BUILTIN["triple"].table(prefixes, suffixes)
        assert t.any()
        assert np.array_equal(t, naive_table(triple, prefixes, suffixes))


class TestThetaClasses:
    def test_zero_star_one_star(self):
        idx = theta_classes(handle("0*1*"), 4)
        assert idx.complete
        assert len(idx) == 3
        assert idx.samples == ["", "1", "10"]

    def test_full(self):
        assert len(theta_classes(handle("!#"), 3)) == 1

    def test_distinguishing_suffixes_separate(self):
        d = dfa("(0|1)*1(0|1)")
        seps = distinguishing_suffixes(d)
        for (s, t), c in seps.items():
            assert (d.step(s, c) in d.accept) != (d.step(t, c) in d.accept)

    def test_corpus_agreement(self, seed):
        from phirank.corpus import corpus

        for a, e in corpus(seed, 100):
            d = compile(e, a)
            h = LanguageHandle.from_dfa(d)
            idx = theta_classes(h, 0)
            assert idx.complete
            assert len(idx) == d.state_count == rank_report(h, 0).multiplicity_phi

    def test_balanced_small(self):
        assert len(theta_classes(oracle_handle("balanced01"), 2)) == 6

    def test_balanced_counts(self):
        h = oracle_handle("balanced01")
        counts = [len(theta_classes(h, n)) for n in range(6)]
        assert counts == [1, 4, 6, 8, 10, 12]

    def test_balanced_law_against_naive(self):
        for n in range(1, 5):
            assert naive_class_count(balanced01, TERNARY, n) == 2 * n + 2

    def test_triple_counts(self):
        h = oracle_handle("triple")
        counts = [len(theta_classes(h, n)) for n in range(7)]
        assert counts == [1, 2, 4, 6, 8, 10, 13]
        assert counts[:5] == [naive_class_count(triple, TERNARY, n) for n in range(5)]

    def test_monotone(self):
        for name in ("balanced01", "triple", "dcfl_seq"):
            h = oracle_handle(name)
            counts = [len(theta_classes(h, n)) for n in range(5)]
            assert counts == sorted(counts)

    def test_samples_realize_distinct_rows(self):
        h = oracle_handle("triple")
        idx = theta_classes(h, 4)
        words = list(words_up_to(TERNARY, 4))
        rows = {tuple(triple(p + s) for s in words) for p in idx.samples}
        assert len(rows) == len(idx)
        assert not idx.complete

    def test_probe_limit(self):
        with pytest.raises(ProbeLimitError):
            theta_classes(oracle_handle("triple"), 8, probe_limit=1000)

    def test_json(self):
        j = theta_classes(handle("0*1*"), 3).to_json()
        assert j["count"] == 3 and j["complete"] is True
        assert [c["sample"] for c in j["classes"]] == ["_", "1", "10"]


class TestRankReport:
    def test_regular(self):
        r = rank_report(handle("0*1*"), 4)
        assert r.rank_zero and not r.empirical
        assert (r.multiplicity_phi, r.multiplicity_phi_prime) == (3, 5)
        assert r.witness is None

    def test_full(self):
        r = rank_report(handle("!#"), 4)
        assert (r.multiplicity_phi, r.multiplicity_phi_prime) == (1, 1)

    def test_balanced_not_rank_zero(self):
        r = rank_report(oracle_handle("balanced01"), 5)
        assert not r.rank_zero
        assert r.multiplicity_phi is None
        assert r.class_counts == (1, 4, 6, 8, 10, 12)
        assert r.witness.k == 12
        assert r.witness.verify(oracle_handle("balanced01"))

    def test_triple_certificate_members(self):
        h = oracle_handle("triple")
        r = rank_report(h, 8)
        assert not r.rank_zero
        assert {"0", "00", "000", "0000"} <= set(r.witness.members)
        assert r.witness.verify(h)

    def test_empirical_for_regular_oracle(self):
        d = dfa("0*1*")
        o = MembershipOracle("zero_one", Alphabet("01"), d.accepts)
        r = rank_report(LanguageHandle.from_oracle(o), 6)
        assert r.rank_zero and r.empirical
        assert r.class_counts == (1, 2, 3, 3, 3, 3, 3)
        assert (r.multiplicity_phi, r.multiplicity_phi_prime) == (3, 5)
        assert r.note.startswith("heuristic")

    def test_json_keys(self):
        j = rank_report(oracle_handle("balanced01"), 3).to_json()
        assert set(j) == {"rank_zero", "empirical", "mult_phi", "mult_phi_prime", "classes", "class_counts", "certificate"}

    def test_negative_max_len(self):
        with pytest.raises(ValueError):
            rank_report(oracle_handle("triple"), -1)


class TestCertificates:
    def test_triple(self):
        h = oracle_handle("triple")
        cert = separation_certificate(h, ["0", "00", "000"], 8)
        assert cert.verify(h)
        assert cert.suffixes[0][1] == "12"
        assert cert.suffixes[1][2] == "1122"
        assert cert.suffixes[0][2] == "12"

    def test_triple_six(self):
        h = oracle_handle("triple")
        members = ["0" * a for a in range(1, 7)]
        cert = separation_certificate(h, members, 14)
        assert cert.k == 6 and cert.verify(h)
        for i in range(6):
            for j in range(6):
                if i != j:
                    a = min(i, j) + 1
                    assert cert.suffixes[i][j] == "1" * a + "2" * a

    def test_regular_classes(self):
        h = handle("0*1*")
        cert = separation_certificate(h, ["", "1", "10"], 2)
        assert cert.verify(h)

    def test_unseparated(self):
        with pytest.raises(UnseparatedPairError) as info:
            separation_certificate(handle("!#"), ["", "0"], 3)
        assert info.value.pair == ("", "0")

    def test_bound_too_small(self):
        with pytest.raises(UnseparatedPairError):
            separation_certificate(oracle_handle("triple"), ["00", "000"], 3)

    def test_tampered_certificate_fails(self):
        h = oracle_handle("triple")
        cert = separation_certificate(h, ["0", "00"], 6)
        from dataclasses import replace

        bad = replace(cert, suffixes=((None, "1"), ("1", None)))
        assert not bad.verify(h)

    def test_delta_formulas(self):
        h = oracle_handle("balanced01")
        cert = rank_report(h, 4).witness
        formulas = cert.delta_formulas(h)
        for i, a in enumerate(cert.members):
            # each member satisfies its own formula
            assert all(((a + c) in h) == pol for c, pol in formulas[i])
            for j in range(cert.k):
                if j != i:
                    c = cert.suffixes[i][j]
                    pol_i = dict(formulas[i])[c]
                    pol_j = dict(formulas[j])[c]
                    assert pol_i != pol_j

    def test_validation(self):
        h = oracle_handle("triple")
        with pytest.raises(ValueError):
            separation_certificate(h, [], 3)
        with pytest.raises(ValueError):
            separation_certificate(h, ["0", "0"], 3)

    def test_json(self):
        h = oracle_handle("triple")
        j = separation_certificate(h, ["0", "00"], 6).to_json()
        assert j == {"language": "triple", "k": 2, "members": ["0", "00"], "matrix": [[None, "12"], ["12", None]]}


class TestWitnessTree:
    def test_depth_one(self):
        t = witness_tree(1, 3)
        assert len(t) == 4
        assert [c.realizer for c in t.root.children] == ["", "0", "00"]
        assert [c.params for c in t.root.children] == [("20",), ("200",), ("2000",)]

    def test_depth_two(self):
        t = witness_tree(2, 2)
        node = t.root.children[1].children[0]
        assert node.sigma == (1, 0)
        assert node.realizer == encode_seq([0, 1]) == "10"
        assert node.params == (psi_param(0, 1), psi_param(1, 0)) == ("200", "210")

    def test_three_three(self):
        t = witness_tree(3, 3)
        assert len(t) == 1 + 3 + 9 + 27 == 40
        assert verify_witness_tree(t) == []
        node = [n for n in t.nodes if n.sigma == (1, 2)][0]
        assert node.realizer == "0010"
        assert node.params == ("200", "21000")

    def test_realizers_satisfy_and_siblings_conflict(self):
        t = witness_tree(3, 3)
        for n in t.nodes:
            assert all(dcfl_seq(n.realizer + p) for p in n.params)
            for a in n.children:
                for b in n.children:
                    if a is not b:
                        assert not dcfl_seq(a.realizer + b.params[-1])
                        assert a.sigma[-1] != b.sigma[-1]

    def test_verify_detects_problems(self):
        t = witness_tree(2, 2)
        never = MembershipOracle("never", TERNARY, lambda w: False)
        assert verify_witness_tree(t, never)

    def test_guards(self):
        with pytest.raises(ValueError):
            witness_tree(0, 3)
        with pytest.raises(ValueError):
            witness_tree(2, 1)

    def test_json(self):
        j = witness_tree(1, 2).to_json()
        assert j["nodes"] == 3 and j["depth"] == 1
        assert j["root"]["realizer"] == "_"


def naive_max_types(member, alphabet, max_len):
    words = list(words_up_to(alphabet, max_len))
    row = {p: tuple(member(p + s) for s in words) for p in words}
    worst = 0
    for c in words:
        worst = max(worst, len({row[x] for x in words if member(x + c)}))
    return worst


class TestTwoTypeBound:
    def test_triple_four(self):
        r = two_type_bound(4)
        assert r.ok and r.violation is None
        assert r.max_types == naive_max_types(triple, TERNARY, 4) == 2

    def test_triple_six(self):
        assert two_type_bound_check(6)
        r = two_type_bound(6)
        assert r.max_types == 2 and r.parameters_checked == 14

    def test_balanced_never_violates(self):
        assert two_type_bound_check(5, oracle_handle("balanced01"))
        assert two_type_bound(5, oracle_handle("balanced01")).max_types == 1

    def test_violation_detected(self):
        o = MembershipOracle("contains00", Alphabet("01"), lambda w: "00" in w)
        h = LanguageHandle.from_oracle(o)
        r = two_type_bound(4, h)
        assert not r.ok
        assert r.violation == "00"
        assert r.max_types == 3 == naive_max_types(o.decide, o.alphabet, 4)

    def test_custom_bound(self):
        o = MembershipOracle("contains00", Alphabet("01"), lambda w: "00" in w)
        assert two_type_bound(4, LanguageHandle.from_oracle(o), bound=3).ok


class TestHandle:
    def test_exactly_one_source(self):
        d = dfa("0")
        with pytest.raises(ValueError):
            LanguageHandle(Alphabet("01"))
        with pytest.raises(ValueError):
            LanguageHandle(Alphabet("01"), dfa=d, oracle=get_oracle("triple"))

    def test_alphabet_mismatch(self):
        d = dfa("0")
        with pytest.raises(AlphabetMismatchError):
            LanguageHandle(Alphabet("012"), dfa=d)

    def test_dfa_table_matches_naive(self):
        d = dfa("(0|1)*1(0|1)")
        h = LanguageHandle.from_dfa(d)
        words = list(words_up_to(Alphabet("01"), 4))
        assert np.array_equal(h.table(words, words), naive_table(d.accepts, words, words))

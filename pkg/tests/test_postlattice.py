import random

import pytest

from helpers import lang, random_language
from minsol import postlattice as pl
from minsol.errors import ParseError
from minsol.relations import (
    DUALHORN3,
    DUP3,
    EQ2,
    F_REL,
    HORN3,
    IMPL,
    NAE3,
    NAND2,
    ONE_IN_THREE,
    OR2,
    Language,
    Relation,
    T_REL,
    XOR2,
    even_rel,
    nand_rel,
    odd_rel,
    or_rel,
)

# (language, co-clone) conformance rows: known generating sets for the
# lattice nodes; every base of arity <= 4 appears.
CONFORMANCE_ROWS = [
    (lang(eq=EQ2), "iBF"),
    (lang(f=F_REL), "iR0"),
    (lang(t=T_REL), "iR1"),
    (lang(f=F_REL, t=T_REL), "iR2"),
    (lang(impl=IMPL), "iM"),
    (lang(impl=IMPL, f=F_REL), "iM0"),
    (lang(impl=IMPL, t=T_REL), "iM1"),
    (lang(impl=IMPL, f=F_REL, t=T_REL), "iM2"),
    (lang(or2=OR2), "iS0^2"),
    (lang(or3=or_rel(3)), "iS0^3"),
    (lang(or4=or_rel(4)), "iS0^4"),
    (lang(nand2=NAND2), "iS1^2"),
    (lang(nand3=nand_rel(3)), "iS1^3"),
    (lang(nand4=nand_rel(4)), "iS1^4"),
    (lang(or2=OR2, f=F_REL, t=T_REL), "iS02^2"),
    (lang(or3=or_rel(3), f=F_REL, t=T_REL), "iS02^3"),
    (lang(or2=OR2, impl=IMPL), "iS01^2"),
    (lang(or3=or_rel(3), impl=IMPL), "iS01^3"),
    (lang(or2=OR2, impl=IMPL, f=F_REL, t=T_REL), "iS00^2"),
    (lang(or3=or_rel(3), impl=IMPL, f=F_REL, t=T_REL), "iS00^3"),
    (lang(nand2=NAND2, f=F_REL, t=T_REL), "iS12^2"),
    (lang(nand2=NAND2, impl=IMPL), "iS11^2"),
    (lang(nand3=nand_rel(3), impl=IMPL, f=F_REL, t=T_REL), "iS10^3"),
    (lang(xor2=XOR2), "iD"),
    (lang(xor2=XOR2, t=T_REL), "iD1"),
    (lang(xor2=XOR2, impl=IMPL), "iD2"),
    (lang(even4=even_rel(4)), "iL"),
    (lang(even3=even_rel(3)), "iL0"),
    (lang(even4=even_rel(4), f=F_REL), "iL0"),
    (lang(odd3=odd_rel(3)), "iL1"),
    (lang(even4=even_rel(4), t=T_REL), "iL1"),
    (lang(even4=even_rel(4), f=F_REL, t=T_REL), "iL2"),
    (lang(even4=even_rel(4), xor2=XOR2), "iL3"),
    (lang(dualhorn3=DUALHORN3), "iV"),
    (lang(dualhorn3=DUALHORN3, f=F_REL), "iV0"),
    (lang(dualhorn3=DUALHORN3, t=T_REL), "iV1"),
    (lang(dualhorn3=DUALHORN3, f=F_REL, t=T_REL), "iV2"),
    (lang(horn3=HORN3), "iE"),
    (lang(horn3=HORN3, f=F_REL), "iE0"),
    (lang(horn3=HORN3, t=T_REL), "iE1"),
    (lang(horn3=HORN3, f=F_REL, t=T_REL), "iE2"),
    (lang(dup3=DUP3), "iN"),
    (lang(nae3=NAE3), "iN2"),
    (lang(even4=even_rel(4), impl=IMPL), "iI"),
    (lang(even4=even_rel(4), impl=IMPL, f=F_REL), "iI0"),
    (lang(even4=even_rel(4), impl=IMPL, t=T_REL), "iI1"),
    (lang(one_in_three=ONE_IN_THREE), "BR"),
]

# expected complexity classes per problem (NSOL, XSOL, MSD) for every node
# appearing in the conformance rows
VERDICT_SPOT_TABLE = {
    "iBF": ("PO", "PO", "PO"),
    "iR0": ("PO", "PO", "PO"),
    "iR1": ("PO", "PO", "PO"),
    "iR2": ("PO", "PO", "PO"),
    "iM": ("PO", "PO", "PO"),
    "iM0": ("PO", "PO", "PO"),
    "iM1": ("PO", "PO", "PO"),
    "iM2": ("PO", "PO", "PO"),
    "iD": ("PO", "PO", "PO"),
    "iD1": ("PO", "PO", "PO"),
    "iD2": ("APX_complete", "PO", "PO"),
    "iS0^2": ("APX_complete", "PO", "PO"),
    "iS0^3": ("APX_complete", "PO", "PO"),
    "iS0^4": ("APX_complete", "PO", "PO"),
    "iS1^2": ("APX_complete", "PO", "PO"),
    "iS1^3": ("APX_complete", "PO", "PO"),
    "iS1^4": ("APX_complete", "PO", "PO"),
    "iS00^2": ("APX_complete", "PO", "PO"),
    "iS00^3": ("APX_complete", "PO", "PO"),
    "iS01^2": ("APX_complete", "PO", "PO"),
    "iS01^3": ("APX_complete", "PO", "PO"),
    "iS02^2": ("APX_complete", "PO", "PO"),
    "iS02^3": ("APX_complete", "PO", "PO"),
    "iS10^3": ("APX_complete", "PO", "PO"),
    "iS11^2": ("APX_complete", "PO", "PO"),
    "iS12^2": ("APX_complete", "PO", "PO"),
    "iL": ("NCW_complete", "MinDist_complete", "MinDist_complete"),
    "iL0": ("NCW_complete", "MinDist_complete", "MinDist_complete"),
    "iL1": ("NCW_complete", "MinDist_complete", "MinDist_complete"),
    "iL2": ("NCW_complete", "MinDist_complete", "MinDist_complete"),
    "iL3": ("NCW_complete", "MinDist_complete", "MinDist_complete"),
    "iE": ("MinHD_complete", "MinHD_complete", "PO"),
    "iE0": ("MinHD_complete", "MinHD_complete", "PO"),
    "iE1": ("MinHD_complete", "MinHD_complete", "PO"),
    "iE2": ("MinHD_complete", "MinHD_complete", "PO"),
    "iV": ("MinHD_complete", "MinHD_complete", "PO"),
    "iV0": ("MinHD_complete", "MinHD_complete", "PO"),
    "iV1": ("MinHD_complete", "MinHD_complete", "PO"),
    "iV2": ("MinHD_complete", "MinHD_complete", "PO"),
    "iN": ("pAPX_complete", "pAPX", "pAPX"),
    "iN2": ("NPO_complete", "pAPX", "NPO_complete"),
    "iI": ("pAPX_complete", "pAPX", "pAPX"),
    "iI0": ("pAPX_complete", "NPO_complete", "NPO_complete"),
    "iI1": ("pAPX_complete", "NPO_complete", "NPO_complete"),
    "BR": ("NPO_complete", "NPO_complete", "NPO_complete"),
}


class TestClassify:
    @pytest.mark.parametrize("language,expected", CONFORMANCE_ROWS,
                             ids=[row[1] + "/" + "-".join(row[0].names()) for row in CONFORMANCE_ROWS])
    def test_conformance(self, language, expected):
        assert str(pl.classify(language)) == expected

    @pytest.mark.parametrize("language,expected", CONFORMANCE_ROWS,
                             ids=[row[1] + "/" + "-".join(row[0].names()) for row in CONFORMANCE_ROWS])
    def test_dual_conformance(self, language, expected):
        label = pl.CoCloneLabel.parse(expected)
        assert pl.classify(language.dualized()) == pl.dual_label(label)

    def test_base_fixpoint(self):
        # every stored base generates exactly its node
        for label in pl.all_labels(5):
            base = Language(
                tuple((f"b{i}", r) for i, r in enumerate(pl.relation_base(label)))
            )
            assert pl.classify(base) == label

    def test_empty_language_is_bottom(self):
        assert pl.classify(Language(())) == pl.CoCloneLabel("iBF")


class TestLatticeTable:
    def test_duality_involution(self):
        for label in pl.all_labels(6):
            assert pl.dual_label(pl.dual_label(label)) == label

    def test_order_reflexive_antisymmetric(self):
        labels = pl.all_labels(4)
        for a in labels:
            assert pl.label_leq(a, a)
        for a in labels:
            for b in labels:
                if a != b and pl.label_leq(a, b) and pl.label_leq(b, a):
                    pytest.fail(f"{a} and {b} mutually included")

    def test_unique_minimal_upper_bounds(self):
        # joins restricted to the stored sub-poset are unique where they
        # exist below the parameter cap
        labels = [l for l in pl.all_labels(3)]
        rng = random.Random(4)
        for _ in range(200):
            a, b = rng.choice(labels), rng.choice(labels)
            uppers = [c for c in pl.all_labels(4) if pl.label_leq(a, c) and pl.label_leq(b, c)]
            minimal = [c for c in uppers if all(
                not (pl.label_leq(d, c) and d != c) for d in uppers
            )]
            assert len(minimal) == 1, (str(a), str(b), list(map(str, minimal)))

    def test_unique_maximal_lower_bounds(self):
        labels = [l for l in pl.all_labels(4)]
        rng = random.Random(6)
        for _ in range(200):
            a, b = rng.choice(labels), rng.choice(labels)
            lowers = [c for c in labels if pl.label_leq(c, a) and pl.label_leq(c, b)]
            maximal = [c for c in lowers if all(
                not (pl.label_leq(c, d) and d != c) for d in lowers
            )]
            assert len(maximal) == 1, (str(a), str(b), list(map(str, maximal)))

    def test_duality_preserves_order(self):
        # dualization mirrors the lattice, so it preserves inclusion
        labels = pl.all_labels(4)
        rng = random.Random(5)
        for _ in range(300):
            a, b = rng.choice(labels), rng.choice(labels)
            assert pl.label_leq(a, b) == pl.label_leq(pl.dual_label(a), pl.dual_label(b))

    def test_parameter_validation(self):
        with pytest.raises(ParseError):
            pl.CoCloneLabel("iS00")  # family without parameter
        with pytest.raises(ParseError):
            pl.CoCloneLabel("iM2", 3)  # parameter on a plain node


class TestVerdicts:
    def test_totality(self):
        for label in pl.all_labels(6):
            for problem in pl.PROBLEMS:
                v = pl.verdict_for_label(label, problem)
                assert v.complexity and v.algorithm_tag

    @pytest.mark.parametrize("name,expected", sorted(VERDICT_SPOT_TABLE.items()))
    def test_spot_table(self, name, expected):
        label = pl.CoCloneLabel.parse(name)
        got = tuple(pl.verdict_for_label(label, p).complexity for p in ("NSOL", "XSOL", "MSD"))
        assert got == expected

    def test_specific_tags(self):
        assert pl.verdict(lang(even4=even_rel(4), f=F_REL, t=T_REL), "NSOL").algorithm_tag == "affine_exact"
        assert pl.verdict(lang(impl=IMPL, f=F_REL, t=T_REL), "NSOL").algorithm_tag == "monotone_mincut"
        assert pl.verdict(lang(nae3=NAE3), "MSD").algorithm_tag == "exhaustive_fallback"
        v = pl.verdict(lang(or3=or_rel(3), impl=IMPL, f=F_REL, t=T_REL), "NSOL")
        assert (v.algorithm_tag, v.param) == ("ihsb_rounding", 3)
        v = pl.verdict(lang(or2=OR2), "NSOL")
        assert v.algorithm_tag == "bijunctive_2approx"

    def test_decision_verdicts(self):
        assert pl.verdict(lang(dup3=DUP3), "SAT").complexity == "P"
        assert pl.verdict(lang(nae3=NAE3), "SAT").complexity == "NP_complete"
        assert pl.verdict(lang(nae3=NAE3), "ANOTHERSAT").complexity == "P"
        assert pl.verdict(lang(nae3=NAE3), "TSSAT").complexity == "NP_complete"
        assert pl.verdict(lang(even4=even_rel(4), impl=IMPL, f=F_REL), "ANOTHERSAT").complexity == "NP_complete"


class TestFragment:
    def test_equality_language(self):
        frag = pl.coclone_fragment(lang(eq=EQ2), 2)
        full1, full2 = Relation(1, 0b11), Relation(2, 0b1111)
        assert frag == {EQ2, full1, full2}

    def test_or2_fragment_misses_impl(self):
        frag = pl.coclone_fragment(lang(or2=OR2), 2)
        assert OR2 in frag and IMPL not in frag

    def test_dup3_fragment_has_no_units(self):
        frag = pl.coclone_fragment(lang(dup3=DUP3), 1)
        assert T_REL not in frag and F_REL not in frag

    def test_chain_stabilizes_at_arity_bound(self):
        # an arity-n member of the hitting-set chain never needs a wider
        # parameter than n: the n+1 search bound is validated by membership
        assert pl.fragment_contains(lang(or3=or_rel(3)), OR2)
        label = pl.classify(lang(or3=or_rel(3)))
        assert label == pl.CoCloneLabel("iS0", 3)

    def test_random_cross_check(self):
        rng = random.Random(71)
        for _ in range(30):
            gamma = random_language(rng)
            label = pl.classify(gamma)
            base = pl.relation_base(label)
            for rel in base:
                if rel.arity <= 3:
                    assert pl.fragment_contains(gamma, rel), (str(label), str(rel))
            base_lang = Language(tuple((f"b{i}", r) for i, r in enumerate(base)))
            for rel in gamma.members():
                assert pl.fragment_contains(base_lang, rel), (str(label), str(rel))

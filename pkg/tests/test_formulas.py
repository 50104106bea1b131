import random

import pytest

from helpers import lang, random_language, random_satisfiable
from minsol.errors import (
    LengthMismatch,
    NoSecondModel,
    NotAModel,
    TooLarge,
    Unsatisfiable,
)
from minsol.formulas import (
    Assignment,
    dualize_formula,
    enumerate_models,
    hamming,
    make_formula,
    model_codes,
    oracle_optimize,
    parse_formula,
    satisfies,
)
from minsol.relations import DUP3, F_REL, OR2, T_REL, XOR2, even_rel, nand_rel

A = Assignment.from_string


class TestHamming:
    def test_identity(self):
        assert hamming(A("0101"), A("0101")) == 0

    def test_direct_count(self):
        assert hamming(A("0101"), A("0011")) == 2

    def test_complement(self):
        m = A("0110101")
        assert hamming(m, m.complement()) == len(m)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            hamming(A("01"), A("011"))


class TestSatisfies:
    def test_or(self):
        f = make_formula(lang(or2=OR2), 2, [("or2", [1, 2])])
        assert satisfies(f, A("11"))

    def test_identification(self):
        f = make_formula(lang(or2=OR2), 1, [("or2", [1, 1])])
        assert not satisfies(f, A("0"))

    def test_even4(self):
        f = make_formula(lang(even4=even_rel(4)), 4, [("even4", [1, 2, 3, 4])])
        assert satisfies(f, A("0110"))


class TestEnumerateModels:
    def test_parity(self):
        f = make_formula(lang(x=XOR2), 2, [("x", [1, 2])])
        got = enumerate_models(f)
        assert [str(m) for m in got.assignments] == ["01", "10"]
        assert not got.truncated

    def test_or(self):
        f = make_formula(lang(or2=OR2), 2, [("or2", [1, 2])])
        assert [str(m) for m in enumerate_models(f).assignments] == ["01", "10", "11"]

    def test_contradiction(self):
        f = make_formula(lang(t=T_REL, f=F_REL), 1, [("t", [1]), ("f", [1])])
        assert enumerate_models(f).assignments == ()

    def test_truncation(self):
        f = make_formula(lang(or2=OR2), 4, [("or2", [1, 2])])
        got = enumerate_models(f, cap=5)
        assert len(got.assignments) == 5 and got.truncated

    def test_var_cap(self):
        f = make_formula(lang(or2=OR2), 30, [("or2", [1, 2])])
        with pytest.raises(TooLarge):
            enumerate_models(f)


class TestOracle:
    def test_nsol_or(self):
        f = make_formula(lang(or2=OR2), 2, [("or2", [1, 2])])
        assert oracle_optimize("NSOL", f, A("00")).value == 1

    def test_xsol_parity(self):
        f = make_formula(lang(x=XOR2), 2, [("x", [1, 2])])
        out = oracle_optimize("XSOL", f, A("01"))
        assert out.value == 2 and str(out.witness) == "10"

    def test_msd_or(self):
        f = make_formula(lang(or2=OR2), 2, [("or2", [1, 2])])
        out = oracle_optimize("MSD", f)
        assert out.value == 1

    def test_unsatisfiable(self):
        f = make_formula(lang(t=T_REL, f=F_REL), 1, [("t", [1]), ("f", [1])])
        with pytest.raises(Unsatisfiable):
            oracle_optimize("NSOL", f, A("0"))

    def test_not_a_model(self):
        f = make_formula(lang(t=T_REL), 1, [("t", [1])])
        with pytest.raises(NotAModel):
            oracle_optimize("XSOL", f, A("0"))

    def test_no_second_model(self):
        f = make_formula(lang(t=T_REL), 1, [("t", [1])])
        with pytest.raises(NoSecondModel):
            oracle_optimize("XSOL", f, A("1"))
        with pytest.raises(NoSecondModel):
            oracle_optimize("MSD", f)

    def test_lexicographic_witness(self):
        f = make_formula(lang(or2=OR2), 2, [("or2", [1, 2])])
        out = oracle_optimize("NSOL", f, A("11"))
        assert out.value == 0 and str(out.witness) == "11"
        out = oracle_optimize("MSD", f)
        assert [str(w) for w in out.witnesses()] == ["01", "11"]


class TestDualizeFormula:
    def test_or_becomes_nand(self):
        f = make_formula(lang(or2=OR2), 2, [("or2", [1, 2])])
        fd = dualize_formula(f)
        assert fd.relation("or2") == nand_rel(2)

    def test_involution(self):
        f = make_formula(lang(dup3=DUP3), 3, [("dup3", [1, 2, 3])])
        assert dualize_formula(dualize_formula(f)).atoms == f.atoms

    def test_models_complement(self):
        f = make_formula(lang(dup3=DUP3), 3, [("dup3", [1, 2, 3])])
        fd = dualize_formula(f)
        full = (1 << 3) - 1
        assert {c ^ full for c in map(int, model_codes(f))} == set(map(int, model_codes(fd)))


class TestOracleInvariants:
    def test_msd_is_min_xsol(self):
        rng = random.Random(21)
        done = 0
        while done < 25:
            language = random_language(rng)
            f, codes = random_satisfiable(language, rng, max_vars=6, max_atoms=5, min_models=2)
            msd = oracle_optimize("MSD", f).value
            best = min(
                oracle_optimize("XSOL", f, Assignment.from_code(int(c), f.var_count)).value
                for c in codes
            )
            assert msd == best
            done += 1

    def test_nsol_zero_iff_model(self):
        rng = random.Random(22)
        for _ in range(25):
            language = random_language(rng)
            f, _ = random_satisfiable(language, rng, max_vars=6, max_atoms=5)
            m = Assignment.from_code(rng.randrange(1 << f.var_count), f.var_count)
            assert (oracle_optimize("NSOL", f, m).value == 0) == satisfies(f, m)

    def test_duality(self):
        rng = random.Random(23)
        done = 0
        while done < 25:
            language = random_language(rng)
            f, codes = random_satisfiable(language, rng, max_vars=6, max_atoms=5, min_models=2)
            fd = dualize_formula(f)
            n = f.var_count
            m = Assignment.from_code(rng.randrange(1 << n), n)
            model = Assignment.from_code(int(rng.choice(codes)), n)
            assert (
                oracle_optimize("NSOL", f, m).value
                == oracle_optimize("NSOL", fd, m.complement()).value
            )
            assert (
                oracle_optimize("XSOL", f, model).value
                == oracle_optimize("XSOL", fd, model.complement()).value
            )
            assert oracle_optimize("MSD", f).value == oracle_optimize("MSD", fd).value
            done += 1

    def test_rename_invariance(self):
        rng = random.Random(24)
        for _ in range(15):
            language = random_language(rng)
            f, codes = random_satisfiable(language, rng, max_vars=6, max_atoms=5)
            n = f.var_count
            perm = list(range(1, n + 1))
            rng.shuffle(perm)
            renamed = make_formula(
                language, n, [(nm, tuple(perm[v - 1] for v in vs)) for nm, vs in f.atoms]
            )
            assert len(model_codes(renamed)) == len(codes)


class TestParsing:
    def test_formula_file(self, tmp_path):
        (tmp_path / "x.lang").write_text("rel xor2 2 01,10\n")
        text = "lang x.lang\nvars 3\nxor2 1 2\nxor2 2 3\n"
        f = parse_formula(text, base_dir=tmp_path)
        assert f.var_count == 3 and len(f.atoms) == 2

    def test_builtin_language(self):
        f = parse_formula("lang builtin\nvars 2\nor2 1 2\n")
        assert f.relation("or2") == OR2
        assert f.effective_language().names() == ("or2",)

    def test_errors(self):
        from minsol.errors import ParseError

        with pytest.raises(ParseError):
            parse_formula("vars 2\nor2 1 2\n")  # atom before lang header
        with pytest.raises(ParseError):
            parse_formula("lang builtin\nvars 2\nor2 1\n")  # arity mismatch
        with pytest.raises(ParseError):
            parse_formula("lang builtin\nvars 2\nor2 1 3\n")  # index out of range
        with pytest.raises(ParseError):
            parse_formula("lang builtin\nvars 2\nmystery 1 2\n")

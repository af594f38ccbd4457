from __future__ import annotations

import json
from math import factorial

import pytest

from coxstat.identities import REGISTRY, UnknownIdentity, infer_caps, verify, _main_b_p1_sides
from coxstat.distributions import WeightSpec, dist_poly
from coxstat.qseries import CapError, Caps, TruncatedSeries, coeff, inv_pochhammer, q_bracket


def test_registry_has_all_rows():
    assert set(REGISTRY) == {
        "carlitz", "prop31_pointwise", "cor33_pointwise", "cg_fmaj", "cg_from_main",
        "znn_lemma", "main_B", "cg26", "symmetry16", "tridist15", "brenti_exp",
        "gessel_roselle_B", "zne_lemma", "lemma62_truncated", "main_D", "main_D_printed",
        "gessel_roselle_D", "gessel_roselle_D_printed", "brenti_D_diag",
    }


@pytest.mark.parametrize("ident", sorted(REGISTRY))
def test_quick_level(ident):
    r = verify(ident)
    if REGISTRY[ident].mode == "diagnostic":
        assert r.status == "diagnostic"
    else:
        assert r.status == "pass", r.first_mismatch
        assert r.first_mismatch is None
    assert r.checked > 0


def test_right_descent_count_b6():
    r = verify("prop31_pointwise", n_min=6, n_max=6)
    assert r.passed and r.checked == 46080


def test_des_maj_neg_hand_cell():
    r = verify("cg26", n_min=2, n_max=2, t_cap=1)
    assert r.passed
    caps = infer_caps("cg26", 2, 1)
    series = dist_poly("B", 2, WeightSpec(t="des_B", q="maj", a="neg"), caps) \
        * inv_pochhammer(TruncatedSeries.monomial(caps, t=1), "q", 3)
    cell = {(e[1], e[3]): c for e, c in coeff(series, "t", 1).terms().items()}
    assert cell == {(0, 0): 1, (1, 0): 2, (2, 0): 1, (0, 1): 2, (1, 1): 2, (0, 2): 1}


def test_carlitz_small():
    r = verify("carlitz", n_min=2, n_max=2, t_cap=5)
    assert r.passed


class TestCaps:
    def test_examples(self):
        assert infer_caps("main_B", 3, 4).a == 3
        assert infer_caps("carlitz", 2, 5).q >= 14
        assert infer_caps("symmetry16", 4).q >= 4 * 4 + 6
        assert infer_caps("gessel_roselle_B", 5).q == 12

    def test_symmetry_bound_is_attained(self):
        from coxstat.group import b_stats, enumerate_group
        top = max(4 * b_stats(b).des_b - b_stats(b).maj - b_stats(b).neg
                  for b in enumerate_group("B", 4))
        assert top <= infer_caps("symmetry16", 4).q

    def test_below_minimum(self):
        with pytest.raises(CapError):
            verify("main_B", n_max=3, t_cap=4, caps=Caps(t=4, q=5, p=21, a=3, u=3))

    def test_larger_caps_still_pass(self):
        caps = infer_caps("cg26", 2, 2).with_(q=20, a=4)
        assert verify("cg26", n_max=2, t_cap=2, caps=caps).passed


def test_unknown():
    with pytest.raises(UnknownIdentity):
        verify("nope")


def test_rank_domain():
    with pytest.raises(ValueError):
        verify("main_D", n_min=1, n_max=2)


def test_corrected_and_printed_d_forms():
    assert verify("main_D", n_min=2, n_max=2, t_cap=2).passed
    printed = verify("main_D_printed", n_min=2, n_max=2, t_cap=2)
    assert printed.first_mismatch is not None
    assert verify("gessel_roselle_D", n_max=3).passed
    assert verify("gessel_roselle_D_printed", n_max=3).first_mismatch is not None


def test_brenti_diagnostic_constant():
    r = verify("brenti_D_diag", n_max=5, t_cap=6)
    per_n = r.details["per_n"]
    assert per_n["2"]["lhs_coefficients"][:3] == ["1", "5", "13"]  # 2k^2 + 2k + 1
    for n, d in per_n.items():
        assert d["reconciling_constant"] == str(2 ** (int(n) - 1))
        assert d["printed_matches"] is False
    assert per_n["2"]["eulerian"] == [1, 2, 1]
    assert per_n["3"]["eulerian"] == [1, 11, 11, 1]


def test_main_b_at_a_zero_gives_carlitz():
    # S_n is the neg = 0 part of B_n; at p = 1 the a^0 part of both sides
    # is sum_k t^k exp([k+1]_q u), whose n! <u^n> is the Carlitz series
    n_max, T = 3, 4
    caps = Caps(t=T, q=n_max * (T + n_max), a=n_max, u=n_max)
    lhs, rhs = _main_b_p1_sides(n_max, caps, T)
    lhs0, rhs0 = coeff(lhs, "a", 0), coeff(rhs, "a", 0)
    assert lhs0 == rhs0
    for n in range(n_max + 1):
        c = coeff(lhs0, "u", n) * factorial(n)
        carlitz = dist_poly("S", n, WeightSpec(t="des_B", q="maj"), c.caps) \
            * inv_pochhammer(TruncatedSeries.monomial(c.caps, t=1), "q", n + 1)
        assert c == carlitz
        r = coeff(rhs0, "u", n) * factorial(n)
        closed = TruncatedSeries.zero(r.caps)
        for k in range(T + 1):
            closed = closed + (q_bracket(k + 1, r.caps, "q") ** n).shift(t=k)
        assert r == closed


def test_report_json_is_stable():
    a = verify("cg26", n_max=3).to_json(timing=False)
    b = verify("cg26", n_max=3).to_json(timing=False)
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert a["conventions"]["bernoulli"] == "B1=-1/2" and a["conventions"]["inv"] == "i<j"
    assert set(a) >= {"identity", "params", "status", "checked", "first_mismatch"}

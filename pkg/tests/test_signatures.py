import random
from fractions import Fraction

import pytest

from pdd import signatures as sg
from pdd.intpoly import XYZ, IntPoly, poly_divides, poly_eval
from pdd.oracles import naive_p_eval
from pdd.signatures import Pattern1D4


def at(p, x, y, z):
    return poly_eval(p, {"X": x, "Y": y, "Z": z})


# ----------------------------------------------------------------- patterns


@pytest.mark.parametrize("xyz,prim", [((1, 1, 2), (-6, 15, -10, 1)), ((1, 1, 1), (-3, 8, -6, 1))])
def test_primitive_vectors(xyz, prim):
    p = Pattern1D4(*xyz)
    assert p.a_primitive == prim
    assert p.content == 2


def test_pattern_invariants():
    for xyz in [(1, 1, 2), (2, 6, 4), (3, 1, 7)]:
        p = Pattern1D4(*xyz)
        k1, k2, k3 = p.k
        assert 0 < k1 < k2 and k1 + k2 < k3
        assert sum(p.a) == 0 and p.a[1] > 0
        for t, d in [(1, 0), (0, 1), (3, -2), (5, 7)]:
            assert sum(a * (t + k * d) ** 2 for a, k in zip(p.a, (0, *p.k))) == 0


def test_from_points_normalizes():
    assert Pattern1D4.from_points([0, 1, 2, 5]).xyz() == (1, 1, 2)
    assert Pattern1D4.from_points([10, 11, 12, 14]).xyz() == (1, 1, 1)
    assert Pattern1D4.from_points([0, 3, 4, 5]).xyz() == (1, 1, 2)  # reflection of {0,1,2,5}
    with pytest.raises(ValueError):
        Pattern1D4.from_points([0, 1, 2, 3])


def test_rejects_nonpositive():
    with pytest.raises(ValueError):
        Pattern1D4(0, 1, 1)


# ----------------------------------------------------------------- polynomials and census


@pytest.mark.parametrize("sig", [(0, 0, 0, 0), (1, 2, 3, 4), (-1, -2, -3, -4)])
def test_trivial_signatures_vanish(sig):
    assert all(p.is_zero() for p in sg.build_signature_polys(sig))


def test_a4b_signature():
    p1, p2, _ = sg.build_signature_polys((3, -3, -1, 1))
    assert p1.is_zero()
    ok, q = poly_divides(sg.LOCUS_XX_YZ, p2)
    assert ok


def test_census_counts():
    recs = sg.census_all_signatures()
    assert len(recs) == 6561
    counts = {}
    for r in recs:
        counts[r.cls] = counts.get(r.cls, 0) + 1
    assert counts == {sg.BOTH_ZERO: 3, sg.P1_ZERO_ONLY: 262, sg.P2_ZERO_ONLY: 24, sg.NEITHER_ZERO: 6272}
    both = sorted(r.signature for r in recs if r.cls == sg.BOTH_ZERO)
    assert both == [(-1, -2, -3, -4), (0, 0, 0, 0), (1, 2, 3, 4)]


def test_I0_size():
    assert len(sg.I0_signatures()) == 122


def test_p2_zero_only_record():
    for sig in [(3, 2, 3, 4), (-3, -2, -3, -4)]:
        assert sg.make_record(sig).cls == sg.P2_ZERO_ONLY


def test_negation_symmetry():
    rng = random.Random(4)
    for _ in range(60):
        sig = tuple(rng.randint(-4, 4) for _ in range(4))
        neg = tuple(-v for v in sig)
        for p, q in zip(sg.build_signature_polys(sig), sg.build_signature_polys(neg)):
            assert q == -p


def test_polys_match_numeric_expansion():
    """Recover the T^2, TD, D^2 coefficients from numeric values and compare."""
    rng = random.Random(7)
    for _ in range(150):
        sig = tuple(rng.randint(-4, 4) for _ in range(4))
        x, y, z = (rng.randint(1, 20) for _ in range(3))
        pat = Pattern1D4(x, y, z)
        aa = [0 if i == 0 else (pat.a[abs(i) - 1] if i > 0 else -pat.a[abs(i) - 1]) for i in sig]
        q = lambda t, d: sum(c * (t + k * d) ** 2 for c, k in zip(aa, (0, *pat.k)))
        c1, c3 = q(1, 0), q(0, 1)
        c2 = q(1, 1) - c1 - c3
        for _ in range(50):
            t, d = rng.randint(-50, 50), rng.randint(-50, 50)
            assert q(t, d) == c1 * t * t + c2 * t * d + c3 * d * d
        p1, p2, p3 = sg.build_signature_polys(sig)
        assert (at(p1, x, y, z), at(p2, x, y, z), at(p3, x, y, z)) == (c1, c2, c3)
        assert naive_p_eval(sig, pat.a, pat.k) == (c1, c2, c3)


# ----------------------------------------------------------------- certificates


def test_a4_a5_all_certified():
    for r in sg.census_all_signatures():
        if r.cls in (sg.P1_ZERO_ONLY, sg.P2_ZERO_ONLY):
            cert = sg.verify_claim_a4_a5(r)
            assert cert.status == "verified"


@pytest.mark.parametrize("sig,locus", [((2, 3, -2, -3), "X^2 + XZ - Y^2"), ((-2, -3, 2, 3), "X^2 + XZ - Y^2"),
                                       ((3, 2, 3, 4), "2X^2 + XZ - YZ"), ((-3, -2, -3, -4), "2X^2 + XZ - YZ")])
def test_exceptional_loci(sig, locus):
    cert = sg.verify_claim_a4_a5(sg.make_record(sig))
    assert cert.witnesses["route"] == "locus"
    assert IntPoly.parse(cert.witnesses["locus"]) == IntPoly.parse(locus)


def test_generic_a4_single_signed():
    routes = {sg.verify_claim_a4_a5(r).witnesses["route"] for r in sg.census_all_signatures()
              if r.cls == sg.P1_ZERO_ONLY}
    assert "single-signed" in routes


def test_verify_a4_rejects_wrong_class():
    with pytest.raises(ValueError):
        sg.verify_claim_a4_a5(sg.make_record((0, 0, 0, 0)))


@pytest.mark.parametrize("sig,ray", [((0, 3, 2, 3), (1, 3, 2)), ((4, 0, 1, 4), (2, 1, 1))])
def test_a7_rays(sig, ray):
    for s in (sig, tuple(-v for v in sig)):
        cert = sg.verify_claim_a6_a7(sg.make_record(s), 40)
        assert cert.claim_id == "a7" and cert.witnesses["route"] == "ray-substitution"
        assert cert.witnesses["ray"] == list(ray)
        assert cert.witnesses["extra_zeros"] == 0


def test_a7_curve_exact_division():
    cert = sg.verify_claim_a6_a7(sg.make_record((1, 2, 1, 4)), 40)
    assert cert.witnesses["route"] == "exact-division"
    assert cert.status == "bounded"


def test_a7_routes_over_I0():
    routes = {}
    for r in sg.census_all_signatures():
        if sg.in_I0(r):
            route = sg.verify_claim_a6_a7(r, 20).witnesses["route"]
            routes[route] = routes.get(route, 0) + 1
    assert routes == {"bounded-search-only": 110, "ray-substitution": 10, "exact-division": 2}


def test_a6_single_signed_outside_I0():
    r = next(r for r in sg.census_all_signatures() if r.cls == sg.NEITHER_ZERO and not sg.in_I0(r))
    cert = sg.verify_claim_a6_a7(r)
    assert cert.claim_id == "a6" and cert.status == "verified"


def test_a8_pairs():
    cert = sg.verify_claim_a8(40)
    results = {r["result"] for r in cert.witnesses["pairs"]}
    assert results <= {"Equal", "Disjoint"} and "Equal" in results
    assert sg.common_zeros([sg.LOCUS_Q, sg.LOCUS_XX_YZ], 40) == []
    assert sg.common_zeros([sg.LOCUS_XX_YZ, sg.LOCUS_C], 40) == []


def test_certificate_schema():
    d = sg.verify_claim_a8(10).to_dict()
    assert set(d) == {"claim_id", "status", "witnesses", "parameters", "timing"}


# ----------------------------------------------------------------- degeneracy


def test_degeneracy_0125_is_trivial_only():
    rep = sg.degeneracy_set(Pattern1D4(1, 1, 2))
    assert rep.extras == [] and rep.case_number == 10


def test_degeneracy_first_case():
    rep = sg.degeneracy_set(Pattern1D4(1, 1, 1))
    want = {(1, -3, 1, 0), (1, 0, -3, 1), (3, -3, -1, 1)}
    want |= {tuple(-v for v in s) for s in want}
    assert set(rep.extras) == want and rep.case_number == 1


def test_degeneracy_fifth_case_p3_zero():
    rep = sg.degeneracy_set(Pattern1D4(1, 3, 1))
    want = {(1, 2, 1, 4), (3, 2, 1, 4), (3, 2, 3, 4)}
    want |= {tuple(-v for v in s) for s in want}
    assert set(rep.extras) == want and rep.case_number == 5
    assert all(rep.p3_values[s] == 0 for s in rep.extras)


def test_case_labels():
    assert sg.match_case(2, 6, 4)[1] == "Ray(1,3,2)"
    assert sg.match_case(1, 1, 2)[1] == "Otherwise"
    assert sg.match_case(1, 1, 1)[0] == 1  # ray before the x^2 - yz curve


def test_homogeneity():
    for xyz in [(1, 1, 1), (1, 3, 1), (1, 1, 2), (2, 1, 4)]:
        base = set(sg.degenerate_signatures(*xyz))
        for ell in range(2, 6):
            assert set(sg.degenerate_signatures(*(ell * v for v in xyz))) == base


def test_atlas_small_bound():
    res = sg.run_atlas(15)
    assert res.ok
    assert sum(res.case_counts.values()) == 15**3


# ----------------------------------------------------------------- gammas


@pytest.mark.parametrize("xyz,gammas", [
    ((1, 1, 1), ("-1/512", "1/8", "1/8", "1/8")),
    ((1, 3, 1), ("1/8", "-1/8", "1/8", "1/8")),
    ((1, 1, 2), ("1/8", "1/8", "1/8", "-1/8")),
])
def test_choose_gammas(xyz, gammas):
    choice = sg.choose_gammas(sg.degeneracy_set(Pattern1D4(*xyz)))
    assert choice.gammas == tuple(Fraction(g) for g in gammas)
    assert choice.bound < 1


@pytest.mark.parametrize("xyz,bound", [((1, 1, 2), Fraction(2047, 2048)), ((1, 1, 1), Fraction(8388561, 8388608)),
                                       ((1, 3, 1), Fraction(511, 512)), ((2, 6, 4), Fraction(1048569, 1048576))])
def test_certified_bounds(xyz, bound):
    assert sg.choose_gammas(sg.degeneracy_set(Pattern1D4(*xyz))).bound == bound


def test_case5_refinement_needed():
    rep = sg.degeneracy_set(Pattern1D4(1, 3, 1))
    crude, refined = sg.certified_bounds(rep, sg.choose_gammas(rep).gammas)
    assert crude == Fraction(1025, 1024) and refined == Fraction(511, 512)
    # refined equals 1 + 2 (g1 + g3)^2 g2 g4
    g = sg.choose_gammas(rep).gammas
    assert refined == 1 + 2 * (g[0] + g[2]) ** 2 * g[1] * g[3]


def test_gammas_within_range_across_atlas():
    seen = set()
    for x in range(1, 9):
        for y in range(1, 9):
            for z in range(1, 9):
                rep = sg.degeneracy_set(Pattern1D4(x, y, z))
                if rep.case_number in seen and rep.case_number == 10:
                    continue
                seen.add(rep.case_number)
                choice = sg.choose_gammas(rep)
                assert all(abs(v) <= Fraction(1, 8) for v in choice.gammas) and choice.bound < 1


# ----------------------------------------------------------------- curves


def test_curves_no_positive_points():
    for c in sg.HIGH_DEG_CURVES:
        rep = sg.curve_search(c, 60)
        assert rep.positive_solutions == [] and rep.rigor == "bounded"


def test_curve_search_finds_points_on_conic():
    rep = sg.curve_search(sg.LOCUS_XX_YZ, 10)
    assert (1, 1, 1) in rep.positive_solutions and (2, 1, 4) in rep.positive_solutions


def test_curve_search_rejects_inhomogeneous():
    with pytest.raises(ValueError):
        sg.curve_search(IntPoly.parse("X^2 - Y"), 5)

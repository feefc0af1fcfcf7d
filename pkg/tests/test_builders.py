import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from sympy import primerange
from sympy.ntheory import is_nthpow_residue

from pdd.builders.blowup import blowup_construction, box_blowup
from pdd.builders.complex_triple import (ResidualTooLarge, batch_alg_id, batch_triples, solve_complex_triple,
                                         verify_alg_id)
from pdd.builders.phase import PhaseFunction, build_phase_function
from pdd.builders.split_primes import (complex_residual, find_split_prime, is_split_prime, split_prime_data,
                                       split_prime_density)
from pdd.builders.transfer import (TransferParams, build_1d_special_set, build_1d_special_set_from_params,
                                   build_2d_nonconvex_set)
from pdd.builders.triforce import (build_triforce, expected_beta_count, group_order_ok, sample_mandache_set,
                                   triforce_beta_counts)
from pdd.eqfree import EquationSpec, FreeSet, ThreeAP, behrend_3apfree, greedy_free
from pdd.oracles import einsum_beta_counts, naive_triangles
from pdd.signatures import Pattern1D4

# ----------------------------------------------------------------- phase


def test_phase_values_in_range():
    f = build_phase_function(Pattern1D4(1, 1, 2), 101, Fraction(1, 2), ["1/8", "1/8", "1/8", "-1/8"])
    v = f.values()
    assert v.shape == (101,) and v.min() >= 0 and v.max() <= 1
    assert f.terms[0][0] == -6


def test_phase_zero_gammas_constant():
    f = build_phase_function(Pattern1D4(1, 1, 1), 53, Fraction(1, 3), [0, 0, 0, 0])
    assert np.allclose(f.values(), 1 / 3)


def test_phase_json_roundtrip():
    f = build_phase_function(Pattern1D4(1, 3, 1), 97, "0.25", ["1/8", "-1/8", "1/8", "1/8"])
    assert PhaseFunction.from_json(f.to_json()) == f


@pytest.mark.parametrize("N,alpha,gammas", [
    (100, "1/2", [0, 0, 0, 0]),            # not prime
    (11, "1/2", [0, 0, 0, 0]),             # 2 max|a| >= N
    (101, "3/4", [0, 0, 0, 0]),            # alpha too large
    (101, "1/2", ["1/4", 0, 0, 0]),        # gamma too large
])
def test_phase_rejects(N, alpha, gammas):
    with pytest.raises(ValueError):
        build_phase_function(Pattern1D4(1, 1, 2), N, alpha, gammas)


# ----------------------------------------------------------------- blow-up


def test_blowup_single_point():
    g = blowup_construction([1], 2, 5)
    assert sorted(g.points()) == [(1, 1), (2, 2), (3, 3), (4, 4)]


def test_blowup_empty_base():
    assert len(blowup_construction([], 2, 7)) == 0


def test_blowup_rejects_composite():
    with pytest.raises(ValueError):
        blowup_construction([1], 2, 9)


def test_box_blowup_density():
    lam = behrend_3apfree(10)
    g, info = box_blowup(lam, 1000, [0, 1, 2])
    assert info["C_P"] == 6 and info["box_width"] == 100
    assert len(g) == len(lam) * info["inner_width"]


# ----------------------------------------------------------------- triforce


def test_triforce_small_counts():
    sys = build_triforce(7, lam=FreeSet(7, (0, 1, 3), ThreeAP(True)))
    assert len(sys.triangles) == 21
    assert sys.triangles == frozenset(naive_triangles(7, (0, 1, 3)))
    ref = einsum_beta_counts(7, (0, 1, 3))
    assert ref == {1: 441, 2: 63, 3: 21}
    for case in (1, 2, 3):
        assert triforce_beta_counts(sys, case) == ref[case] == expected_beta_count(7, 3, case)


def test_triforce_trivial_lambda():
    sys = build_triforce(3, lam=FreeSet(3, (0,), ThreeAP(True)))
    assert len(sys.triangles) == 3


def test_triforce_rejects_3ap_lambda():
    with pytest.raises(ValueError):
        build_triforce(7, lam=FreeSet(7, (0, 1, 2), ThreeAP(True)))


def test_triforce_case_from_k():
    assert build_triforce(7, 2, 3).case == 1
    assert build_triforce(7, 1, 3).case == 2
    assert build_triforce(7, 1, 1).case == 3


def test_sampler_degenerate_tables():
    sys = build_triforce(7)
    full = sample_mandache_set(sys, 37, seed=1, table=np.ones((7, 7, 7)))
    assert len(full.S) == 37 * 37 and full.alpha == 1
    empty = sample_mandache_set(sys, 37, seed=1, table=np.zeros((7, 7, 7)))
    assert len(empty.S) == 0 and empty.beta_profile.max_value == 0


def test_sampler_deterministic():
    sys = build_triforce(7)
    a = sample_mandache_set(sys, 41, seed=5)
    b = sample_mandache_set(sys, 41, seed=5)
    assert a.S == b.S and a.summary() == b.summary()


def test_group_order():
    assert group_order_ok(41, 2, 3)
    with pytest.raises(ValueError):
        sample_mandache_set(build_triforce(7), 9, seed=0)


# ----------------------------------------------------------------- complex triples


def test_complex_triple_unit():
    T = solve_complex_triple(1, 1, 1, 1)
    assert T.m == 3
    assert cmath.isclose(T.R, 1j / math.sqrt(3))
    assert cmath.isclose(T.u, 1 + 1j * math.sqrt(3))
    assert cmath.isclose(T.v, 1 - 1j * math.sqrt(3))
    assert cmath.isclose(T.w, -2)
    assert max(T.residuals) < 1e-12 and T.linear_residual < 1e-12
    assert verify_alg_id(T, 500, seed=0) < 1e-12


@pytest.mark.parametrize("ms", [(1, 2, 3, 4), (5, 1, 2, 7), (10, 10, 1, 3)])
def test_complex_triple_examples(ms):
    T = solve_complex_triple(*ms)
    assert max(T.residuals) < 1e-9 and abs((T.B / T.A).imag) > 1e-9


def test_complex_triple_rejects_bad_input():
    with pytest.raises(ValueError):
        solve_complex_triple(0, 1, 1, 1)
    assert issubclass(ResidualTooLarge, ArithmeticError)


def test_batch_matches_scalar():
    ms = np.array([(1, 1, 1, 1), (1, 2, 3, 4), (4, 3, 2, 1)])
    sol = batch_triples(ms)
    for row, A in zip(ms, sol["A"]):
        assert cmath.isclose(solve_complex_triple(*row).A, A, rel_tol=1e-12)
    assert batch_alg_id(ms, 200, seed=1).max() < 1e-12


# ----------------------------------------------------------------- split primes


def test_first_split_prime():
    data = find_split_prime()
    assert (data.p, data.omega12, data.s6) == (61, 21, 2)
    assert (data.a1, data.a2, data.a3) == (45, 4, 9)
    assert data.residues == (-1, 3, -1, -1)
    assert data.coeffs == (7380, -180, -14580, 7380)


def test_split_prime_predicate():
    want = [p for p in primerange(2, 800) if p % 12 == 1 and is_nthpow_residue(3, 6, p)]
    assert [p for p in range(2, 800) if is_split_prime(p)] == want == [61, 73, 193, 577, 613, 661, 757]
    with pytest.raises(ValueError):
        split_prime_data(13)


@pytest.mark.parametrize("p", [73, 193, 577])
def test_residues_at_other_primes(p):
    assert split_prime_data(p).residues == (-1, 3, -1, -1)


def test_density_near_one_twelfth():
    d = split_prime_density(10**4)
    assert abs(float(d) - 1 / 12) < 0.02
    with pytest.raises(ValueError):
        split_prime_density(100)


def test_complex_model():
    assert complex_residual() < 1e-12


# ----------------------------------------------------------------- transfer


def _params_1d(psi, lam=None):
    data = split_prime_data(61)
    g = math.gcd(*data.coeffs)
    lam = lam if lam is not None else greedy_free(9, EquationSpec(tuple(c // g for c in data.coeffs)))
    return data, TransferParams.one_dim(data, 9, lam, psi)


def test_transfer_1d_psi_zero_full():
    data, params = _params_1d(0)
    assert 0 in params.lam.elements
    g = build_1d_special_set(data, 9, 1009, 0, params)
    assert len(g) == 1009


def test_transfer_1d_empty_lambda():
    data, params = _params_1d(Fraction(1, 3), FreeSet(9, (), ThreeAP()))
    assert len(build_1d_special_set_from_params(params, 500)) == 0


def test_transfer_1d_parameters():
    data, params = _params_1d(0)
    assert params.theta1 == sum(abs(c) for c in data.coeffs)
    assert params.theta2 == abs(2 * (45 - 4) * (4 - 9) * (9 - 45))
    assert params.valid


def test_transfer_1d_rejects_bad_N():
    data, params = _params_1d(0)
    with pytest.raises(ValueError):
        build_1d_special_set(data, 9, 7, 0, params)  # 7 divides lcm(1..9)
    with pytest.raises(ValueError):
        TransferParams.one_dim(data, 9, params.lam, Fraction(1, 4))


def test_transfer_2d_psi_zero_and_empty():
    T = solve_complex_triple(1, 1, 1, 1)
    lam = greedy_free(8, EquationSpec((1, 1, 1, -3)))
    full = build_2d_nonconvex_set(T, 8, 30, 0, lam)
    assert len(full) == 900
    assert len(build_2d_nonconvex_set(T, 8, 30, Fraction(1, 7), FreeSet(8, (), ThreeAP()))) == 0

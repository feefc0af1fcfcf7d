import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdd.builders.split_primes import split_prime_data
from pdd.eqfree import (EquationSpec, FreeSet, InfeasibleBase, ThreeAP, behrend_3apfree, behrend_eqfree,
                        behrend_sphere, digit_tensor_set, find_solution, greedy_free, has_3ap, sample_check,
                        verify_free)
from pdd.oracles import naive_is_3ap_free, naive_is_eq_free


def test_tiny_lengths():
    assert behrend_3apfree(1).elements == (0,)
    assert behrend_3apfree(2).elements == (0, 1)


def test_large_behrend_size_and_freeness():
    fs = behrend_3apfree(10**4)
    assert len(fs) == 512
    assert verify_free(fs)
    assert sample_check(fs, 20000, seed=1) is None


@pytest.mark.parametrize("L", [5, 17, 64, 200, 731])
def test_behrend_matches_oracle(L):
    fs = behrend_3apfree(L)
    assert naive_is_3ap_free(fs.elements)
    assert all(0 <= v < L for v in fs)


def test_cyclic_small():
    fs = behrend_3apfree(7, cyclic=True)
    assert fs.elements == (0, 1, 3)
    assert naive_is_3ap_free(fs.elements, modulus=7)


@pytest.mark.parametrize("L", [11, 50, 101, 257])
def test_cyclic_matches_oracle(L):
    fs = behrend_3apfree(L, cyclic=True)
    assert verify_free(fs) and naive_is_3ap_free(fs.elements, modulus=L)


def test_one_vs_three_example():
    fs = behrend_eqfree(50, EquationSpec((-3, 1, 1, 1)))
    assert fs.elements == (0, 1, 4, 5, 16, 17, 20, 21)
    assert naive_is_eq_free(fs.elements, (-3, 1, 1, 1))


def test_two_vs_two_is_infeasible():
    with pytest.raises(InfeasibleBase):
        behrend_eqfree(50, EquationSpec((1, 1, -1, -1)))


def test_spec_validation():
    with pytest.raises(ValueError):
        EquationSpec((1, 1, 1, 1))
    with pytest.raises(ValueError):
        EquationSpec((1, 2, -3))
    with pytest.raises(ValueError):
        FreeSet(5, (0, 5), ThreeAP())


def test_digit_tensor_example():
    base = behrend_3apfree(7, cyclic=True)
    t = digit_tensor_set(7, base, 2)
    assert t.elements == (0, 1, 3, 7, 8, 10, 21, 22, 24)
    assert t.L == 49


def test_split_prime_tensor_is_free():
    data = split_prime_data(61)
    spec = EquationSpec(data.residues, 61)
    base = behrend_eqfree(61, spec)
    assert verify_free(base)
    assert all((c - r) % 61 == 0 for c, r in zip(data.coeffs, data.residues))
    t = digit_tensor_set(61, base, 2, EquationSpec(data.residues, 61**2))
    assert len(t) == len(base) ** 2 == 49
    assert verify_free(t)
    assert naive_is_eq_free(t.elements, data.residues, 61**2)


def test_modular_spec_respects_modulus():
    spec = EquationSpec((-3, 1, 1, 1), 31)
    fs = behrend_eqfree(31, spec)
    assert verify_free(fs) and naive_is_eq_free(fs.elements, spec.coeffs, 31)


def test_greedy_free():
    g = greedy_free(30, ThreeAP())
    assert g.elements[:6] == (0, 1, 3, 4, 9, 10)
    assert naive_is_3ap_free(g.elements)


def test_behrend_sphere_shell():
    vals = behrend_sphere(1000, 3, 4)
    assert vals and naive_is_3ap_free(vals)


def test_find_solution_witness_is_real():
    spec = EquationSpec((1, 1, -1, -1))
    sol = find_solution([0, 1, 2, 3], spec)
    assert sol is not None and len(set(sol)) > 1
    assert sum(c * v for c, v in zip(spec.coeffs, sol)) == 0


def test_has_3ap_witness():
    a, c, b = has_3ap([0, 2, 4, 9])
    assert a + b == 2 * c and a != b
    assert has_3ap([0, 1, 3]) is None
    assert has_3ap([0, 1, 3], modulus=5) is not None  # 0 + 1 = 2*3 mod 5


@settings(max_examples=200, deadline=None)
@given(st.sets(st.integers(0, 40), max_size=12))
def test_has_3ap_agrees_with_oracle(s):
    assert (has_3ap(sorted(s)) is None) == naive_is_3ap_free(s)


@settings(max_examples=150, deadline=None)
@given(st.sets(st.integers(0, 30), max_size=8), st.sampled_from([(-3, 1, 1, 1), (1, 1, -1, -1), (2, -1, -1, 0)]))
def test_find_solution_agrees_with_oracle(s, coeffs):
    spec = EquationSpec(coeffs)
    assert (find_solution(sorted(s), spec) is None) == naive_is_eq_free(s, coeffs)

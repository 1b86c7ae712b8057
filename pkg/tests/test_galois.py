import pytest

from generalized_turan.errors import (
    DivisibilityError,
    NotPrimeError,
    ParameterError,
    SizeLimitError,
    UndefinedOrderError,
)
from generalized_turan.galois import (
    cyclic_subgroup,
    element_of_order,
    element_order,
    make_field,
    make_field_of_order,
    prime_power,
)


@pytest.mark.parametrize(("p", "k"), [(2, 1), (7, 1), (2, 2), (2, 3), (3, 2), (5, 2)])
def test_field_axioms(p, k):
    """Every non-zero element has an inverse and multiplication distributes over addition."""
    f = make_field(p, k)
    assert f.q == p**k
    for a in f.elements():
        assert f.add(a, f.neg(a)) == 0
        if a:
            assert f.mul(a, f.inverse(a)) == 1
        for b in f.elements():
            assert f.add(a, b) == f.add(b, a)
            for c in (1, f.q - 1):
                assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))


def test_gf4_modulus_and_orders():
    """GF(4) is built modulo x^2 + x + 1 and its elements outside {0, 1} have order 3."""
    f = make_field(2, 2)
    assert f.modulus == (1, 1, 1)
    assert [element_order(f, x) for x in (2, 3)] == [3, 3]


def test_element_order_in_prime_field():
    """Orders in GF(7)."""
    f = make_field(7)
    assert element_order(f, 1) == 1
    assert element_order(f, 6) == 2
    assert element_order(f, 2) == 3
    assert element_order(f, 3) == 6
    with pytest.raises(UndefinedOrderError):
        element_order(f, 0)


def test_element_of_order_and_subgroup():
    """element_of_order returns an element of exactly that order; its subgroup ends at 1."""
    f = make_field_of_order(9)
    h = element_of_order(f, 4)
    assert element_order(f, h) == 4
    group = cyclic_subgroup(f, h)
    assert len(group) == len(set(group)) == 4
    assert group[-1] == 1
    with pytest.raises(DivisibilityError):
        element_of_order(f, 3)


def test_generator_is_primitive():
    """The generator has order q - 1."""
    for q in (4, 8, 9, 13, 16, 25):
        f = make_field_of_order(q)
        assert element_order(f, f.generator) == q - 1


def test_prime_power():
    """Prime power decomposition."""
    assert prime_power(9) == (3, 2)
    assert prime_power(13) == (13, 1)
    assert prime_power(12) is None
    assert prime_power(1) is None


def test_make_field_errors():
    """Bad characteristics, degrees and sizes are rejected."""
    with pytest.raises(NotPrimeError):
        make_field(4)
    with pytest.raises(NotPrimeError):
        make_field_of_order(6)
    with pytest.raises(ParameterError):
        make_field(3, 0)
    with pytest.raises(SizeLimitError):
        make_field(2, 17)

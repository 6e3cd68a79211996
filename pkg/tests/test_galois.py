import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pumcode import DomainError, Field, FieldElement, UsageError, get_field
from pumcode.galois import default_modulus, is_irreducible

FIELDS = [(2, 1), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (2, 8)]


@st.composite
def field_and_elements(draw, count=3):
    p, m = draw(st.sampled_from(FIELDS))
    f = get_field(p, m)
    return f, [draw(st.integers(0, f.q - 1)) for _ in range(count)]


def test_gf8_tables_follow_conway_modulus():
    f = get_field(2, 3)
    assert f.modulus == 11
    assert f.nonzero_elements() == [1, 2, 4, 3, 6, 7, 5]
    assert f.mul(2, 6) == 7
    assert f.inv(2) == 5
    assert f.add(5, 3) == 6


def test_default_modulus_odd_characteristic():
    # x^2 + 1 is irreducible over GF(3); packed as 1 + 0*3 + 1*9
    assert default_modulus(3, 2) == 10
    assert is_irreducible([1, 0, 1], 3)
    assert not is_irreducible([1, 0, 1], 5)


@settings(max_examples=300, deadline=None)
@given(field_and_elements())
def test_field_axioms(case):
    f, (a, b, c) = case
    assert f.add(a, b) == f.add(b, a)
    assert f.mul(a, b) == f.mul(b, a)
    assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.sub(f.add(a, b), b) == a
    assert f.add(a, f.neg(a)) == 0
    if a:
        assert f.mul(a, f.inv(a)) == 1
        assert f.div(f.mul(b, a), a) == b


@settings(max_examples=100, deadline=None)
@given(field_and_elements(count=1), st.integers(-20, 20))
def test_pow_and_log_agree(case, e):
    f, (a,) = case
    if a == 0:
        return
    assert f.alpha_pow(f.log(a)) == a
    expected = 1
    base = a if e >= 0 else f.inv(a)
    for _ in range(abs(e)):
        expected = f.mul(expected, base)
    assert f.pow(a, e) == expected


@pytest.mark.parametrize("p,m", FIELDS)
def test_primitive_element_generates_group(p, m):
    f = get_field(p, m)
    assert sorted(f.nonzero_elements()) == list(range(1, f.q))


@pytest.mark.parametrize("p,m", [(2, 3), (3, 2), (5, 1)])
def test_numpy_tables_match_scalar_ops(p, m):
    f = get_field(p, m)
    a, b = np.meshgrid(np.arange(f.q), np.arange(f.q), indexing="ij")
    added = f.np_add(a, b)
    for x in range(f.q):
        for y in range(f.q):
            assert added[x, y] == f.add(x, y)
            assert f.mul_table[x, y] == f.mul(x, y)


def test_invalid_fields_rejected():
    with pytest.raises(UsageError):
        Field(4)
    with pytest.raises(UsageError):
        Field(2, 0)
    with pytest.raises(UsageError):
        Field(2, 17)
    with pytest.raises(UsageError, match="reducible"):
        Field(2, 3, modulus=0b1001)  # x^3 + 1 = (x + 1)(x^2 + x + 1)
    with pytest.raises(UsageError, match="monic"):
        Field(2, 3, modulus=0b11)


def test_domain_errors():
    f = get_field(2, 3)
    with pytest.raises(DomainError):
        f.inv(0)
    with pytest.raises(DomainError):
        f.div(3, 0)
    with pytest.raises(DomainError):
        f.log(0)
    with pytest.raises(UsageError):
        f.check(8)


def test_field_elements():
    f = get_field(2, 3)
    a, b = f.element(2), f.element(6)
    assert int(a * b) == 7
    assert int(a / a) == 1
    assert int(a + a) == 0
    assert int(a.inverse()) == 5
    assert int(a**7) == 1
    with pytest.raises(UsageError):
        a + get_field(3, 2).element(1)
    with pytest.raises(UsageError):
        FieldElement(f, 9)


def test_explicit_modulus_changes_tables():
    f = get_field(2, 3, 13)  # x^3 + x^2 + 1
    assert f.modulus == 13
    assert f.mul(4, 2) == 5
    assert get_field(2, 3, 13) is f
    assert f != get_field(2, 3)

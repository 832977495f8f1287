import pytest
from hypothesis import given, strategies as st

from mtc.count.cohomology import (
    NONTRIVIAL,
    TRIVIAL,
    Z2CLASSES,
    DeltaMap,
    TorusType,
    add,
    all_delta_maps,
    double_cover,
    double_cover_class,
    propagate_double,
    pullback_structure,
    type_of,
)
from mtc.errors import ValidationError
from mtc.orbifold import CoverSpec

delta_maps = st.sampled_from(all_delta_maps())
nontrivial = st.sampled_from(NONTRIVIAL)


def test_group_law():
    assert add("10", "01") == "11"
    assert add("11", "11") == TRIVIAL
    for x in Z2CLASSES:
        assert add(x, TRIVIAL) == x


def test_delta_map_validation():
    with pytest.raises(ValidationError):
        DeltaMap({"00": 1, "10": 1, "01": 1})
    with pytest.raises(ValidationError):
        DeltaMap({"00": 1, "10": 1, "01": 1, "11": 0})
    assert len(set(all_delta_maps())) == 16


def test_type_of():
    assert type_of(DeltaMap.constant()) == TorusType(1, 0)
    assert type_of(DeltaMap.from_type(-1)) == TorusType(-1, 0)
    assert type_of(DeltaMap.from_type(1, ["10", "11"])) == TorusType(1, 2)
    assert str(type_of(DeltaMap.constant(-1))) == "-3"


def test_torus_type_text():
    for sign in (1, -1):
        for k in range(4):
            t = TorusType(sign, k)
            assert TorusType.parse(str(t)) == t
    with pytest.raises(ValidationError):
        TorusType.parse("+4")


def test_pullback_structure():
    structure = pullback_structure("10")
    assert structure.fibers["01"] == ("01", "11")
    assert structure.pullback("10") == TRIVIAL, "The classifying class pulls back to 0"
    assert structure.pullback("11") == "01"
    assert len(structure.image) == 2
    assert set(structure.outside) == {"10", "11"}

    assert pullback_structure("01").fibers["10"] == ("10", "11")
    assert pullback_structure("11").fibers["01"] == ("01", "10")

    with pytest.raises(ValidationError):
        pullback_structure(TRIVIAL)


@given(nontrivial)
def test_pullback_is_two_to_one(iota0):
    structure = pullback_structure(iota0)
    fibers = [set(fiber) for fiber in structure.fibers.values()]
    assert all(len(fiber) == 2 for fiber in fibers)
    assert set.union(*fibers) == set(Z2CLASSES)
    assert not structure.image & set(structure.outside)
    assert len(structure.image) + len(structure.outside) == 4


def test_propagate_double():
    for iota0 in NONTRIVIAL:
        assert type_of(propagate_double(DeltaMap.constant(), iota0)) == TorusType(-1, 0)

    delta = DeltaMap.from_type(1, ["10"])
    assert propagate_double(delta, "10")[TRIVIAL] == 1

    # The -1 sits on the classifying class, not on the fiber over 01.
    assert propagate_double(delta, "10")["01"] == 1
    assert propagate_double(DeltaMap.from_type(1, ["01"]), "10")["01"] == -1


@given(delta_maps, nontrivial)
def test_outside_image_is_positive(delta, iota0):
    propagated = propagate_double(delta, iota0)
    for x in pullback_structure(iota0).outside:
        assert propagated[x] == 1
    assert type_of(propagated).k <= 1


@given(delta_maps, nontrivial)
def test_propagate_depends_on_fiber_product(delta, iota0):
    structure = pullback_structure(iota0)
    label = next(x for x in structure.image if x != TRIVIAL)
    a, b = structure.fibers[label]
    assert propagate_double(delta.flip(a).flip(b), iota0) == propagate_double(delta, iota0)


@given(delta_maps)
def test_type_counts_negative_classes(delta):
    t = type_of(delta)
    assert t.sign == delta[TRIVIAL]
    assert 0 <= t.k <= 3
    flipped = delta.flip("11")
    assert abs(type_of(flipped).k - t.k) == 1
    assert type_of(flipped).sign == t.sign


def test_double_cover_class():
    assert double_cover_class(CoverSpec.create(2, [(2, 1), (1, 2)])) == "10"
    assert double_cover_class(CoverSpec.create(2, [(2, 1), (2, 1)])) == "11"
    assert double_cover_class(CoverSpec.create(2, [(1, 2), (1, 2)])) == TRIVIAL
    with pytest.raises(ValidationError):
        double_cover_class(CoverSpec.create(3, [(2, 3, 1), (1, 2, 3)]))
    for x in Z2CLASSES:
        assert double_cover_class(double_cover(x)) == x
    assert double_cover("01") == CoverSpec.create(2, [(1, 2), (2, 1)])

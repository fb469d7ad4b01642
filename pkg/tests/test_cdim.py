import pytest
from hypothesis import given, settings, strategies as st

from canondim.cdim import (
    CHOW_OF_G,
    CLOSED_FORM,
    COHOMOLOGY_P2,
    DIRECT,
    P_EXCEPTIONAL,
    CohomologyInput,
    PExceptionalDegree,
    cd_closed_form,
    cd_from_p_exceptional,
    cd_p2_cohomology,
    cd_via_group_chow,
    compute_all,
    p_exceptional_search,
)
from canondim.errors import ConsistencyFailure, InputError
from canondim.polyalg import IntPoly, exact_divide, quantum_factor_product
from canondim.rootsys import GroupSpec, all_specs, build_root_system, torsion_primes


def test_closed_form():
    assert cd_closed_form(24, 4, [2, 6, 8, 12]) == 0
    assert cd_closed_form(24, 4, [2, 4, 6, 8]) == 8
    with pytest.raises(InputError):
        cd_closed_form(24, 4, [2, 4, 6])
    with pytest.raises(ConsistencyFailure):
        cd_closed_form(3, 2, [9, 9])


def test_p_exceptional_values():
    assert cd_from_p_exceptional([9, 30], 3) == 28
    assert cd_from_p_exceptional([30], 5) == 24
    assert cd_from_p_exceptional([PExceptionalDegree(12, 4, 1)], 3) == 8
    assert cd_from_p_exceptional([], 3) == 0
    with pytest.raises(InputError):
        cd_from_p_exceptional([8], 2)
    with pytest.raises(InputError):
        cd_from_p_exceptional([10], 3)
    with pytest.raises(InputError):
        PExceptionalDegree(12, 3, 1).validate(3)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([3, 5, 7]), st.lists(st.tuples(st.integers(1, 12), st.integers(1, 2)), max_size=4))
def test_p_exceptional_search_inverts_factor_product(p, parts):
    parts = [(d, k) for d, k in parts if d % p]
    series = IntPoly([1])
    for d, k in parts:
        series = series * exact_divide(quantum_factor_product([d * p**k]), quantum_factor_product([d]))
    found = p_exceptional_search(series, p)
    expected = sum(d * (p**k - 1) for d, k in parts)
    assert cd_from_p_exceptional(found, p) == expected == (series.degree if parts else 0)


def test_group_chow_route():
    chow_x = quantum_factor_product([2, 6, 8, 12])
    assert cd_via_group_chow(chow_x, quantum_factor_product([2, 4, 6, 8])) == 8
    with pytest.raises(ConsistencyFailure):
        cd_via_group_chow(chow_x, quantum_factor_product([2, 5]))


def test_cohomology_record_validation():
    ok = CohomologyInput("G", 2, IntPoly([1, 0, 0, 1]), [3], "exterior algebra on one generator")
    assert cd_p2_cohomology(ok) == 0
    with pytest.raises(InputError):
        CohomologyInput("G", 2, IntPoly([1, 0, 0, 1]), [3], "")
    with pytest.raises(InputError):
        CohomologyInput("G", 2, IntPoly([1, 0, 0, 0, 1]), [4], "even generator")
    with pytest.raises(InputError):
        CohomologyInput("G", 2, IntPoly([1, 0, 0, 1]), [3, 5], "too many")
    with pytest.raises(InputError):
        CohomologyInput("G", 2, IntPoly([1, 0, 0, 0, 1]), [3], "odd gap")


AGREEMENT = [s for s in all_specs(4) if s.rank <= 3 or s.family in "DG"]


@pytest.mark.parametrize("spec", AGREEMENT, ids=lambda s: s.label)
@pytest.mark.parametrize("p", [2, 3, 5])
def test_compute_all_agrees(spec, p):
    report = compute_all(spec, p)
    assert report.verdict == "agree"
    computed = [r for r in report.results if r.computed]
    assert {r.method for r in computed} >= {DIRECT, CHOW_OF_G}
    tors = torsion_primes(spec)
    if p not in tors.primes and not tors.partial:
        assert report.cd == 0


def test_skips_carry_reasons():
    report = compute_all(GroupSpec("B", 3), 2)
    assert report.by_method(P_EXCEPTIONAL).skipped_reason
    assert report.by_method(COHOMOLOGY_P2).skipped_reason
    report = compute_all(GroupSpec("E", 8), 3, methods=[CLOSED_FORM])
    assert report.verdict == "insufficient" and report.cd is None


def test_disagreement_is_fatal():
    spec = GroupSpec("G", 2)
    bogus = {spec: CohomologyInput("G", 2, IntPoly([1] + [0] * 7 + [1]), [3, 5], "deliberately wrong")}
    with pytest.raises(ConsistencyFailure) as info:
        compute_all(spec, 2, cohomology=bogus)
    report = info.value.payload["report"]
    assert report.verdict == "disagree"
    assert {r.cd for r in report.results if r.computed} == {0, 3}


def test_user_degree_data_path():
    spec = GroupSpec("E", 7)
    data = {(spec, 3): {"degrees": [2, 4, 6, 8, 10, 14, 18], "provenance": "test"}}
    report = compute_all(spec, 3, methods=[CLOSED_FORM, CHOW_OF_G, P_EXCEPTIONAL], degree_data=data)
    assert report.cd == 8 and report.verdict == "agree"
    assert "user-supplied" in report.by_method(CLOSED_FORM).support["source"]
    rs = build_root_system(spec)
    assert rs.N + rs.n - sum(data[(spec, 3)]["degrees"]) == 8

import numpy as np
import pytest
from hypothesis import given, strategies as st

from canondim.errors import InputError
from canondim.rootsys import (
    ADJOINT,
    SIMPLY_CONNECTED,
    GroupSpec,
    all_specs,
    build_root_system,
    cartan_matrix,
    degrees,
    torsion_primes,
    weight_lattice_basis,
)
from oracles import positive_roots_by_orbit

KNOWN_DEGREES = {
    ("A", 1): (2,),
    ("A", 4): (2, 3, 4, 5),
    ("B", 3): (2, 4, 6),
    ("C", 4): (2, 4, 6, 8),
    ("D", 4): (2, 4, 4, 6),
    ("D", 5): (2, 4, 5, 6, 8),
    ("G", 2): (2, 6),
    ("F", 4): (2, 6, 8, 12),
    ("E", 6): (2, 5, 6, 8, 9, 12),
    ("E", 7): (2, 6, 8, 10, 12, 14, 18),
    ("E", 8): (2, 8, 12, 14, 18, 20, 24, 30),
}


def n_positive(fam, n):
    return {"A": n * (n + 1) // 2, "B": n * n, "C": n * n, "D": n * (n - 1)}.get(fam) or {
        ("G", 2): 6, ("F", 4): 24, ("E", 6): 36, ("E", 7): 63, ("E", 8): 120}[(fam, n)]


SPECS = all_specs(8, isogenies=(SIMPLY_CONNECTED,))


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.label)
def test_positive_roots_match_reflection_orbit(spec):
    rs = build_root_system(spec)
    got = {tuple(int(x) for x in r) for r in rs.positive_roots}
    assert len(got) == len(rs.positive_roots) == n_positive(spec.family, spec.rank)
    if rs.N <= 63:
        assert got == positive_roots_by_orbit(rs.cartan)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.label)
def test_degree_sum_and_count(spec):
    prof = degrees(build_root_system(spec))
    assert sum(d - 1 for d in prof.degrees) == n_positive(spec.family, spec.rank)
    assert len(prof.degrees) == spec.rank
    assert prof.exponents == tuple(d - 1 for d in prof.degrees)


@pytest.mark.parametrize("key,degs", KNOWN_DEGREES.items(), ids=str)
def test_known_degrees(key, degs):
    assert degrees(build_root_system(GroupSpec(*key))).degrees == degs


def test_weyl_orders():
    assert build_root_system(GroupSpec("E", 8)).profile.weyl_order == 696729600
    assert build_root_system(GroupSpec("F", 4)).profile.weyl_order == 1152
    assert build_root_system(GroupSpec("B", 3)).profile.weyl_order == 48


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.label)
def test_cartan_symmetrizable(spec):
    rs = build_root_system(spec)
    C, d = rs.cartan, rs.symmetrizer
    assert np.all(np.diag(C) == 2)
    assert np.array_equal(np.diag(d) @ C, (np.diag(d) @ C).T)


def test_cartan_convention_nonsimply_laced():
    # cartan[i][j] = <alpha_j, alpha_i^vee> with Bourbaki numbering
    assert cartan_matrix("B", 2).tolist() == [[2, -1], [-2, 2]]
    assert cartan_matrix("G", 2).tolist() == [[2, -3], [-1, 2]]
    assert cartan_matrix("C", 3)[1, 2] == -2


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.label)
def test_coroots_pair_to_two(spec):
    rs = build_root_system(spec)
    # <beta, beta^vee> = 2 for every positive root
    pair = np.einsum("ij,ij->i", rs.roots_in_weights, rs.positive_coroots)
    assert np.all(pair == 2)
    if spec.family in "ADE":
        assert np.array_equal(rs.positive_roots, rs.positive_coroots)


def test_torsion_table():
    tp = lambda label: set(torsion_primes(GroupSpec.parse(label)).primes)
    assert tp("A3") == set() and tp("C3") == set() and tp("B2") == set()
    assert tp("B3") == tp("D4") == tp("G2") == {2}
    assert tp("F4") == tp("E6") == tp("E7") == {2, 3}
    assert tp("E8") == {2, 3, 5}
    assert tp("C3 ad") == {2}
    a5 = torsion_primes(GroupSpec("A", 5, "ad"))
    assert a5.primes == {2, 3} and a5.partial


def test_lattice_basis():
    rs = build_root_system(GroupSpec("A", 2, "ad"))
    assert weight_lattice_basis(rs).tolist() == [[2, -1], [-1, 2]]
    assert np.array_equal(weight_lattice_basis(build_root_system(GroupSpec("A", 2))), np.eye(2))


@pytest.mark.parametrize("bad", [("A", 0), ("B", 1), ("D", 3), ("E", 5), ("F", 3), ("G", 3), ("H", 3), ("A", 2.0)])
def test_invalid_specs(bad):
    with pytest.raises(InputError):
        GroupSpec(*bad)


def test_invalid_isogeny_and_labels():
    with pytest.raises(InputError):
        GroupSpec("A", 2, "half")
    for text in ("", "E", "Ex", "E6 sc ad"):
        with pytest.raises(InputError):
            GroupSpec.parse(text)


@given(st.sampled_from(all_specs(8)))
def test_label_round_trip(spec):
    assert GroupSpec.parse(spec.label) == spec
    assert GroupSpec(spec.family.lower(), spec.rank, spec.short_isogeny) == spec


def test_all_specs_skips_trivial_centres():
    specs = all_specs(8)
    assert GroupSpec("F", 4, ADJOINT) not in specs
    assert GroupSpec("E", 8, ADJOINT) not in specs
    assert GroupSpec("E", 7, ADJOINT) in specs

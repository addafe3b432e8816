import random
from fractions import Fraction

import pytest
import sympy

from conekit import linalg as la
from conekit.cone import face
from conekit.fixtures import get_fixture
from conekit.lattice import LorentzLattice, diagonal_lattice
from conekit.surface import (
    Curve,
    NotNef,
    NotNegativeDefinite,
    SurfaceData,
    SurfaceError,
    classify_cone,
    curve_types,
    declared_minus_one_report,
    dual_graph_components,
    iitaka_case,
    minus_one_classes,
    mordell_weil_action,
    mordell_weil_group_data,
    nef_cone_from_curves,
    nef_is_effective,
    negativity_solve,
    pi_E_cone,
    riemann_roch_chi,
    solve_negative_definite,
    type_of,
    zariski_decompose,
)


def face_rays(cone, v):
    return set(face(cone, [v]).rays)


def toy_cf():
    """C^2 = -2, F^2 = 0, C.F = 1."""
    lat = LorentzLattice([[-2, 1], [1, 0]], [1, 3])
    return SurfaceData(lat, (-2, -4), (Curve("C", (1, 0)), Curve("F", (0, 1))), (),
                       {"rational_surface": True, "anti_K_effective": True})


def test_riemann_roch_examples():
    e1 = get_fixture("e1").surface
    dp8 = get_fixture("del-pezzo-8").surface
    assert riemann_roch_chi(e1, (0,) * 10) == 1
    assert riemann_roch_chi(e1, (3,) + (-1,) * 9) == 1
    assert riemann_roch_chi(dp8, (1,) + (0,) * 8) == 3
    for S, L, chi in ((e1, (0,) * 10, 1), (e1, (3,) + (-1,) * 9, 1), (dp8, (1,) + (0,) * 8, 3)):
        assert nef_is_effective(S, L) == (True, chi)


def test_riemann_roch_needs_declaration():
    S = SurfaceData(diagonal_lattice(1, 1), (-3, 1))
    with pytest.raises(SurfaceError):
        riemann_roch_chi(S, (1, 0))
    with pytest.raises(NotNef):
        nef_is_effective(toy_cf(), (0, -1))


def test_negativity_examples():
    sol = solve_negative_definite([[-2, 1], [1, -2]], [-1, -1])
    assert sol.coeffs == (1, 1)
    assert solve_negative_definite([[-2]], [-2]).coeffs == (1,)
    zero = solve_negative_definite([[-2, 1], [1, -2]], [0, 0])
    assert zero.coeffs == (0, 0) and zero.support == ()
    S = toy_cf()
    assert negativity_solve(S, [0], [-2]).coeffs == (1,)
    with pytest.raises(NotNegativeDefinite):
        solve_negative_definite([[-2, 2], [2, -2]], [0, 0])


def test_dual_graph_components():
    g = [[-2, 1, 0, 0], [1, -2, 0, 0], [0, 0, -1, 0], [0, 0, 0, -3]]
    assert dual_graph_components(g) == [[0, 1], [2], [3]]


def test_zariski_examples():
    S = toy_cf()
    Z = zariski_decompose(S, (1, 1))
    assert Z.P == (Fraction(1, 2), 1)
    assert Z.N_support == (0,) and Z.N_coeffs == (Fraction(1, 2),)
    assert S.pairing(Z.P, Z.P) == Fraction(1, 2)
    assert S.pairing(Z.P, (1, 0)) == 0
    Z = zariski_decompose(S, (1, 0))
    assert Z.P == (0, 0) and Z.N_coeffs == (1,)
    Z = zariski_decompose(S, (1, 3))
    assert Z.P == (1, 3) and Z.N_support == ()


def test_zariski_matches_hirzebruch_fixture():
    S = get_fixture("hirzebruch-2").surface
    Z = zariski_decompose(S, (1, 1))
    assert Z.P == (Fraction(1, 2), 1)


def test_iitaka_cases():
    for r in (1, 4, 8):
        S = get_fixture(f"del-pezzo-{r}").surface
        assert iitaka_case(S, zariski_decompose(S, [-x for x in S.K])) == "two"
    e1 = get_fixture("e1").surface
    assert iitaka_case(e1, zariski_decompose(e1, [-x for x in e1.K])) == "one"
    hx = get_fixture("hesse-x").surface
    Z = zariski_decompose(hx, [-x for x in hx.K])
    assert iitaka_case(hx, Z) == "zero"
    assert Z.N_coeffs == (Fraction(1, 3),) * 9


def test_minus_one_counts_small_del_pezzo():
    for r, n in ((1, 1), (2, 3), (3, 6), (4, 10), (5, 16)):
        res = minus_one_classes(get_fixture(f"del-pezzo-{r}").surface, 3)
        assert len(res.classes) == n and res.complete


def test_minus_one_incomplete_when_degree_bound_too_small():
    # against -K every class has degree 1
    res = minus_one_classes(get_fixture("del-pezzo-8").surface, 1)
    assert res.complete and res.per_degree == (240,)
    # against 4h - e1 - ... - e8 degrees spread out
    lat = diagonal_lattice(1, 8, (4,) + (-1,) * 8)
    S = SurfaceData(lat, (-3,) + (1,) * 8)
    res = minus_one_classes(S, 2)
    assert not res.complete
    assert res.per_degree == (8, 28)
    assert len(minus_one_classes(S, 12).classes) == 240


def test_curve_types_examples():
    S = toy_cf()
    half = zariski_decompose(S, (1, 1))
    assert [t.lambdas for t in curve_types(S, half)] == [(2,)]
    one = zariski_decompose(S, (1, 0))
    assert [t.lambdas for t in curve_types(S, one)] == [(1,)]
    hx = get_fixture("hesse-x").surface
    types = curve_types(hx, zariski_decompose(hx, [-x for x in hx.K]))
    assert len(types) == 165
    assert all(sum(t.lambdas) == 3 for t in types)
    with pytest.raises(SurfaceError):
        curve_types(S, zariski_decompose(S, (1, 3)))


def test_types_of_exceptional_curves_on_hesse_blowup():
    hx = get_fixture("hesse-x").surface
    Z = zariski_decompose(hx, [-x for x in hx.K])
    seen = {type_of(hx, Z, hx.curves[hx.curve_index(f"e{i}")].cls) for i in range(1, 13)}
    allowed = {t for t in curve_types(hx, Z)}
    assert seen <= allowed


def test_mordell_weil_example():
    S = get_fixture("e1").surface
    e = lambda i: tuple(int(j == i) for j in range(10))
    x = la.sub(e(1), e(2))
    phi = mordell_weil_action(S, x)
    img = phi(e(9))
    assert img == (3, 0, -2, -1, -1, -1, -1, -1, -1, 0)
    assert S.pairing(img, img) == -1
    assert S.pairing(img, [-k for k in S.K]) == 1
    assert mordell_weil_action(S, (0,) * 10).is_identity
    with pytest.raises(SurfaceError):
        mordell_weil_action(S, e(1))


def test_mordell_weil_group_rank_and_sympy_cross_check():
    S = get_fixture("e1").surface
    data = mordell_weil_group_data(S)
    assert data.rank == 8 and data.torsion == ()
    assert len(data.quotient_reps) == 8 and len(data.action_basis) == 8
    # independent route: the quotient of P^perp by Z P has rank 9 - 1
    P = (3,) + (-1,) * 9
    perp = sympy.Matrix([S.lattice.covector(P)]).nullspace()
    assert len(perp) - 1 == data.rank
    for v in data.action_basis:
        assert S.pairing(v, P) == 0


def test_mordell_weil_with_reducible_fiber_component():
    # declaring a fiber component C with C.P = 0 drops the rank by one
    S = get_fixture("e1").surface
    comp = (0, 1, -1, 0, 0, 0, 0, 0, 0, 0)
    data = mordell_weil_group_data(S, components=[comp])
    assert data.rank == 7


def test_pi_e_cone_on_bl2():
    S = get_fixture("bl2").surface
    nef = nef_cone_from_curves(S, [c.cls for c in S.curves])
    assert set(nef.rays) == {(1, 0, 0), (1, -1, 0), (1, 0, -1)}
    # P = h - e1 is the conic fibration class; E = e1 meets it and e1^perp cuts the face (h, h - e2)
    Z = zariski_decompose(S, (1, -1, 0))
    assert face_rays(nef, (0, 1, 0)) == {(1, 0, 0), (1, 0, -1)}
    cone = pi_E_cone(S, Z, (0, 1, 0), nef)
    assert set(cone.rays) == {(1, -1, 0), (1, 0, 0), (1, 0, -1)}
    # l12 lies in a fiber of the ruling h - e2, so it is not a valid E there
    Z2 = zariski_decompose(S, (1, 0, -1))
    with pytest.raises(SurfaceError):
        pi_E_cone(S, Z2, (1, -1, -1), nef)
    with pytest.raises(SurfaceError):
        pi_E_cone(S, Z, (0, 0, 1), nef)


def test_classify_verdicts():
    assert classify_cone(get_fixture("del-pezzo-6").surface).verdict == "PolyhedralCertified"
    assert classify_cone(get_fixture("hirzebruch-2").surface).verdict == "PolyhedralCertified"
    v = classify_cone(get_fixture("bl9").surface)
    assert v.verdict == "NotPolyhedralWithinBound"
    assert not v.klt_calabi_yau
    e1 = classify_cone(get_fixture("e1").surface)
    assert e1.verdict == "NotPolyhedralWithinBound" and e1.mordell_weil_rank == 8 and e1.klt_calabi_yau


def test_klt_declaration_is_checked():
    lat = diagonal_lattice(1, 2, (3, -1, -1))
    with pytest.raises(SurfaceError):
        SurfaceData(lat, (-3, 1, 1), (Curve("e1", (0, 1, 0)),), ((0, Fraction(1, 2)),), {"klt_calabi_yau": True})
    with pytest.raises(SurfaceError):
        SurfaceData(lat, (-3, 1, 1), (Curve("e1", (0, 1, 0)),), ((0, 1),))


def test_surface_json_roundtrip():
    S = get_fixture("e1").surface
    assert SurfaceData.from_json(S.to_json()) == S


def test_mordell_weil_rank_zero_cases():
    # rank 2: P^perp = Z P
    lat = LorentzLattice([[0, 1], [1, 0]], [1, 1])
    S = SurfaceData(lat, (-2, -2), (), (), {"fibration": {"P": (1, 0), "a": 1, "b": 1}})
    assert mordell_weil_group_data(S).rank == 0
    # eight independent fiber components e_i - e_{i+1} kill the free part of E(1)
    e1 = get_fixture("e1").surface
    comps = [tuple(int(j == i) - int(j == i + 1) for j in range(10)) for i in range(1, 9)]
    data = mordell_weil_group_data(e1, components=comps)
    assert data.rank == 0
    # the A8 sublattice has index 3 in the E8 lattice
    assert data.torsion == (3,)


def test_mordell_weil_maps_minus_one_classes_to_minus_one_classes():
    S = get_fixture("e1").surface
    classes = minus_one_classes(S, 2).classes
    basis = mordell_weil_group_data(S).action_basis
    for x in basis:
        phi = mordell_weil_action(S, x)
        for E in classes:
            img = phi(E)
            assert S.pairing(img, img) == -1 and S.pairing(img, S.K) == -1
            assert la.is_integral(img)


def test_pi_e_degenerate_face_and_union():
    S = get_fixture("bl2").surface
    nef = nef_cone_from_curves(S, [c.cls for c in S.curves])
    Z = zariski_decompose(S, (1, -1, 0))
    # h is positive on every nonzero nef class, so the face is {0} and only P remains
    assert pi_E_cone(S, Z, (1, 0, 0), nef).rays == ((1, -1, 0),)
    # the chamber cones of the classes meeting the fibers cover the nef cone
    chambers = [pi_E_cone(S, Z, E, nef) for E in minus_one_classes(S, 3).classes if S.pairing(Z.P, E) > 0]
    rng = random.Random(0)
    for _ in range(200):
        cs = [rng.randint(0, 9) for _ in nef.rays]
        x = [sum(c * r[i] for c, r in zip(cs, nef.rays)) for i in range(3)]
        assert any(ch.contains(x) for ch in chambers)


def test_declared_minus_one_report():
    hx = get_fixture("hesse-x").surface
    Z = zariski_decompose(hx, [-x for x in hx.K])
    rep = declared_minus_one_report(hx, Z)
    assert len(rep) == 12
    a = Z.N_coeffs
    for row in rep:
        assert row["bound_holds"] and row["P_dot_E"] == 0
        # N.E = -K.E - P.E = 1
        assert sum(x * Fraction(t) for x, t in zip(a, row["type"])) == 1

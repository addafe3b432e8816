import itertools
import random

import pytest

from conekit import linalg as la
from conekit.cone import (
    ConeError,
    NotSupporting,
    PolyCone,
    StabilizerNontrivial,
    dirichlet_domain,
    dual_convert,
    face,
    locate,
    tile_check,
)
from conekit.fixtures import get_fixture
from conekit.isometry import GroupGens
from conekit.lattice import LorentzLattice, diagonal_lattice

STD = [[1, 0], [0, 1]]
D11 = diagonal_lattice(1, 1)
PELL = LorentzLattice([[1, 0], [0, -2]], [1, 0])
G = [[3, 4], [2, 3]]


def test_dual_convert_examples():
    q = dual_convert(STD, rays=[(1, 0), (0, 1)])
    assert q.facets == ((0, 1), (1, 0))
    pos = dual_convert(D11, rays=[(1, 1), (1, -1)])
    assert set(pos.facets) == {(1, 1), (1, -1)}
    single = dual_convert(D11, rays=[(2, 1)])
    assert single.rays == ((2, 1),)
    assert single.facets == ((-1, -2), (1, 2), (2, -1))
    with pytest.raises(ConeError):
        dual_convert(D11)
    with pytest.raises(ConeError):
        dual_convert(D11, rays=[], facets=[])


def _tight_rank(cone, f):
    return la.rank([r for r in cone.rays if cone.pair(f, r) == 0] + list(cone.lineality) or [[0] * cone.dim])


def _check_canonical(cone, generators):
    n = cone.dim
    for g in generators:
        assert cone.contains(g)
    if not cone.pointed:
        # rays are then representatives in a complement of the lineality space
        return
    prims = {la.primitive_integral(g) for g in generators}
    span = la.rank(list(cone.rays))
    for r in cone.rays:
        assert r in prims
        # extreme: the tight facets cut out a line inside the span
        tight = [f for f in cone.facets if cone.pair(f, r) == 0]
        assert la.rank(tight) == n - 1
    if span == n:
        for f in cone.facets:
            assert _tight_rank(cone, f) == n - 1


@pytest.mark.parametrize("seed", range(25))
def test_random_cones_are_canonical(seed):
    rng = random.Random(seed)
    n = rng.choice([3, 4])
    gram = la.identity(n)
    gens = [tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(rng.randint(n, n + 4))]
    gens = [g for g in gens if any(g)]
    cone = dual_convert(gram, rays=gens)
    _check_canonical(cone, gens)
    # converting back and forth is idempotent
    if cone.facets:
        assert dual_convert(gram, facets=list(cone.facets)) == cone
    assert dual_convert(gram, rays=list(cone.rays), lineality=list(cone.lineality)) == cone


def test_random_cones_brute_force_membership():
    # a point lies in the cone iff it is a nonnegative combination; check against facets on a grid
    rng = random.Random(42)
    gram = la.identity(3)
    for _ in range(10):
        gens = [tuple(rng.randint(0, 4) for _ in range(3)) for _ in range(4)]
        gens = [g for g in gens if any(g)]
        cone = dual_convert(gram, rays=gens)
        inside = set()
        for coeffs in itertools.product(range(4), repeat=len(gens)):
            inside.add(tuple(sum(c * g[i] for c, g in zip(coeffs, gens)) for i in range(3)))
        for p in inside:
            assert cone.contains(p)
        for p in itertools.product(range(-2, 3), repeat=3):
            if cone.contains(p) and la.rank(gens) == 3 and len(gens) == 3:
                sol = la.solve([[g[i] for g in gens] for i in range(3)], p)
                assert all(c >= 0 for c in sol)


def test_redundant_facets_are_pruned():
    cone = dual_convert(STD, facets=[(1, 0), (0, 1), (1, 1), (2, 3)])
    assert cone.facets == ((0, 1), (1, 0))


def test_lineality_cones():
    half = dual_convert(la.identity(3), facets=[(1, 0, 0)])
    assert not half.pointed
    assert len(half.lineality) == 2
    assert half.rays == ((1, 0, 0),)
    plane = dual_convert(la.identity(3), rays=[(1, 0, 0), (0, 1, 0), (-1, -1, 0)])
    assert plane.rays == ()
    assert set(plane.facets) == {(0, 0, 1), (0, 0, -1)}


def test_face_examples():
    q = dual_convert(STD, rays=[(1, 0), (0, 1)])
    assert face(q, [(0, 1)]).rays == ((1, 0),)
    pos = dual_convert(D11, rays=[(1, 1), (1, -1)])
    assert face(pos, [(1, 1)]).rays == ((1, 1),)
    assert face(pos, []) == pos
    with pytest.raises(NotSupporting):
        face(q, [(1, -1)])


def test_json_roundtrip():
    cone = dual_convert(D11, rays=[(2, 1), (3, -1)])
    assert PolyCone.from_json(D11, cone.to_json()) == cone
    assert PolyCone.from_json(D11, {"facets": [list(f) for f in cone.facets]}) == cone


# ---------------------------------------------------------------------------
# Dirichlet domains


def test_dirichlet_identity_group_is_ambient():
    amb = dual_convert(D11, rays=[(2, 1), (2, -1)])
    res = dirichlet_domain(D11, GroupGens(D11, ()), (1, 0), ambient=amb)
    assert res.domain == amb
    assert res.orbit_used == 1


def test_dirichlet_pell():
    res = dirichlet_domain(PELL, GroupGens(PELL, (G,)), (1, 0))
    assert res.certified and res.lattice_certified
    assert res.domain.rays == ((2, -1), (2, 1))
    assert res.domain.facets == ((1, -1), (1, 1))
    # facets are gy - y = (2,2) and g^-1 y - y = (2,-2), primitive
    assert res.facet_words == {(1, -1): ["g1^-1"], (1, 1): ["g1"]}
    y = (1, 0)
    assert res.domain.in_interior(y)
    assert not res.domain.in_interior((3, 2))
    assert res.boundary_rational_rays == ()


def test_dirichlet_stabilizer_raises():
    group = GroupGens(PELL, ([[1, 0], [0, -1]], G))
    with pytest.raises(StabilizerNontrivial):
        dirichlet_domain(PELL, group, (1, 0))


def test_dirichlet_budget_exceeded_is_reported():
    fx = get_fixture("hesse-y")
    res = dirichlet_domain(fx.lattice, fx.group, fx.basepoint, max_elements=20)
    assert res.budget_exceeded and not res.certified


def test_dirichlet_hesse_has_a_cusp():
    fx = get_fixture("hesse-y")
    res = dirichlet_domain(fx.lattice, fx.group, fx.basepoint)
    assert res.certified and res.lattice_certified
    assert len(res.boundary_rational_rays) >= 1
    for e in res.boundary_rational_rays:
        assert fx.lattice.norm(e) == 0
    # every non-cusp vertex is inside the hyperbolic space
    for r in res.domain.rays:
        assert fx.lattice.norm(r) >= 0


def test_tile_check_pell_examples():
    group = GroupGens(PELL, (G,))
    res = dirichlet_domain(PELL, group, (1, 0))
    rep = tile_check(res, group, [(1, 0), (17, 12), (2, 1)])
    a, b, c = rep.records
    assert (a.word, a.multiplicity, a.interior) == ("e", 1, True)
    assert (b.word, b.multiplicity) == ("g1 g1", 1)
    assert c.multiplicity == 2 and not c.interior
    assert rep.ok and rep.coverage == 1


def test_locate_returns_a_consistent_element():
    group = GroupGens(PELL, (G,))
    res = dirichlet_domain(PELL, group, (1, 0))
    x = (99, -70)
    word, h, x0 = locate(res, x)
    assert res.domain.contains(x0)
    assert h(x0) == x
    assert word == "g1^-1 g1^-1 g1^-1"


def _naive_facets(gens, n):
    # every supporting hyperplane through n-1 independent generators
    out = set()
    for sub in itertools.combinations(gens, n - 1):
        if la.rank(list(sub)) != n - 1:
            continue
        (normal,) = la.nullspace(list(sub), n)
        vals = [la.dot(normal, g) for g in gens]
        if all(v >= 0 for v in vals):
            out.add(la.primitive_integral(normal))
        elif all(v <= 0 for v in vals):
            out.add(la.primitive_integral([-x for x in normal]))
    return out


@pytest.mark.parametrize("seed", range(20))
def test_facets_match_naive_enumeration(seed):
    rng = random.Random(100 + seed)
    n = rng.choice([3, 4])
    gens = [tuple(rng.randint(-1, 4) for _ in range(n - 1)) + (rng.randint(1, 4),) for _ in range(n + 3)]
    cone = dual_convert(la.identity(n), rays=gens)
    assert cone.pointed
    if la.rank(gens) == n:
        assert set(cone.facets) == _naive_facets(gens, n)

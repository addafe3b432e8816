import random
from fractions import Fraction

import pytest

from conekit import linalg as la
from conekit.isometry import (
    FormNotPreserved,
    GroupGens,
    IsometryError,
    WrongConeComponent,
    identity_isometry,
    orbit_ball,
    orthogonal_complement_basis,
    parabolic_basis,
    parabolic_map,
    verify_isometry,
)
from conekit.lattice import LorentzLattice, diagonal_lattice

PELL = LorentzLattice([[1, 0], [0, -2]], [1, 0])
G = [[3, 4], [2, 3]]
D12 = diagonal_lattice(1, 2)


def test_verify_isometry_examples():
    assert verify_isometry(PELL, la.identity(2)).is_identity
    assert verify_isometry(PELL, G).matrix == ((3, 4), (2, 3))
    with pytest.raises(WrongConeComponent):
        verify_isometry(PELL, [[-1, 0], [0, -1]])
    with pytest.raises(FormNotPreserved):
        verify_isometry(PELL, [[1, 1], [0, 1]])
    with pytest.raises(IsometryError):
        verify_isometry(PELL, [[1, 0, 0], [0, 1, 0]])


def test_inverse_and_composition():
    g = verify_isometry(PELL, G)
    assert (g @ g.inverse()).is_identity
    assert g.inverse().matrix == ((3, -4), (-2, 3))
    assert (g @ g)((1, 0)) == (17, 12)


def test_parabolic_example_and_zero():
    a = parabolic_map(D12, (1, 1, 0), (0, 0, 1))
    assert a((1, 0, 0)) == (Fraction(3, 2), Fraction(1, 2), 1)
    assert parabolic_map(D12, (1, 1, 0), (0, 0, 0)).is_identity


def test_parabolic_rejects_bad_input():
    with pytest.raises(IsometryError):
        parabolic_map(D12, (1, 0, 0), (0, 0, 1))
    with pytest.raises(IsometryError):
        parabolic_map(D12, (1, 1, 0), (1, 0, 0))


def _random_parabolic_data(lat, rng, e):
    basis = orthogonal_complement_basis(lat, e)
    def rand_x():
        cs = [rng.randint(-3, 3) for _ in basis]
        t = rng.randint(-2, 2)
        return tuple(sum(c * b[i] for c, b in zip(cs, basis)) + t * e[i] for i in range(lat.rank))
    return rand_x


@pytest.mark.parametrize("lat,e", [
    (D12, (1, 1, 0)),
    (diagonal_lattice(1, 3), (3, 2, 2, 1)),
    (LorentzLattice([[0, 1, 0], [1, 0, 0], [0, 0, -2]], [1, 1, 0]), (1, 0, 0)),
])
def test_parabolic_identities(lat, e):
    rng = random.Random(1)
    rand_x = _random_parabolic_data(lat, rng, e)
    for _ in range(40):
        x, x2 = rand_x(), rand_x()
        ax, ax2 = parabolic_map(lat, e, x), parabolic_map(lat, e, x2)
        assert (ax @ ax2).matrix == parabolic_map(lat, e, la.add(x, x2)).matrix
        assert ax(e) == la.vec(e)
        # translating x by a multiple of e does not change the map
        assert parabolic_map(lat, e, la.add(x, la.scale(5, e))).matrix == ax.matrix


def test_parabolic_basis_examples():
    assert parabolic_basis(LorentzLattice([[0, 1], [1, 0]], [1, 1]), (1, 0)).gens == ()
    gens = parabolic_basis(D12, (1, 1, 0)).gens
    assert len(gens) == 1
    assert gens[0].matrix == parabolic_map(D12, (1, 1, 0), (0, 0, 1)).matrix


def test_parabolic_basis_e1_has_rank_eight():
    lat = diagonal_lattice(1, 9)
    minus_k = (3,) + (-1,) * 9
    xs = orthogonal_complement_basis(lat, minus_k)
    assert len(xs) == 8
    assert la.rank(xs + [minus_k]) == 9
    for x in xs:
        assert lat.pairing(x, minus_k) == 0
    # the basis plus e spans the full integral orthogonal complement
    full = la.integer_kernel([lat.covector(minus_k)], 10)
    inv, _, _ = la.smith_normal_form(xs + [minus_k])
    assert inv == [1] * 9
    assert len(full) == 9


def test_orbit_ball_trivial_group():
    ball = orbit_ball(GroupGens(PELL, ()), (1, 0), 100)
    assert ball.words() == [("e", (1, 0))]
    ball = orbit_ball(GroupGens(PELL, (la.identity(2),)), (1, 0), 100)
    assert ball.words() == [("e", (1, 0))]


def test_orbit_ball_pell():
    group = GroupGens(PELL, (G,))
    ball = orbit_ball(group, (1, 0), 9)
    assert ball.complete
    assert ball.words() == [("e", (1, 0)), ("g1^-1", (3, -2)), ("g1", (3, 2))]
    assert [p.cosh_sq for p in ball.points] == [1, 9, 9]
    # every ball up to (2*9-1)^2 - 1 sees exactly the same three points
    assert len(orbit_ball(group, (1, 0), 288)) == 3
    big = orbit_ball(group, (1, 0), 400)
    assert [p.point for p in big.points][-2:] == [(17, -12), (17, 12)]
    assert big.points[-1].word == "g1 g1"


def test_orbit_ball_truncation_and_stabilizer():
    group = GroupGens(PELL, (G,))
    ball = orbit_ball(group, (1, 0), 10 ** 6, max_elements=4)
    assert ball.truncated and len(ball) == 4
    # reflection in (0,1) fixes (1,0)
    refl = GroupGens(PELL, ([[1, 0], [0, -1]],))
    assert orbit_ball(refl, (1, 0), 10).stabilizer_witness.matrix == ((1, 0), (0, -1))
    assert orbit_ball(refl, (3, 1), 100).stabilizer_witness is None


def test_orbit_ball_independent_of_generator_order():
    lat = D12
    e = (1, 1, 0)
    gens = [parabolic_map(lat, e, (0, 0, 1)).matrix, [[1, 0, 0], [0, 1, 0], [0, 0, -1]],
            [[3, 2, 2], [2, 1, 2], [2, 2, 1]]]
    y = (7, 1, 2)
    b1 = orbit_ball(GroupGens(lat, tuple(gens)), y, 500)
    b2 = orbit_ball(GroupGens(lat, tuple(reversed(gens))), y, 500)
    assert [p.point for p in b1.points] == [p.point for p in b2.points]
    for p in b1.points:
        assert p.element(y) == p.point
        assert lat.norm(p.point) == lat.norm(y)


def test_group_json_roundtrip():
    group = GroupGens(PELL, (G,))
    assert GroupGens.from_json(PELL, group.to_json()) == group
    assert identity_isometry(PELL).is_identity

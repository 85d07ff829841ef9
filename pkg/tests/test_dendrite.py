import math
from fractions import Fraction

import numpy as np
import pytest

from src.dendrite import (FullConeCode, build_stub_tree, enumerate_full_cones, full_cone_bijection_check,
                          full_cone_code, full_cone_conjugacy_check, full_cone_decode, full_cone_encode,
                          full_cone_step, geometric_separation, verify_stub_tree_separation, window_word)
from src.errors import PreconditionError
from src.symbolic import shift_step
from src.systems.dendrite import (P_END, Q_END, DendriteMap, DendritePoint, Subtree, dendrite_map_check,
                                  full_dendrite, hausdorff_subtrees, node, spine_index, spine_map, subtree_image)


def test_nodes_and_spine_index():
    assert node(1) == Fraction(1, 2)
    assert node(-2) == Fraction(-2, 3)
    assert spine_index(Fraction(1, 2)) == 1
    assert spine_index(Fraction(-1, 3)) == -1
    with pytest.raises(PreconditionError):
        spine_index(Fraction(1))


def test_spine_map_is_piecewise_affine():
    assert spine_map(Fraction(0)) == Fraction(1, 2)
    assert spine_map(Fraction(1, 4)) == Fraction(7, 12)
    assert spine_map(Fraction(7, 12), -1) == Fraction(1, 4)


def test_base_leg_moves_tip_to_tip():
    f = DendriteMap()
    assert f(DendritePoint.leg(0, 1)) == DendritePoint.leg(1, Fraction(1, 2))
    assert f.inverse(DendritePoint.leg(1, Fraction(1, 2))) == DendritePoint.leg(0, 1)
    assert f(P_END) == P_END and f(Q_END) == Q_END


def test_zero_height_leg_point_is_on_the_spine():
    assert DendritePoint.leg(2, 0) == DendritePoint.spine(node(2))


def test_map_check():
    report = dendrite_map_check(samples=200, subtrees=10, seed=1)
    assert report['all_passed'], report


def test_subtree_validation():
    with pytest.raises(PreconditionError):
        Subtree.build(0, Fraction(1, 2), {3: Fraction(1, 8)})
    with pytest.raises(PreconditionError):
        Subtree.build(0, Fraction(1, 2), {1: Fraction(1)})


def test_subtree_hausdorff():
    stub = Subtree.build(0, 0, {0: 1})
    bare = Subtree.build(0, 0)
    assert hausdorff_subtrees(stub, bare) == pytest.approx(1.0)
    assert hausdorff_subtrees(stub, stub) == 0.0


def test_full_dendrite_image_moves_every_leg():
    full = full_dendrite(2)
    assert full.leg_dict()[2] == Fraction(1, 3)
    image = subtree_image(full, 1)
    assert image.leg_dict()[3] == Fraction(1, 4)
    assert -2 not in image.leg_dict()


def test_subtree_image_round_trip():
    s = Subtree.build(node(-1), node(2), {0: Fraction(1, 2), 2: Fraction(1, 6)})
    assert subtree_image(subtree_image(s, 1), -1) == s


def test_stub_tree_words():
    tree = build_stub_tree(2, 2, (2, 1))
    assert tree.leg_dict() == {0: Fraction(1), 1: Fraction(1, 4)}
    with pytest.raises(PreconditionError):
        build_stub_tree(2, 2, (3, 1))


def test_stub_trees_k2_n2():
    report = verify_stub_tree_separation(2, 2)
    assert report['pairs'] == 6
    assert report['delta_star'] == pytest.approx(0.5)
    assert report['certified']
    assert report['estimate'] == pytest.approx(math.log(2), abs=1e-12)


def test_stub_trees_k3_n3():
    report = verify_stub_tree_separation(3, 3, keep_pairs=True)
    assert report['count'] == 27
    assert report['pairs'] == 351
    assert len(report['pair_table']) == 351
    assert report['delta_star'] >= 1 / 6
    assert report['certified']


def test_stub_tree_count_cap():
    with pytest.raises(PreconditionError):
        verify_stub_tree_separation(5, 3)


def test_full_cone_symbolic_step():
    code = FullConeCode.from_selection(2, [(0, 0), (1, 2)])
    assert full_cone_code(full_cone_step(code, 1)) == shift_step(full_cone_code(code), -1)
    assert full_cone_encode(full_cone_decode(code, 3), 2, 3) == code


def test_full_cone_all_tail():
    code = FullConeCode.from_selection(2, [(0, 0)], tail="all", window=1)
    assert code.selected(0, 0) and not code.selected(1, 0)
    assert code.selected(0, 5)
    with pytest.raises(PreconditionError):
        FullConeCode.from_selection(2, [(0, 0)], tail="all")


def test_full_cone_conjugacy():
    report = full_cone_conjugacy_check(r=2, window=3, samples=100, geometric_pairs=10, seed=3)
    assert report['all_passed'], report
    assert report['delta_geom'] > 0
    assert report['bijective'] and report['exhaustive_window'] == 1
    assert report['separation_pairs'] == 64 * 63 // 2


def test_window_word_reads_bits_per_index():
    code = FullConeCode(2, frozenset({(1, -1), (0, 1)}))
    assert window_word(code, 1) == ((0, 1), (0, 0), (1, 0))


@pytest.mark.parametrize('r, window', [(1, 2), (2, 1)])
def test_full_cone_coding_is_a_bijection_on_the_window(r, window):
    codes = enumerate_full_cones(r, window)
    assert len(codes) == 2 ** (r * (2 * window + 1))
    assert len(set(codes)) == len(codes)
    report = full_cone_bijection_check(r, window)
    assert report['injective'] and report['surjective'] and report['bijective']
    assert report['separation_pairs'] == len(codes) * (len(codes) - 1) // 2
    assert report['separated']
    assert report['min_pair_distance'] >= float(geometric_separation(r, window)) > 0


def test_full_cone_bijection_check_limits_enumeration():
    with pytest.raises(PreconditionError):
        full_cone_bijection_check(3, 3)


def test_geometric_separation_positive():
    assert geometric_separation(2, 3) > 0
    assert np.isfinite(float(geometric_separation(3, 2)))

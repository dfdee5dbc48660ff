import numpy as np
import pytest

import structmv as sm
from structmv import bilinear, kernels, multilevel, oracle
from util import SINGLE_LEVEL, gaussian, random_instance, rel_err


def _bccb(a, b, c, d):
    return sm.MultilevelRep((
        sm.CirculantRep(2, [a, b]), sm.CirculantRep(2, [c, d])
    ))


def test_param_vector_outer_product():
    m = _bccb(1, 2, 3, 4)
    np.testing.assert_allclose(multilevel.param_vector(m), [3, 4, 6, 8])


def test_param_vector_single_level_unchanged():
    rep = sm.ToeplitzRep(3, [1, 2, 3, 4, 5])
    m = sm.MultilevelRep((rep,))
    np.testing.assert_array_equal(multilevel.param_vector(m), rep.param)


def test_param_vector_all_ones():
    m = sm.MultilevelRep((
        sm.CirculantRep(2, [1, 1]), sm.HankelRep(2, [1, 1, 1])
    ))
    np.testing.assert_allclose(multilevel.param_vector(m), np.ones(6))


def test_param_vector_length_is_product_of_param_dims():
    rng = np.random.default_rng(0)
    m = sm.MultilevelRep((
        random_instance("toeplitz_plus_hankel", 3, rng),
        random_instance("circulant", 2, rng),
    ))
    assert len(multilevel.param_vector(m)) == sm.param_dim(m) == 9 * 2


def test_program_counts():
    assert multilevel.multilevel_program(_bccb(1, 2, 3, 4)).count == 4
    m = sm.MultilevelRep((
        sm.CirculantRep(2, [1, 2]),
        sm.ToeplitzRep(2, [1, 2, 3]),
        sm.SymmetricRep(2, [1, 2, 3]),
    ))
    assert multilevel.multilevel_program(m).count == 18


def test_toeplitz_head_count_multiplies_any_tail():
    rng = np.random.default_rng(1)
    for tail_structure in ("circulant", "symmetric", "sparse"):
        tail = random_instance(tail_structure, 3, rng)
        m = sm.MultilevelRep((sm.ToeplitzRep(3, gaussian(rng, 5)), tail))
        assert (multilevel.multilevel_program(m).count
                == 5 * sm.param_dim(tail))


def test_worked_two_level_example():
    m = _bccb(1, 2, 3, 4)
    out, count = multilevel.multilevel_matvec_direct(m, [1, 0, 0, 0])
    np.testing.assert_allclose(out, [3, 4, 6, 8], atol=1e-12)
    assert count == 4


def test_identity_levels_give_identity():
    m = sm.MultilevelRep((
        sm.CirculantRep(2, [1, 0]),
        sm.CirculantRep(3, [1, 0, 0]),
    ))
    rng = np.random.default_rng(2)
    v = gaussian(rng, 6)
    out, count = multilevel.multilevel_matvec_direct(m, v)
    assert rel_err(out, v) < 1e-12
    assert count == 6


def test_two_level_hankel():
    rng = np.random.default_rng(3)
    m = sm.MultilevelRep((
        sm.HankelRep(2, gaussian(rng, 3)), sm.HankelRep(2, gaussian(rng, 3))
    ))
    v = gaussian(rng, 4)
    want = oracle.naive_matvec(oracle.dense(m), v)
    out, count = multilevel.multilevel_matvec_direct(m, v)
    assert rel_err(out, want) < 1e-9
    assert count == 9


def test_intermediate_w_values_worked_example():
    w = multilevel.intermediate_w_values(_bccb(1, 2, 3, 4), [1, 0, 0, 0])
    np.testing.assert_allclose(w, [[21, -3], [-7, 1]], atol=1e-12)


def test_intermediate_w_values_zero_vector():
    w = multilevel.intermediate_w_values(_bccb(1, 2, 3, 4), np.zeros(4))
    np.testing.assert_array_equal(w, np.zeros((2, 2)))


def test_intermediate_w_values_closed_forms():
    rng = np.random.default_rng(4)
    for _ in range(10):
        a, b, c, d = gaussian(rng, 4)
        x, y, z, t = gaussian(rng, 4)
        w = multilevel.intermediate_w_values(_bccb(a, b, c, d), [x, y, z, t])
        want = np.array([
            [(a + b) * (c + d) * ((x + y) + (z + t)),
             (a + b) * (c - d) * ((x - y) + (z - t))],
            [(a - b) * (c + d) * ((x + y) - (z + t)),
             (a - b) * (c - d) * ((x - y) - (z - t))],
        ])
        assert rel_err(w, want) < 1e-10


def test_intermediate_w_values_swap_symmetry():
    # identical levels and a swap-symmetric vector leave w symmetric
    rng = np.random.default_rng(5)
    a = gaussian(rng, 2)
    x = gaussian(rng, 2)
    m = sm.MultilevelRep((sm.CirculantRep(2, a), sm.CirculantRep(2, a)))
    w = multilevel.intermediate_w_values(m, np.kron(x, x))
    assert rel_err(w, w.T) < 1e-12


def test_intermediate_w_values_needs_two_levels():
    with pytest.raises(ValueError):
        multilevel.intermediate_w_values(
            sm.MultilevelRep((sm.CirculantRep(2, [1, 2]),)), [1, 2]
        )


def test_direct_rejects_length_mismatch():
    with pytest.raises(ValueError):
        multilevel.multilevel_matvec_direct(_bccb(1, 2, 3, 4), [1, 2, 3])


@pytest.mark.parametrize("head", SINGLE_LEVEL)
@pytest.mark.parametrize("tail", SINGLE_LEVEL)
def test_all_head_tail_pairs_agree(head, tail):
    # 20 random instances per pair across the order grid
    rng = np.random.default_rng(abs(hash((head, tail))) % 2**32)
    for n1, n2 in [(2, 2), (2, 3), (3, 2), (3, 3)]:
        for _ in range(5):
            m = sm.MultilevelRep((
                random_instance(head, n1, rng), random_instance(tail, n2, rng)
            ))
            v = gaussian(rng, n1 * n2)
            want = oracle.naive_matvec(oracle.dense(m), v)
            program = multilevel.multilevel_program(m)
            got, count = bilinear.apply(program, multilevel.param_vector(m), v)
            direct, dcount = multilevel.multilevel_matvec_direct(m, v)
            assert rel_err(got, want) < 1e-9
            assert rel_err(direct, got) < 1e-12
            assert count == dcount == sm.param_dim(m)


@pytest.mark.parametrize("head", SINGLE_LEVEL)
def test_three_level_every_head(head):
    rng = np.random.default_rng(abs(hash(head)) % 2**32)
    tails = [("toeplitz", "symmetric"), ("hankel", "circulant")]
    for names in tails:
        for orders in [(2, 2, 2), (3, 2, 2), (2, 3, 2)]:
            m = sm.MultilevelRep(tuple(
                random_instance(s, n, rng)
                for s, n in zip((head,) + names, orders)
            ))
            v = gaussian(rng, sm.order(m))
            want = oracle.naive_matvec(oracle.dense(m), v)
            got, count = bilinear.apply(
                multilevel.multilevel_program(m), multilevel.param_vector(m), v
            )
            direct, dcount = multilevel.multilevel_matvec_direct(m, v)
            assert rel_err(got, want) < 1e-9
            assert rel_err(direct, got) < 1e-12
            assert count == dcount == sm.param_dim(m)


def test_tph_level_uses_gauge_fixed_coordinates():
    rng = np.random.default_rng(7)
    level = random_instance("toeplitz_plus_hankel", 2, rng)
    p = multilevel.level_program(level)
    assert p.d_param == 5  # 4n-3 coordinates, not the raw 4n-2
    got, count = bilinear.apply(p, multilevel.level_params(level), gaussian(rng, 2))
    assert count == 5


def test_single_level_multilevel_direct_matches_kernels():
    rng = np.random.default_rng(8)
    rep = random_instance("symmetric", 5, rng)
    v = gaussian(rng, 5)
    out, count = multilevel.multilevel_matvec_direct(
        sm.MultilevelRep((rep,)), v
    )
    want, wcount = kernels.direct_matvec(rep, v)
    np.testing.assert_array_equal(out, want)
    assert count == wcount == 15

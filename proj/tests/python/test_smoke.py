import json

import pytest

import twistfactor as tf


def test_n35_counts_and_quadruple():
    assert tf.count_points(1, 1, 5, 7) == (32, 45)
    q = tf.quadruple_from_traces(5, 7, -3, 3, "affine")
    assert (q["e"], q["e_hat"], q["e_tilde"], q["e_bar"]) == (32, 20, 80, 8)
    assert tf.factor_affine_pair(35, 32, 8) == (5, 7, -3, 3)
    assert tf.factor_projective_pair(35, 45, 15)[:2] == (5, 7)


def test_big_integers_cross_the_boundary():
    p = 2**89 - 1
    assert tf.is_prime(p)
    assert tf.factor(p * 9) == [(3, 2), (p, 1)]
    assert tf.fermat_factor(59 * 101, 10) == (101, 59, 3)
    assert tf.fermat_factor(59 * 101, 2) is None


def test_lll_identity_and_shortest_vector():
    assert tf.lll_reduce([[1, 0], [0, 1]]) == [[1, 0], [0, 1]]
    reduced = tf.lll_reduce([[1, 1, 1], [-1, 0, 2], [3, 5, 6]])
    assert sum(x * x for x in reduced[0]) <= 2


def test_errors_carry_codes():
    with pytest.raises(tf.TwistFactorError) as info:
        tf.factor_affine_pair(35, 32, 32)
    assert info.value.code == "all-hypotheses-failed"
    with pytest.raises(TypeError):
        tf.is_prime(True)


def test_malleability_on_generated_instance():
    inst = tf.random_instance(20, 4)
    n = int(inst["n"])
    report = tf.malleability_attack(n, int(inst["counts"]["affine"]))
    assert report["outcome"] == "factored"
    assert int(report["p"]) * int(report["q"]) == n
    assert {int(report["p"]), int(report["q"])} == {int(inst["p"]), int(inst["q"])}


def test_cli_in_process():
    code, out, err = tf.run_cli(["fermat", "--n", "5959"])
    assert code == 0 and err == ""
    assert json.loads(out)["p"] == "59"
    assert tf.run_cli(["game-sim", "--scenario", "game0", "--bits", "16"])[0] == 2
    assert tf.run_cli(["nope"])[0] == 1

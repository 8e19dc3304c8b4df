"""String solver: inertia counts against the dense pencil oracle.

Core claims:
    - counts at x = 0 are (0, 1): the Dirichlet pencil is positive
      definite, the Neumann zero mode is included
    - a single atom has the closed-form Dirichlet eigenvalue (1/l0 + 1/l1)/m
    - inertia counts equal dense generalized-eigensolve counts
    - the uniform string reproduces the continuum counts at x = 100
    - Dirichlet-Neumann gap stays in {0, 1, 2}; counts are monotone and
      saturate at n
    - exact mass and geometric scaling identities of the pencil
    - the four-term bracketing chain holds on sampled trees
"""
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cantorstring import (
    StieltjesString,
    atomize,
    build_cells,
    check_bracketing,
    count_dirichlet,
    count_neumann,
    counting_curve,
    dense_count,
    dense_eigenvalues,
    eigenvalue,
    sample_tree,
)
from cantorstring.stieltjes import export_curve_csv, export_string_txt
from cantorstring.tree import StopRule


def random_string(seed: int, max_atoms: int = 200) -> StieltjesString:
    rng = random.Random(seed)
    n = rng.randint(1, max_atoms)
    pos = sorted(rng.uniform(0.01, 0.99) for _ in range(n))
    mas = [10 ** rng.uniform(-3, 0) for _ in range(n)]
    return StieltjesString((0.0, 1.0), pos, mas)


class TestBasics:
    def test_counts_at_zero(self):
        s = random_string(5)
        assert count_dirichlet(s, 0.0) == 0
        assert count_neumann(s, 0.0) == 1

    def test_single_atom_closed_form(self):
        m = 0.7
        s = StieltjesString((0.0, 1.0), [0.5], [m])
        lam = (2.0 + 2.0) / m
        assert count_dirichlet(s, lam * (1 - 1e-9)) == 0
        assert count_dirichlet(s, lam * (1 + 1e-9)) == 1
        assert eigenvalue(s, 1, "dirichlet") == pytest.approx(lam, rel=1e-9)

    def test_single_atom_neumann(self):
        s = StieltjesString((0.0, 1.0), [0.3], [1.0])
        for x in (0.0, 1.0, 1e6):
            assert count_neumann(s, x) == 1

    def test_negative_shift_rejected(self):
        s = random_string(1)
        with pytest.raises(ValueError):
            count_dirichlet(s, -1.0)
        with pytest.raises(ValueError):
            count_neumann(s, -0.5)

    def test_atoms_outside_interval_rejected(self):
        with pytest.raises(ValueError):
            StieltjesString((0.0, 1.0), [0.0, 0.5], [1.0, 1.0])
        with pytest.raises(ValueError):
            StieltjesString((0.0, 1.0), [0.5], [-1.0])

    def test_duplicate_atoms_merged(self):
        s = StieltjesString((0.0, 1.0), [0.5, 0.5, 0.7], [0.3, 0.2, 0.5])
        assert s.n == 2
        assert s.masses.tolist() == [0.5, 0.5]


class TestUniformString:
    def test_continuum_counts(self):
        # continuum Dirichlet (k pi)^2 <= 100 for k = 1..3; Neumann adds the zero mode
        u = StieltjesString.uniform(100)
        assert count_dirichlet(u, 100.0) == 3
        assert count_neumann(u, 100.0) == 4

    def test_against_dense(self):
        u = StieltjesString.uniform(100)
        for x in (1.0, 10.0, 100.0, 1e4):
            assert count_dirichlet(u, x) == dense_count(u, x, "dirichlet")
            assert count_neumann(u, x) == dense_count(u, x, "neumann")

    def test_first_eigenvalue_near_pi_squared(self):
        u = StieltjesString.uniform(200)
        lam = eigenvalue(u, 1, "dirichlet")
        assert lam == pytest.approx(math.pi ** 2, rel=5e-3)
        assert lam == pytest.approx(dense_eigenvalues(u, "dirichlet")[0], rel=1e-8)


class TestDenseOracle:
    def test_small_strings(self):
        rng = random.Random(99)
        for seed in range(20):
            s = random_string(seed, max_atoms=3)
            x = 10 ** rng.uniform(-1, 7)
            assert count_dirichlet(s, x) == dense_count(s, x, "dirichlet")
            assert count_neumann(s, x) == dense_count(s, x, "neumann")

    def test_medium_strings(self):
        rng = random.Random(4)
        for seed in range(40):
            s = random_string(seed)
            for _ in range(5):
                x = 10 ** rng.uniform(-2, 9)
                assert count_dirichlet(s, x) == dense_count(s, x, "dirichlet")
                assert count_neumann(s, x) == dense_count(s, x, "neumann")

    def test_single_atom_dense_path(self):
        s = StieltjesString((0.0, 1.0), [0.25], [2.0])
        evd = dense_eigenvalues(s, "dirichlet")
        assert evd == pytest.approx([(4.0 + 4.0 / 3.0) / 2.0])
        assert dense_eigenvalues(s, "neumann") == pytest.approx([0.0])


class TestEigenvalue:
    def test_neumann_zero_mode(self):
        s = random_string(12)
        assert eigenvalue(s, 0, "neumann") == 0.0

    def test_matches_dense_spectrum(self):
        s = random_string(21, max_atoms=40)
        evd = dense_eigenvalues(s, "dirichlet")
        for k in (1, s.n // 2 + 1, s.n):
            assert eigenvalue(s, k, "dirichlet") == pytest.approx(evd[k - 1], rel=1e-8)
        evn = dense_eigenvalues(s, "neumann")
        assert eigenvalue(s, s.n - 1, "neumann") == pytest.approx(evn[-1], rel=1e-8)

    def test_index_range(self):
        s = random_string(3, max_atoms=10)
        with pytest.raises(ValueError):
            eigenvalue(s, 0, "dirichlet")
        with pytest.raises(ValueError):
            eigenvalue(s, s.n + 1, "dirichlet")
        with pytest.raises(ValueError):
            eigenvalue(s, s.n, "neumann")


class TestCurve:
    def test_zero_grid(self):
        s = random_string(8)
        (sample,) = counting_curve(s, [0.0])
        assert (sample.x, sample.count_dirichlet, sample.count_neumann) == (0.0, 0, 1)

    def test_monotone_and_saturating(self):
        s = random_string(15, max_atoms=60)
        xs = np.geomspace(1e-2, 1e10, 40)
        samples = counting_curve(s, xs)
        for a, b in zip(samples, samples[1:]):
            assert b.count_dirichlet >= a.count_dirichlet
            assert b.count_neumann >= a.count_neumann
        assert samples[-1].count_dirichlet == s.n
        assert samples[-1].count_neumann == s.n

    def test_matches_single_shots(self):
        rng = random.Random(0)
        for seed in range(10):
            s = random_string(seed, max_atoms=50)
            xs = sorted(10 ** rng.uniform(-2, 8) for _ in range(10))
            samples = counting_curve(s, xs)
            for sample in samples:
                assert sample.count_dirichlet == count_dirichlet(s, sample.x)
                assert sample.count_neumann == count_neumann(s, sample.x)


class TestInvariants:
    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000), st.floats(0.0, 1e9))
    def test_gap_bound(self, seed, x):
        s = random_string(seed % 500, max_atoms=30)
        nd, nn = count_dirichlet(s, x), count_neumann(s, x)
        assert 0 <= nn - nd <= 2

    def test_mass_scaling_exact(self):
        # scaling masses by a power of two shifts the argument bit-exactly
        s = random_string(33, max_atoms=50)
        for factor in (2.0, 0.5, 8.0):
            scaled = StieltjesString(s.interval, s.positions, s.masses * factor)
            for x in (0.7, 13.0, 4.5e3):
                assert count_dirichlet(scaled, x) == count_dirichlet(s, factor * x)
                assert count_neumann(scaled, x) == count_neumann(s, factor * x)

    def test_geometric_scaling_exact(self):
        # halving the geometry doubles the spectrum: N_mapped(x) = N(x/2)
        s = StieltjesString((0.0, 1.0), [0.125, 0.25, 0.625], [0.25, 0.5, 0.25])
        mapped = StieltjesString((0.0, 0.5), s.positions * 0.5, s.masses)
        for x in (1.0, 64.0, 1e4):
            assert count_dirichlet(mapped, x) == count_dirichlet(s, 0.5 * x)
            assert count_neumann(mapped, x) == count_neumann(s, 0.5 * x)


class TestBracketing:
    def test_trivial_at_zero(self, third_fifth):
        tree = sample_tree(third_fifth, StopRule.depth(3), 2)
        assert check_bracketing(tree, 3, 0.0)

    def test_random_trees(self, third_fifth):
        for seed in range(25):
            tree = sample_tree(third_fifth, StopRule.depth(5), seed)
            for x in (10.0, 1e3, 1e5):
                assert check_bracketing(tree, 5, x)

    def test_self_similar_outer_slack(self, middle_third):
        # single letter: the outer terms differ by at most 2 per child
        tree = sample_tree(middle_third, StopRule.depth(6), 0)
        whole = StieltjesString.from_measure(atomize(build_cells(tree, 6)))
        letter = middle_third.letters[0]
        for x in (10.0, 1e3, 1e5):
            assert check_bracketing(tree, 6, x)
            sum_d = sum_n = 0
            for i, (s, w) in enumerate(zip(letter.maps, letter.weights), start=1):
                piece = StieltjesString.from_measure(
                    atomize(build_cells(tree.subtree((i,)), 5)))
                sum_d += count_dirichlet(piece, s.ratio * w * x)
                sum_n += count_neumann(piece, s.ratio * w * x)
            assert sum_n - sum_d <= 2 * letter.n_maps

    def test_requires_positive_depth(self, third_fifth):
        tree = sample_tree(third_fifth, StopRule.depth(2), 2)
        with pytest.raises(ValueError):
            check_bracketing(tree, 0, 1.0)


def test_curve_csv(tmp_path):
    s = random_string(2, max_atoms=20)
    samples = counting_curve(s, np.geomspace(1, 1e4, 8))
    path = tmp_path / "curve.csv"
    export_curve_csv(samples, path, header="# h")
    lines = path.read_text().splitlines()
    assert lines[:2] == ["# h", "x,N_D,N_N"]
    assert len(lines) == 10


def test_string_txt_dump(tmp_path):
    s = random_string(6, max_atoms=10)
    path = tmp_path / "string.txt"
    export_string_txt(s, path, header="# h")
    rows = [line.split() for line in path.read_text().splitlines()[1:]]
    positions = [float(p) for p, _ in rows]
    masses = [float(m) for _, m in rows]
    assert positions == s.positions.tolist()
    assert masses == s.masses.tolist()

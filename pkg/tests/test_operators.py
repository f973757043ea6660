import json

import numpy as np
import pytest

from omega_index import (
    ConfigParse,
    DimensionMismatch,
    InvalidParameter,
    NonHermitianInput,
    OperatorPair,
    PairSpec,
    PerturbationSpec,
    bott_point,
    build_commuting_grid,
    build_harmonic,
    build_oscillator_analytic_q,
    build_pair,
    grid_points,
    load_matrix,
    load_pair,
    operator_norm,
    perturb,
    save_matrix,
    sphere_map,
)


def ladder(dim):
    a = np.zeros((dim, dim), dtype=complex)
    for n in range(dim - 1):
        a[n, n + 1] = np.sqrt(n + 1)
    return a


# ---------------------------------------------------------------- harmonic


def test_harmonic_matches_ladder_construction():
    lam, dim = 0.01, 16
    pair = build_harmonic(lam, dim)
    a = ladder(dim)
    x = (a + a.conj().T) / np.sqrt(2)
    p = 1j * (a.conj().T - a) / np.sqrt(2)
    assert np.allclose(pair.a, np.sqrt(lam) * x, atol=1e-15)
    assert np.allclose(pair.b, np.sqrt(lam) * p, atol=1e-15)


def test_harmonic_superdiagonal_entry():
    pair = build_harmonic(0.01, 8)
    assert pair.a[0, 1] == pytest.approx(0.1 * np.sqrt(0.5), abs=1e-15)
    assert pair.b[0, 1] == pytest.approx(-0.1j * np.sqrt(0.5), abs=1e-15)


def test_harmonic_is_exactly_hermitian():
    pair = build_harmonic(0.03, 24)
    assert np.array_equal(pair.a, pair.a.conj().T)
    assert np.array_equal(pair.b, pair.b.conj().T)


@pytest.mark.parametrize("dim", [8, 33, 120])
def test_harmonic_interior_commutator_is_scalar(dim):
    """i[A, B] equals -lam * I away from the last basis row."""
    lam = 0.01
    pair = build_harmonic(lam, dim)
    comm = 1j * (pair.a @ pair.b - pair.b @ pair.a)
    interior = comm[: dim - 1, : dim - 1]
    assert np.max(np.abs(interior + lam * np.eye(dim - 1))) <= 1e-14


def test_harmonic_metadata():
    pair = build_harmonic(0.01, 400)
    assert pair.known_commutator_norm == 0.01
    assert pair.boundary_window == 50
    assert pair.dim == 400
    assert pair.basis_label == "oscillator"
    assert pair.interior == 350


def test_harmonic_small_dim_window_floor():
    assert build_harmonic(0.01, 8).boundary_window == 1


@pytest.mark.parametrize("lam,dim", [(0.0, 64), (-0.1, 64), (0.01, 7), (0.01, 0)])
def test_harmonic_rejects_bad_parameters(lam, dim):
    with pytest.raises(InvalidParameter):
        build_harmonic(lam, dim)


# ---------------------------------------------------------------- grid


def test_grid_points_origin_first():
    pts = grid_points(3)
    assert pts[0] == (0, 0)
    assert pts[1:5] == [(-1, 0), (0, -1), (0, 1), (1, 0)]


def test_grid_points_sorted_by_shell():
    pts = grid_points(6)
    shells = [n * n + m * m for n, m in pts]
    assert shells == sorted(shells)


def test_grid_diagonals_follow_point_order():
    pair = build_commuting_grid(2)
    assert np.array_equal(pair.a, np.diag(np.diag(pair.a)))
    assert np.diag(pair.a)[:5].tolist() == [0, -1, 0, 0, 1]
    assert np.diag(pair.b)[:5].tolist() == [0, 0, -1, 1, 0]


def test_grid_scale_multiplies_entries():
    pair = build_commuting_grid(2, scale=0.5)
    assert np.diag(pair.a)[1] == -0.5
    assert np.diag(pair.b)[2] == -0.5


def test_grid_commutes_exactly():
    pair = build_commuting_grid(5)
    comm = pair.a @ pair.b - pair.b @ pair.a
    assert np.count_nonzero(comm) == 0
    assert pair.known_commutator_norm == 0.0


def test_grid_dimensions_and_window():
    pair = build_commuting_grid(10)
    assert pair.dim == 21 * 21
    outside = sum(1 for n, m in grid_points(10) if n * n + m * m > 100)
    assert pair.boundary_window == outside == 124
    assert pair.interior == 441 - 124


def test_grid_rejects_radius_zero():
    with pytest.raises(InvalidParameter):
        build_commuting_grid(0)


# ---------------------------------------------------------------- analytic q


def test_analytic_q_shape_and_scalar_entries():
    lam, cut = 0.01, 100
    q = build_oscillator_analytic_q(lam, cut)
    assert q.shape == (200, 200)
    assert q[0, 0] == 1.0
    assert q[-1, -1] == pytest.approx(2 * cut * lam / (2 * cut * lam + 1), rel=1e-12)


def test_analytic_q_first_coupling_entry():
    q = build_oscillator_analytic_q(0.01, 10)
    assert q[1, 2] == pytest.approx(np.sqrt(0.01) / 1.02, rel=1e-12)


def test_analytic_q_is_hermitian_and_sparse():
    q = build_oscillator_analytic_q(0.05, 40)
    assert np.array_equal(q, q.conj().T)
    assert np.max(np.count_nonzero(q, axis=1)) <= 2


def test_analytic_q_block_determinant_identity():
    """Each 2x2 block has det p(1-p) style structure: 1 - trace matches the
    closed form 2*lam / ((2n lam + 1)(2(n-1) lam + 1))."""
    lam, cut = 0.01, 30
    q = build_oscillator_analytic_q(lam, cut)
    for n in range(1, cut):
        i, j = 2 * n - 1, 2 * n
        trace = q[i, i].real + q[j, j].real
        expected = 2 * lam / ((2 * n * lam + 1) * (2 * (n - 1) * lam + 1))
        assert 1 - trace == pytest.approx(expected, rel=1e-12)


def test_analytic_q_rejects_bad_parameters():
    with pytest.raises(InvalidParameter):
        build_oscillator_analytic_q(0.01, 1)
    with pytest.raises(InvalidParameter):
        build_oscillator_analytic_q(0.0, 10)


# ---------------------------------------------------------------- pair container


def test_operator_pair_rejects_non_hermitian():
    with pytest.raises(NonHermitianInput):
        OperatorPair(
            a=np.array([[0, 1], [0, 0]], dtype=complex),
            b=np.zeros((2, 2), dtype=complex),
            dim=2,
            basis_label="bad",
            known_commutator_norm=None,
            boundary_window=0,
        )


def test_operator_pair_rejects_wide_window():
    with pytest.raises(InvalidParameter):
        OperatorPair(
            a=np.zeros((4, 4), dtype=complex),
            b=np.zeros((4, 4), dtype=complex),
            dim=4,
            basis_label="bad",
            known_commutator_norm=None,
            boundary_window=2,
        )


def test_build_pair_dispatch():
    spec = PairSpec(builder="harmonic", lam=0.02, dim=16)
    pair = build_pair(spec)
    assert pair.known_commutator_norm == 0.02
    grid = build_pair(PairSpec(builder="commuting_grid", grid_radius=2))
    assert grid.dim == 25
    with pytest.raises(InvalidParameter):
        build_pair(PairSpec(builder="nonsense"))


# ---------------------------------------------------------------- perturbations


def test_perturb_zero_magnitude_is_identity():
    pair = build_harmonic(0.01, 16)
    out = perturb(pair, "a", "scalar_shift", 0.0)
    assert out is pair


def test_scalar_shift_preserves_commutator():
    pair = build_harmonic(0.01, 32)
    shifted = perturb(pair, "a", "scalar_shift", 0.2)
    assert np.allclose(shifted.a, pair.a + 0.2 * np.eye(32), atol=1e-15)
    orig = pair.a @ pair.b - pair.b @ pair.a
    new = shifted.a @ shifted.b - shifted.b @ shifted.a
    assert np.max(np.abs(new - orig)) <= 1e-13
    assert shifted.known_commutator_norm == pair.known_commutator_norm


def test_diagonal_decay_entries():
    pair = build_harmonic(0.01, 8)
    out = perturb(pair, "b", "diagonal_decay", 0.1)
    added = np.diag(out.b - pair.b)
    expected = 0.1 / (np.arange(8) + 1)
    assert np.allclose(added, expected, atol=1e-15)
    assert out.known_commutator_norm is None


def test_random_hermitian_is_seeded_and_normalized():
    pair = build_harmonic(0.01, 24)
    one = perturb(pair, "a", "random_hermitian", 0.05, seed=9)
    two = perturb(pair, "a", "random_hermitian", 0.05, seed=9)
    assert np.array_equal(one.a, two.a)
    delta = (one.a - pair.a) / 0.05
    assert operator_norm(delta) == pytest.approx(1.0, rel=1e-9)
    assert np.allclose(delta, delta.conj().T, atol=1e-14)
    other = perturb(pair, "a", "random_hermitian", 0.05, seed=10)
    assert not np.array_equal(one.a, other.a)


def test_perturb_target_b_only_touches_b():
    pair = build_harmonic(0.01, 16)
    out = perturb(pair, "b", "scalar_shift", 0.3)
    assert np.array_equal(out.a, pair.a)
    assert not np.array_equal(out.b, pair.b)


def test_perturb_rejects_bad_arguments():
    pair = build_harmonic(0.01, 16)
    with pytest.raises(InvalidParameter):
        perturb(pair, "c", "scalar_shift", 0.1)
    with pytest.raises(InvalidParameter):
        perturb(pair, "a", "unknown_kind", 0.1)
    with pytest.raises(InvalidParameter):
        perturb(pair, "a", "scalar_shift", -0.5)


def test_build_pair_applies_perturbations_in_order():
    spec = PairSpec(
        builder="harmonic",
        lam=0.01,
        dim=16,
        perturbations=(
            PerturbationSpec(target="a", kind="scalar_shift", magnitude=0.1),
            PerturbationSpec(target="a", kind="scalar_shift", magnitude=0.2),
        ),
    )
    pair = build_pair(spec)
    base = build_harmonic(0.01, 16)
    assert np.allclose(pair.a, base.a + 0.3 * np.eye(16), atol=1e-15)


# ---------------------------------------------------------------- bott / sphere


def test_bott_point_origin():
    p = bott_point(0.0)
    assert np.array_equal(p, np.array([[1, 0], [0, 0]], dtype=complex))


def test_bott_point_example_is_projection():
    p = bott_point(1 + 2j)
    assert operator_norm(p @ p - p) <= 1e-15
    assert np.trace(p).real == pytest.approx(1.0, abs=1e-15)


def test_bott_point_random_projections():
    rng = np.random.default_rng(17)
    for _ in range(100):
        z = complex(rng.standard_normal() * 3, rng.standard_normal() * 3)
        p = bott_point(z)
        assert operator_norm(p @ p - p) <= 1e-14
        assert operator_norm(p - p.conj().T) <= 1e-14


def test_sphere_map_zero_pair():
    pair = OperatorPair(
        a=np.zeros((1, 1), dtype=complex),
        b=np.zeros((1, 1), dtype=complex),
        dim=1,
        basis_label="zero",
        known_commutator_norm=0.0,
        boundary_window=0,
    )
    s = sphere_map(pair)
    assert s.h1[0, 0] == pytest.approx(0.5, abs=1e-15)
    assert s.h2[0, 0] == 0.0
    assert s.relation_defect == pytest.approx(0.25, abs=1e-12)
    assert s.nonhermitian_defect == 0.0


def test_sphere_map_harmonic_defects():
    pair = build_harmonic(0.01, 100)
    s = sphere_map(pair)
    assert s.relation_defect <= 0.3
    assert s.nonhermitian_defect <= 0.2
    assert s.h1.shape == (100, 100)


# ---------------------------------------------------------------- file io


def test_save_load_roundtrip(tmp_path):
    rng = np.random.default_rng(2)
    g = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    m = (g + g.conj().T) / 2
    path = tmp_path / "m.json"
    save_matrix(m, path)
    assert np.array_equal(load_matrix(path), m)


def test_save_writes_format_tag(tmp_path):
    path = tmp_path / "m.json"
    save_matrix(np.eye(2, dtype=complex), path)
    doc = json.loads(path.read_text())
    assert doc["format"] == "dense-complex-v1"
    assert doc["entries"][0][0] == [1.0, 0.0]


def test_load_pair_from_literal_files(tmp_path):
    pa = tmp_path / "a.json"
    pb = tmp_path / "b.json"
    pa.write_text('{"format": "dense-complex-v1", "entries": [[[2, 0]]]}')
    pb.write_text('{"format": "dense-complex-v1", "entries": [[[3, 0]]]}')
    pair = load_pair(pa, pb)
    assert pair.a[0, 0] == 2.0
    assert pair.b[0, 0] == 3.0
    assert pair.dim == 1
    assert pair.known_commutator_norm is None
    assert pair.boundary_window == 0


def test_load_pair_default_window(tmp_path):
    m = np.zeros((16, 16), dtype=complex)
    pa, pb = tmp_path / "a.json", tmp_path / "b.json"
    save_matrix(m, pa)
    save_matrix(m, pb)
    assert load_pair(pa, pb).boundary_window == 2


def test_load_matrix_rejects_bad_documents(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ConfigParse):
        load_matrix(path)
    path.write_text('{"format": "other", "entries": [[[1, 0]]]}')
    with pytest.raises(ConfigParse):
        load_matrix(path)
    path.write_text('{"format": "dense-complex-v1", "entries": [[[1, 0], [0, 0]]]}')
    with pytest.raises(DimensionMismatch):
        load_matrix(path)
    with pytest.raises(ConfigParse):
        load_matrix(tmp_path / "missing.json")


def test_load_pair_rejects_non_hermitian(tmp_path):
    pa, pb = tmp_path / "a.json", tmp_path / "b.json"
    pa.write_text('{"format": "dense-complex-v1", "entries": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]]}')
    pb.write_text('{"format": "dense-complex-v1", "entries": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]}')
    with pytest.raises(NonHermitianInput):
        load_pair(pa, pb)


def test_load_pair_rejects_shape_mismatch(tmp_path):
    pa, pb = tmp_path / "a.json", tmp_path / "b.json"
    save_matrix(np.zeros((2, 2), dtype=complex), pa)
    save_matrix(np.zeros((3, 3), dtype=complex), pb)
    with pytest.raises(DimensionMismatch):
        load_pair(pa, pb)

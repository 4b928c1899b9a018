import numpy as np
import pytest
import scipy.linalg

from qvdp.errors import DimensionMismatchError, DisplacementTruncationWarning
from qvdp.fock import (
    SIGMA_PLUS,
    DensityMatrix,
    FockTruncation,
    Operator,
    SpaceTag,
    coherent_state,
    displaced_thermal_state,
    displacement_op,
    fock_state,
    ladder_ops,
    tensor_with_spin,
    thermal_populations,
    vacuum_state,
)

TR = FockTruncation(30)


def test_ladder_action_on_fock_states():
    a, a_dag, n = ladder_ops(TR)
    e1 = np.zeros(TR.dim)
    e1[1] = 1.0
    out = a.mat @ e1
    assert abs(out[0] - 1.0) < 1e-15  # a|1> = |0>
    e0 = np.zeros(TR.dim)
    e0[0] = 1.0
    assert np.all(a.mat @ e0 == 0)  # vacuum annihilates
    assert abs(a.mat[1, 2] - np.sqrt(2)) < 1e-15  # <1|a|2> = sqrt(2)


def test_ladder_adjoint_and_commutator():
    a, a_dag, n = ladder_ops(TR)
    np.testing.assert_array_equal(a_dag.mat, a.mat.conj().T)
    comm = a.mat @ a_dag.mat - a_dag.mat @ a.mat
    # identity except the truncation artifact on the top level
    np.testing.assert_allclose(comm[:-1, :-1], np.eye(TR.dim - 1), atol=1e-13)
    np.testing.assert_allclose(n.mat, a_dag.mat @ a.mat, atol=0)


def test_displacement_zero_is_identity():
    d = displacement_op(TR, 0.0)
    np.testing.assert_array_equal(d.mat, np.eye(TR.dim))


def test_displacement_vacuum_overlap():
    for alpha in (0.5, 1.0, 1.5j, 1.0 + 0.5j):
        d = displacement_op(TR, alpha)
        assert abs(d.mat[0, 0] - np.exp(-abs(alpha) ** 2 / 2)) < 1e-12


def test_displacement_matches_matrix_exponential():
    # scaling-and-squaring exponential of (a^+ - a) as the independent oracle
    a, a_dag, _ = ladder_ops(TR)
    oracle = scipy.linalg.expm(a_dag.mat - a.mat)
    d = displacement_op(TR, 1.0)
    np.testing.assert_allclose(d.mat[:, 0], oracle[:, 0], atol=1e-8)
    # full lower block agrees too (top corner is pure truncation mismatch)
    half = TR.dim // 2
    np.testing.assert_allclose(d.mat[:half, :half], oracle[:half, :half], atol=1e-8)


@pytest.mark.parametrize("alpha", [0.3, 1.0, 0.6 + 0.7j])
def test_displacement_inverse_on_lower_levels(alpha):
    d_plus = displacement_op(TR, alpha)
    d_minus = displacement_op(TR, -alpha)
    prod = d_plus.mat @ d_minus.mat
    half = TR.n_max // 2
    np.testing.assert_allclose(prod[:half, :half], np.eye(half), atol=1e-6)


def test_displacement_inverse_large_alpha_needs_headroom():
    # At alpha = 2 a mid-level Fock state genuinely spills past level 30
    # (measured deviation 0.18 on the half block), so the inverse identity
    # only holds on blocks with enough truncation headroom.
    import warnings

    tr = FockTruncation(40)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        prod = displacement_op(tr, 2.0).mat @ displacement_op(tr, -2.0).mat
    np.testing.assert_allclose(prod[:8, :8], np.eye(8), atol=1e-6)


def test_displacement_truncation_flag():
    with pytest.warns(DisplacementTruncationWarning):
        displacement_op(FockTruncation(8), 2.5)


def test_thermal_populations_geometric():
    p = thermal_populations(TR, 1.5)
    ratio = p[1:6] / p[:5]
    np.testing.assert_allclose(ratio, 1.5 / 2.5, rtol=1e-12)
    assert abs(p.sum() - 1.0) < 1e-12


def test_displaced_thermal_vacuum_case():
    rho = displaced_thermal_state(TR, 0.0, 0.0)
    expect = np.zeros((TR.dim, TR.dim))
    expect[0, 0] = 1.0
    np.testing.assert_allclose(rho.mat, expect, atol=1e-14)


def test_displaced_thermal_moments():
    rho = displaced_thermal_state(TR, 1.5, 1.0)
    a, _, n = ladder_ops(TR)
    amp = np.trace(rho.mat @ a.mat)
    nbar = np.trace(rho.mat @ n.mat).real
    # truncating the thermal tail at 30 levels shifts the moments by ~1e-4
    assert abs(amp - 1.0) < 1e-4
    assert abs(nbar - 2.5) < 1e-3  # nbar + |alpha|^2
    assert abs(np.trace(rho.mat) - 1.0) < 1e-9


@pytest.mark.parametrize("nbar,alpha", [(0.5, 0.5), (1.5, 1.0), (3.0, 2.0), (3.0, 2.0j)])
def test_displaced_thermal_is_valid_state(nbar, alpha):
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rho = displaced_thermal_state(TR, nbar, alpha)
    rho.validate()  # Hermitian, unit trace, positive


def test_tensor_with_spin_identity():
    eye = Operator(np.eye(TR.dim, dtype=complex), SpaceTag("phonon", TR.n_max))
    joint = tensor_with_spin(eye, np.eye(2))
    assert joint.space == SpaceTag("spin_phonon", TR.n_max)
    np.testing.assert_array_equal(joint.mat, np.eye(2 * TR.dim))


def test_tensor_with_spin_raising_element():
    a, _, _ = ladder_ops(TR)
    joint = tensor_with_spin(a, SIGMA_PLUS)
    # row (up, 0) = dim + 0, column (down, 1) = 1
    assert joint.mat[TR.dim, 1] == 1.0


def test_tensor_trace_factorizes():
    rng = np.random.default_rng(5)
    b = rng.standard_normal((TR.dim, TR.dim)) + 1j * rng.standard_normal((TR.dim, TR.dim))
    s = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    joint = tensor_with_spin(Operator(b, SpaceTag("phonon", TR.n_max)), s)
    assert abs(np.trace(joint.mat) - np.trace(s) * np.trace(b)) < 1e-9


def test_tensor_distributes_over_products():
    rng = np.random.default_rng(11)
    tr = FockTruncation(5)
    space = SpaceTag("phonon", 5)
    for _ in range(3):
        b1, b2 = (
            rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6)) for _ in range(2)
        )
        s1, s2 = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(2))
        left = tensor_with_spin(Operator(b1, space), s1) @ tensor_with_spin(Operator(b2, space), s2)
        right = tensor_with_spin(Operator(b1 @ b2, space), s1 @ s2)
        np.testing.assert_allclose(left.mat, right.mat, atol=1e-12)


def test_tensor_rejects_bad_shapes():
    a, _, _ = ladder_ops(TR)
    with pytest.raises(DimensionMismatchError):
        tensor_with_spin(a, np.eye(3))


def test_density_matrix_rejects_junk():
    space = SpaceTag("phonon", 3)
    bad_herm = np.zeros((4, 4), dtype=complex)
    bad_herm[0, 1] = 1.0
    bad_herm[0, 0] = 1.0
    with pytest.raises(ValueError, match="Hermitian"):
        DensityMatrix(Operator(bad_herm, space))
    bad_trace = np.eye(4, dtype=complex)
    with pytest.raises(ValueError, match="trace"):
        DensityMatrix(Operator(bad_trace, space))
    neg = np.diag([1.5, -0.5, 0.0, 0.0]).astype(complex)
    with pytest.raises(ValueError, match="eigenvalue"):
        DensityMatrix(Operator(neg, space))


def test_space_tag_dimension_consistency():
    with pytest.raises(DimensionMismatchError):
        Operator(np.eye(7, dtype=complex), SpaceTag("phonon", 7))  # dim must be 8


def test_state_constructors():
    assert vacuum_state(TR).mat[0, 0] == 1.0
    assert fock_state(TR, 3).mat[3, 3] == 1.0
    rho = coherent_state(TR, 0.7j)
    a, _, _ = ladder_ops(TR)
    assert abs(np.trace(rho.mat @ a.mat) - 0.7j) < 1e-9

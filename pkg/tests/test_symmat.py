import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

import oracles
from spdgeom import (
    EigenSolverError,
    DimensionMismatchError,
    NotPositiveDefiniteError,
    SelfAdjointMatrix,
    SingularMatrixError,
    SpdMatrix,
    congruence,
    frechet_dexp,
    mat_exp,
    mat_log,
    mat_sqrt,
    random_group_element,
    random_selfadjoint,
    random_spd,
    sym_eig,
    trace_inner,
)

seeds = st.integers(min_value=0, max_value=2**32)
dims = st.integers(min_value=1, max_value=7)
fields = st.sampled_from(["real", "complex"])


def rel(x, y):
    return np.linalg.norm(np.asarray(x) - np.asarray(y)) / max(1.0, np.linalg.norm(y))


# --- SelfAdjointMatrix ---------------------------------------------------

def test_constructor_symmetrizes_exactly():
    m = SelfAdjointMatrix([[1.0, 2.0], [2.0 + 1e-12, 5.0]])
    assert np.array_equal(m.entries, m.entries.T)
    assert m.entries[0, 1] == pytest.approx(2.0 + 5e-13, abs=0)


def test_entries_are_read_only():
    m = SelfAdjointMatrix(np.eye(2))
    with pytest.raises(ValueError):
        m.entries[0, 0] = 3.0


def test_complex_hermitian_field():
    m = SelfAdjointMatrix([[1, 1j], [-1j, 2]])
    assert m.field == "complex"
    assert m.dim == 2
    assert np.all(np.diag(m.entries).imag == 0)


@pytest.mark.parametrize("bad", [np.zeros((2, 3)), np.zeros((0, 0)), [1.0, 2.0]])
def test_rejects_non_square(bad):
    with pytest.raises(DimensionMismatchError):
        SelfAdjointMatrix(bad)


def test_rejects_non_finite():
    with pytest.raises(ValueError):
        SelfAdjointMatrix([[np.nan, 0], [0, 1]])


def test_arithmetic_stays_self_adjoint():
    a = random_selfadjoint(4, "complex", seed=1)
    b = random_selfadjoint(4, "complex", seed=2)
    for c in (a + b, a - b, 2.5 * a, a / 4, -a):
        assert isinstance(c, SelfAdjointMatrix)
        assert np.array_equal(c.entries, c.entries.conj().T)
    with pytest.raises(DimensionMismatchError):
        a + random_selfadjoint(3, seed=0)


# --- sym_eig -------------------------------------------------------------

def test_eig_diagonal():
    lam, q = sym_eig(SelfAdjointMatrix(np.diag([3.0, 1.0])))
    assert np.array_equal(lam, [1.0, 3.0])
    assert np.array_equal(q, [[0.0, 1.0], [1.0, 0.0]])


def test_eig_swap_matrix():
    lam, q = sym_eig(SelfAdjointMatrix([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(lam, [-1.0, 1.0], atol=1e-15)
    s = 1 / math.sqrt(2)
    assert np.allclose(q, [[-s, s], [s, s]], atol=1e-15) or np.allclose(q, [[s, s], [-s, s]], atol=1e-15)


def test_eig_seed_42_matches_bisection():
    s = random_selfadjoint(6, "real", seed=42)
    lam, _ = sym_eig(s)
    assert np.max(np.abs(lam - oracles.bisection_eigenvalues(s.entries))) <= 1e-10


def test_eig_one_by_one():
    lam, q = sym_eig(SelfAdjointMatrix([[-2.5]]))
    assert lam.tolist() == [-2.5] and q.tolist() == [[1.0]]


def test_eig_non_convergence_reports_residual():
    s = random_selfadjoint(6, seed=3)
    with pytest.raises(EigenSolverError) as info:
        sym_eig(s, max_sweeps=1, tol=1e-300)
    assert info.value.residual > 0


@settings(max_examples=40, deadline=None)
@given(dims, fields, seeds)
def test_eig_decomposition(n, fld, seed):
    s = random_selfadjoint(n, fld, seed, norm=3.0)
    lam, q = sym_eig(s)
    scale = np.linalg.norm(s.entries)
    assert np.all(np.diff(lam) >= 0)
    assert np.linalg.norm((q * lam) @ q.conj().T - s.entries) <= 1e-12 * scale
    assert np.linalg.norm(q.conj().T @ q - np.eye(n)) <= 1e-12
    lead = q[np.argmax(np.abs(q), axis=0), np.arange(n)]
    assert np.all(lead.real > 0) and np.all(np.abs(lead.imag) <= 1e-15)
    assert np.max(np.abs(lam - oracles.bisection_eigenvalues(s.entries))) <= 1e-12 * max(1.0, scale)


# --- SpdMatrix -----------------------------------------------------------

def test_spd_rejects_indefinite_and_singular():
    with pytest.raises(NotPositiveDefiniteError):
        SpdMatrix(np.diag([1.0, -1.0]))
    with pytest.raises(NotPositiveDefiniteError):
        SpdMatrix(np.diag([1.0, 0.0]))
    with pytest.raises(NotPositiveDefiniteError):
        SpdMatrix(np.diag([1.0, 1e-13]))
    SpdMatrix(np.diag([1.0, 1e-13]), eps_pd=1e-14)


def test_spd_accessors():
    p = SpdMatrix(np.diag([2.0, 8.0]))
    assert p.det() == pytest.approx(16.0, rel=1e-15)
    assert p.logdet() == pytest.approx(math.log(16.0), rel=1e-15)
    assert p.cond() == pytest.approx(4.0, rel=1e-15)
    assert np.allclose(p.inv().entries, np.diag([0.5, 0.125]), atol=0)
    assert np.allclose(p.power(-0.5).entries, np.diag([2**-0.5, 8**-0.5]), rtol=1e-15)


@settings(max_examples=30, deadline=None)
@given(dims, fields, seeds)
def test_spd_det_matches_lu(n, fld, seed):
    p = random_spd(n, fld, seed)
    assert abs(p.det() - oracles.lu_det(p.entries).real) <= 1e-12 * p.det()


# --- matrix functions ----------------------------------------------------

def test_exp_zero_is_identity():
    e = mat_exp(SelfAdjointMatrix(np.zeros((3, 3))))
    assert isinstance(e, SpdMatrix)
    assert np.array_equal(e.entries, np.eye(3))


def test_exp_diagonal_logs():
    e = mat_exp(SelfAdjointMatrix(np.diag([math.log(2), math.log(3)])))
    assert np.allclose(e.entries, np.diag([2.0, 3.0]), rtol=1e-15, atol=0)


def test_exp_matches_series_seeded():
    s = random_selfadjoint(5, "real", seed=9, norm=2.0)
    series = oracles.taylor_expm(s.entries)
    assert rel(mat_exp(s).entries, series) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(dims, fields, seeds)
def test_exp_matches_scipy(n, fld, seed):
    s = random_selfadjoint(n, fld, seed, norm=2.0)
    assert rel(mat_exp(s).entries, scipy.linalg.expm(s.entries)) <= 1e-12


def test_log_identity_and_diagonal():
    assert np.array_equal(mat_log(SpdMatrix(np.eye(3))).entries, np.zeros((3, 3)))
    d = mat_log(SpdMatrix(np.diag([math.e, math.e**2])))
    assert np.allclose(d.entries, np.diag([1.0, 2.0]), rtol=1e-15, atol=0)


def test_log_roundtrip_seed_7():
    p = random_spd(5, seed=7)
    assert rel(mat_exp(mat_log(p)).entries, p.entries) <= 1e-10


@settings(max_examples=30, deadline=None)
@given(dims, fields, seeds)
def test_log_trace_is_logdet(n, fld, seed):
    p = random_spd(n, fld, seed)
    assert abs(mat_log(p).trace() - math.log(oracles.lu_det(p.entries).real)) <= 1e-10
    assert rel(mat_log(p).entries, scipy.linalg.logm(p.entries)) <= 1e-10


@settings(max_examples=30, deadline=None)
@given(dims, fields, seeds)
def test_exp_log_bijection(n, fld, seed):
    a = random_selfadjoint(n, fld, seed, norm=5.0)
    back = mat_log(SpdMatrix(mat_exp(a).entries))
    assert np.linalg.norm(back.entries - a.entries) <= 1e-9 * (1 + a.norm())
    tr = a.trace()
    assert abs(oracles.lu_det(mat_exp(a).entries).real - math.exp(tr)) <= 1e-10 * math.exp(tr)


def test_sqrt_examples():
    assert np.array_equal(mat_sqrt(SpdMatrix(np.eye(3))).entries, np.eye(3))
    assert np.array_equal(mat_sqrt(SpdMatrix(np.diag([4.0, 9.0]))).entries, np.diag([2.0, 3.0]))
    p = random_spd(5, seed=3)
    r = mat_sqrt(p)
    assert rel(r.entries @ r.entries, p.entries) <= 1e-11


# --- congruence ----------------------------------------------------------

def test_congruence_examples():
    a = random_selfadjoint(3, seed=4)
    assert np.allclose(congruence(np.eye(3), a).entries, a.entries, atol=0)
    d = congruence(np.diag([2.0, 1.0]), SpdMatrix(np.eye(2)))
    assert isinstance(d, SpdMatrix)
    assert np.array_equal(d.entries, np.diag([4.0, 1.0]))


def test_congruence_orthogonal_keeps_spectrum():
    a = random_selfadjoint(5, seed=8)
    o = random_group_element("O", 5, seed=8)
    lam = sym_eig(congruence(o, a)).eigenvalues
    assert np.max(np.abs(lam - sym_eig(a).eigenvalues)) <= 1e-12


def test_congruence_errors():
    with pytest.raises(DimensionMismatchError):
        congruence(np.eye(3), SelfAdjointMatrix(np.eye(2)))
    with pytest.raises(SingularMatrixError):
        congruence(np.array([[1.0, 2.0], [2.0, 4.0]]), SelfAdjointMatrix(np.eye(2)))


@settings(max_examples=30, deadline=None)
@given(dims, fields, seeds)
def test_congruence_preserves_definiteness_and_det(n, fld, seed):
    p = random_spd(n, fld, seed)
    t = random_group_element("SL", n, fld, seed, cond_cap=10.0)
    out = congruence(t, p)
    assert out.eigenvalues[0] > 0
    assert abs(out.det() - p.det()) <= 1e-10 * p.det()


# --- trace_inner ---------------------------------------------------------

def test_trace_inner_examples():
    assert trace_inner(SelfAdjointMatrix(np.eye(3)), SelfAdjointMatrix(np.eye(3))) == 3.0
    assert trace_inner(SelfAdjointMatrix(np.diag([1.0, -1.0])), SelfAdjointMatrix(np.eye(2))) == 0.0
    with pytest.raises(DimensionMismatchError):
        trace_inner(SelfAdjointMatrix(np.eye(3)), SelfAdjointMatrix(np.eye(2)))


@pytest.mark.parametrize("fld", ["real", "complex"])
def test_trace_inner_seed_11(fld):
    a = random_selfadjoint(4, fld, seed=11)
    b = random_selfadjoint(4, fld, seed=12)
    elementwise = np.sum(a.entries * b.entries.conj()).real
    assert abs(trace_inner(a, b) - elementwise) <= 1e-13
    assert abs(trace_inner(a, b) - oracles.trace_product(a.entries, b.entries).real) <= 1e-13
    assert trace_inner(a, b) == pytest.approx(trace_inner(b, a), abs=1e-15)
    assert trace_inner(a, a) > 0


# --- frechet_dexp --------------------------------------------------------

def test_dexp_at_zero_is_identity_exactly():
    a = random_selfadjoint(4, "complex", seed=5)
    d = frechet_dexp(SelfAdjointMatrix(np.zeros((4, 4))), a)
    assert np.array_equal(d.entries, a.entries)


@pytest.mark.parametrize("t", [-1.5, 0.3, 2.0])
def test_dexp_scalar_base(t):
    a = random_selfadjoint(4, seed=6)
    d = frechet_dexp(SelfAdjointMatrix(t * np.eye(4)), a)
    assert rel(d.entries, math.exp(t) * a.entries) <= 1e-14


def test_dexp_seed_5_matches_block_oracle():
    t = random_selfadjoint(5, seed=5, norm=2.0)
    a = random_selfadjoint(5, seed=6, norm=2.0)
    oracle = oracles.block_frechet(t.entries, a.entries)
    assert rel(frechet_dexp(t, a).entries, oracle) <= 1e-10


@settings(max_examples=30, deadline=None)
@given(dims, fields, seeds)
def test_dexp_matches_scipy_and_is_linear(n, fld, seed):
    t = random_selfadjoint(n, fld, seed, norm=2.0)
    a = random_selfadjoint(n, fld, seed + 1)
    b = random_selfadjoint(n, fld, seed + 2)
    ref = scipy.linalg.expm_frechet(t.entries, a.entries, compute_expm=False)
    assert rel(frechet_dexp(t, a).entries, ref) <= 1e-11
    combo = frechet_dexp(t, 2.0 * a - 0.5 * b).entries
    parts = 2.0 * frechet_dexp(t, a).entries - 0.5 * frechet_dexp(t, b).entries
    assert np.linalg.norm(combo - parts) <= 1e-12 * (1 + np.linalg.norm(parts))


def test_dexp_near_confluent_spectrum():
    # eigenvalues 1e-9 apart take the series branch
    q = random_group_element("O", 3, seed=2).matrix
    t = SelfAdjointMatrix(q @ np.diag([1.0, 1.0 + 1e-9, -0.5]) @ q.T)
    a = random_selfadjoint(3, seed=2)
    oracle = oracles.block_frechet(t.entries, a.entries)
    assert rel(frechet_dexp(t, a).entries, oracle) <= 1e-12


def test_dexp_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        frechet_dexp(SelfAdjointMatrix(np.eye(2)), SelfAdjointMatrix(np.eye(3)))

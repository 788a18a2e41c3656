"""Second-quantized layer: correlators, basis changes, state families."""

import json
import math

import numpy as np
import pytest

from vortexcorr.errors import PauliViolationError, TruncationError
from vortexcorr.fock import (Basis, Statistics, change_basis, make_coherent,
                             make_cothermal, make_fock, make_noon,
                             make_thermal, mean_number, mode_occupations,
                             pair_isotropy_defect, pair_moment,
                             state_from_json, state_to_json)


def test_mean_numbers():
    assert mean_number(make_fock(1, 1, Statistics.FERMI)) == pytest.approx(2.0, abs=1e-13)
    assert mean_number(make_fock(2, 0, Statistics.BOSE)) == pytest.approx(2.0, abs=1e-13)
    assert mean_number(make_coherent(1.0j, 1.0, 16)) == pytest.approx(2.0, abs=1e-12)
    assert mean_number(make_thermal(1.0, 1.0, 40)) == pytest.approx(2.0, abs=1e-9)
    assert mean_number(make_cothermal(math.sqrt(0.5), 0.5, 40)) == pytest.approx(2.0, abs=1e-9)
    assert mean_number(make_noon()) == pytest.approx(2.0, abs=1e-13)


def test_pair_moments():
    # <:N^2:> = <N(N-1)> for definite N=2 states, <N>^2 for coherent,
    # 6 for two unit thermal modes, 5.5 for the default cothermal mix
    assert pair_moment(make_fock(1, 1, Statistics.FERMI)) == pytest.approx(2.0, abs=1e-13)
    assert pair_moment(make_fock(1, 1, Statistics.BOSE)) == pytest.approx(2.0, abs=1e-13)
    assert pair_moment(make_fock(2, 0, Statistics.BOSE)) == pytest.approx(2.0, abs=1e-13)
    assert pair_moment(make_noon()) == pytest.approx(2.0, abs=1e-13)
    assert pair_moment(make_coherent(1.0j, 1.0, 16)) == pytest.approx(4.0, abs=1e-11)
    assert pair_moment(make_thermal(1.0, 1.0, 40)) == pytest.approx(6.0, abs=1e-8)
    assert pair_moment(make_cothermal(math.sqrt(0.5), 0.5, 40)) == pytest.approx(5.5, abs=1e-8)


def test_fermi_pauli_guard():
    with pytest.raises(PauliViolationError):
        make_fock(2, 0, Statistics.FERMI)


def test_coherent_cutoff_guard():
    with pytest.raises(TruncationError) as err:
        make_coherent(3.0, 3.0j, 2)
    assert err.value.required_cutoff > 2


def test_fock_correlators_exact():
    corr = make_fock(1, 1, Statistics.BOSE).correlators()
    np.testing.assert_allclose(corr.first, np.eye(2), atol=1e-14)
    # <adag_a adag_b b a> = 1, repeated-mode pairs vanish for (1,1)
    assert corr.second[0, 1, 1, 0] == pytest.approx(1.0, abs=1e-14)
    assert abs(corr.second[0, 0, 0, 0]) < 1e-14

    corr20 = make_fock(2, 0, Statistics.BOSE).correlators()
    assert corr20.second[0, 0, 0, 0] == pytest.approx(2.0, abs=1e-14)


def test_fermi_repeated_creation_index_zero():
    second = make_fock(1, 1, Statistics.FERMI).correlators().second
    for p in range(2):
        # adag_p adag_p annihilates any fermionic state
        assert np.all(np.abs(second[p, p, :, :]) == 0.0)
        assert np.all(np.abs(second[:, :, p, p]) == 0.0)


def test_fermi_exchange_antisymmetry():
    second = make_fock(1, 1, Statistics.FERMI).correlators().second
    np.testing.assert_allclose(second[0, 1], -second[1, 0], atol=1e-14)


def test_coherent_factorization():
    corr = make_coherent(0.7j, -0.3 + 0.4j, 16).correlators()
    alpha = np.array([0.7j, -0.3 + 0.4j])
    want_first = np.conj(alpha)[:, None] * alpha[None, :]
    np.testing.assert_allclose(corr.first, want_first, atol=1e-12)
    want_second = np.einsum("p,q,r,s->pqrs", np.conj(alpha), np.conj(alpha),
                            alpha, alpha)
    # second[p,p',q',q] = conj(a_p) conj(a_p') a_q' a_q
    np.testing.assert_allclose(corr.second,
                               want_second.transpose(0, 1, 2, 3), atol=1e-12)


def test_thermal_correlators():
    corr = make_thermal(1.0, 0.5, 42).correlators()
    np.testing.assert_allclose(corr.first, np.diag([1.0, 0.5]), atol=1e-10)
    # <adag adag a a> = 2 nbar^2 per mode, cross terms nbar_a nbar_b
    assert corr.second[0, 0, 0, 0] == pytest.approx(2.0, abs=1e-9)
    assert corr.second[1, 1, 1, 1] == pytest.approx(0.5, abs=1e-10)
    assert corr.second[0, 1, 1, 0] == pytest.approx(0.5, abs=1e-10)


def test_bose_basis_identity():
    # |1,1> in dipoles maps onto (|2,0> - |0,2>)/sqrt(2) in vortices
    state = make_fock(1, 1, Statistics.BOSE, Basis.DIPOLE)
    rotated = change_basis(state)
    assert rotated.basis is Basis.VORTEX
    d = rotated.dim
    vec = np.zeros(d * d, dtype=complex)
    vec[2 * d + 0] = 1.0 / math.sqrt(2)
    vec[0 * d + 2] = -1.0 / math.sqrt(2)
    want = np.outer(vec, vec.conj())
    np.testing.assert_allclose(rotated.matrix, want, atol=1e-12)


def test_fermi_basis_identity():
    # |1,1> is basis invariant for fermions (filled two-mode shell)
    state = make_fock(1, 1, Statistics.FERMI, Basis.DIPOLE)
    rotated = change_basis(state)
    assert rotated.basis is Basis.VORTEX
    np.testing.assert_allclose(rotated.matrix, state.matrix, atol=1e-12)


def test_basis_round_trip():
    for build in (lambda: make_fock(1, 1, Statistics.BOSE, Basis.VORTEX),
                  lambda: make_thermal(0.3, 0.3, 22),
                  lambda: make_coherent(1.0j, 1.0, 16)):
        state = build()
        back = change_basis(change_basis(state))
        assert back.basis is state.basis
        d = state.dim
        np.testing.assert_allclose(back.matrix[:d * d, :d * d]
                                   .reshape(d, d, d, d)[:d, :d, :d, :d]
                                   .reshape(d * d, d * d)
                                   if back.dim == d else
                                   back.as4d()[:d, :d, :d, :d].reshape(d * d, d * d),
                                   state.matrix, atol=1e-11)


def test_correlators_basis_covariant():
    # <N>, <:N^2:> and the isotropy defect do not depend on the basis labels
    state = make_thermal(0.5, 0.5, 28)
    rotated = change_basis(state)
    assert mean_number(rotated) == pytest.approx(mean_number(state), abs=1e-10)
    assert pair_moment(rotated) == pytest.approx(pair_moment(state), abs=1e-9)


def test_noon_is_rotated_bose11():
    # the bosonic |1,1> dipole state IS the (|2,0>-|0,2>)/sqrt(2) vortex state
    noon = make_noon(Basis.VORTEX)
    rotated = change_basis(make_fock(1, 1, Statistics.BOSE, Basis.DIPOLE))
    d = min(noon.dim, rotated.dim)
    a = noon.as4d()[:d, :d, :d, :d]
    b = rotated.as4d()[:d, :d, :d, :d]
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_mode_occupations():
    na, nb = mode_occupations(make_fock(2, 0, Statistics.BOSE))
    assert (na, nb) == pytest.approx((2.0, 0.0), abs=1e-13)


def test_isotropy_defect_flags_noon():
    assert pair_isotropy_defect(make_fock(1, 1, Statistics.FERMI)) < 1e-12
    assert pair_isotropy_defect(make_thermal(1.0, 1.0, 40)) < 1e-10
    assert pair_isotropy_defect(make_noon()) > 0.5


def test_json_round_trip():
    state = make_coherent(1.0j, 1.0, 16)
    text = state_to_json(state)
    back = state_from_json(text)
    assert back.statistics is state.statistics
    assert back.basis is state.basis
    assert back.cutoff == state.cutoff
    np.testing.assert_allclose(back.matrix, state.matrix, atol=0)
    json.loads(text)  # valid JSON document

"""Two-mode Fock-space states and their normally ordered correlators.

States live on a truncated occupation lattice (n_a, n_b), 0 <= n <= cutoff,
stored as dense density matrices. Mode a comes before mode b in the fermionic
ordering convention, i.e. |1,1> = adag_a adag_b |vac>; the antisymmetry sign
bookkeeping follows from that choice.

The density engine only ever consumes the first- and second-order normally
ordered correlators <adag_p a_q> and <adag_p adag_p' a_q' a_q>, so those are
computed here once per state and cached.
"""

import json
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.linalg import expm

from .errors import PauliViolationError, TruncationError

# Constructors refuse truncations that drop more than this much probability.
TAIL_TOL = 1e-12


class Statistics(Enum):
    BOSE = "bose"
    FERMI = "fermi"


class Basis(Enum):
    VORTEX = "vortex"   # (ccw, cw) circulation modes
    DIPOLE = "dipole"   # (x, y) Cartesian dipole modes


@dataclass
class QuantumState:
    """Density matrix of a two-mode state.

    matrix is indexed by flattened occupation pairs, (n_a, n_b) -> n_a*dim+n_b
    with dim = cutoff+1. flags carries provenance markers that serializers
    propagate into output files.
    """
    statistics: Statistics
    cutoff: int
    matrix: np.ndarray
    basis: Basis
    flags: tuple = ()
    _corr: object = field(default=None, repr=False, compare=False)

    @property
    def dim(self):
        return self.cutoff + 1

    def as4d(self):
        d = self.dim
        return self.matrix.reshape(d, d, d, d)

    def correlators(self):
        if self._corr is None:
            self._corr = _compute_correlators(self)
        return self._corr


@dataclass(frozen=True)
class Correlators:
    """first[p, q] = <adag_p a_q>; second[p, p', q', q] in that index order."""
    first: np.ndarray
    second: np.ndarray


def _ladder_left(rho4, mode, dagger, statistics, cutoff):
    """Left-multiply rho by a ladder operator of the given mode.

    Acts on the ket-side occupation axes of the 4D view. Fermionic mode-b
    operators pick up the Jordan-Wigner parity of mode a.
    """
    dim = cutoff + 1
    out = np.zeros_like(rho4)
    coeff = np.sqrt(np.arange(1, dim, dtype=float))
    if mode == 0:
        if dagger:
            out[1:] = coeff[:, None, None, None] * rho4[:-1]
        else:
            out[:-1] = coeff[:, None, None, None] * rho4[1:]
    else:
        if dagger:
            out[:, 1:] = coeff[None, :, None, None] * rho4[:, :-1]
        else:
            out[:, :-1] = coeff[None, :, None, None] * rho4[:, 1:]
        if statistics is Statistics.FERMI:
            parity = np.where(np.arange(dim) % 2 == 0, 1.0, -1.0)
            out *= parity[:, None, None, None]
    return out


def _trace4(rho4):
    return np.einsum("abab->", rho4)


def _compute_correlators(state):
    rho4 = state.as4d()
    stats, cut = state.statistics, state.cutoff
    first = np.zeros((2, 2), dtype=complex)
    second = np.zeros((2, 2, 2, 2), dtype=complex)
    for q in range(2):
        # a_q rho, reused by every (p, p', q') on top of it
        aq = _ladder_left(rho4, q, False, stats, cut)
        for p in range(2):
            first[p, q] = _trace4(_ladder_left(aq, p, True, stats, cut))
        for qp in range(2):
            aqq = _ladder_left(aq, qp, False, stats, cut)
            for pp in range(2):
                app = _ladder_left(aqq, pp, True, stats, cut)
                for p in range(2):
                    second[p, pp, qp, q] = _trace4(
                        _ladder_left(app, p, True, stats, cut))
    return Correlators(first=first, second=second)


def mean_number(state):
    """<N> = sum_p <adag_p a_p>."""
    return float(np.real(np.trace(state.correlators().first)))


def pair_moment(state):
    """<:N^2:> = sum_{p,p'} <adag_p adag_p' a_p' a_p>, the pair-counting
    normalization of the two-body density."""
    second = state.correlators().second
    total = sum(second[p, pp, pp, p] for p in range(2) for pp in range(2))
    return float(np.real(total))


def mode_occupations(state):
    first = state.correlators().first
    return float(np.real(first[0, 0])), float(np.real(first[1, 1]))


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def make_fock(n_a, n_b, statistics, basis=Basis.VORTEX):
    """Pure Fock state |n_a, n_b>."""
    if n_a < 0 or n_b < 0:
        raise ValueError("occupations must be non-negative")
    if statistics is Statistics.FERMI and (n_a > 1 or n_b > 1):
        raise PauliViolationError(
            f"fermionic occupations must be 0 or 1, got ({n_a}, {n_b})")
    cutoff = max(n_a, n_b, 1)
    dim = cutoff + 1
    vec = np.zeros(dim * dim, dtype=complex)
    vec[n_a * dim + n_b] = 1.0
    return QuantumState(statistics, cutoff, np.outer(vec, vec.conj()), basis)


def _coherent_vector(alpha, cutoff):
    n = np.arange(cutoff + 1)
    log_fact = np.array([math.lgamma(k + 1) for k in n])
    amp = np.exp(-0.5 * abs(alpha) ** 2) * np.power(complex(alpha), n) \
        * np.exp(-0.5 * log_fact)
    return amp


def _poisson_tail(intensity, cutoff):
    if intensity == 0.0:
        return 0.0
    n = np.arange(cutoff + 1)
    log_fact = np.array([math.lgamma(k + 1) for k in n])
    mass = np.exp(-intensity + n * math.log(intensity) - log_fact).sum()
    return max(0.0, 1.0 - mass)


def _required_poisson_cutoff(intensity):
    n = max(1, int(intensity))
    while _poisson_tail(intensity, n) > TAIL_TOL:
        n += 1
    return n


def make_coherent(alpha_a, alpha_b, cutoff, basis=Basis.DIPOLE):
    """Product of truncated coherent states, renormalized.

    The truncation must leave Poisson tail mass below TAIL_TOL in each mode,
    otherwise the constructor reports the cutoff that would suffice.
    """
    for alpha in (alpha_a, alpha_b):
        tail = _poisson_tail(abs(alpha) ** 2, cutoff)
        if tail > TAIL_TOL:
            need = _required_poisson_cutoff(abs(alpha) ** 2)
            raise TruncationError(
                f"coherent tail mass {tail:.3e} above {TAIL_TOL:.0e} at "
                f"cutoff {cutoff}; cutoff {need} suffices",
                required_cutoff=need)
    vec = np.kron(_coherent_vector(alpha_a, cutoff),
                  _coherent_vector(alpha_b, cutoff))
    rho = np.outer(vec, vec.conj())
    rho /= np.real(np.trace(rho))
    return QuantumState(Statistics.BOSE, cutoff, rho, basis)


def _thermal_diag(nbar, cutoff):
    if nbar < 0:
        raise ValueError("thermal occupancy must be non-negative")
    if nbar == 0.0:
        diag = np.zeros(cutoff + 1)
        diag[0] = 1.0
        return diag
    tau = nbar / (1.0 + nbar)
    tail = tau ** (cutoff + 1)
    if tail > TAIL_TOL:
        need = int(math.ceil(math.log(TAIL_TOL) / math.log(tau))) + 1
        raise TruncationError(
            f"thermal tail mass {tail:.3e} above {TAIL_TOL:.0e} at cutoff "
            f"{cutoff}; cutoff {need} suffices", required_cutoff=need)
    diag = (1.0 - tau) * tau ** np.arange(cutoff + 1)
    return diag / diag.sum()


def make_thermal(nbar_a, nbar_b, cutoff, basis=Basis.VORTEX):
    """Product of truncated geometric (thermal) states, renormalized."""
    rho = np.kron(np.diag(_thermal_diag(nbar_a, cutoff)),
                  np.diag(_thermal_diag(nbar_b, cutoff))).astype(complex)
    return QuantumState(Statistics.BOSE, cutoff, rho, basis)


def _displaced_thermal(alpha, nbar, cutoff):
    """Single-mode displaced thermal matrix, built at a working cutoff and
    truncated down with an explicit tail check."""
    work = cutoff + 24
    diag = np.zeros(work + 1)
    if nbar == 0.0:
        diag[0] = 1.0
    else:
        tau = nbar / (1.0 + nbar)
        diag[:] = (1.0 - tau) * tau ** np.arange(work + 1)
    a = np.diag(np.sqrt(np.arange(1, work + 1, dtype=float)), k=1)
    disp = expm(alpha * a.conj().T - np.conj(alpha) * a)
    rho = disp @ np.diag(diag).astype(complex) @ disp.conj().T
    kept = rho[:cutoff + 1, :cutoff + 1]
    deficit = 1.0 - float(np.real(np.trace(kept)))
    if deficit > TAIL_TOL:
        raise TruncationError(
            f"displaced-thermal tail mass {deficit:.3e} above "
            f"{TAIL_TOL:.0e} at cutoff {cutoff}", required_cutoff=None)
    return kept / np.real(np.trace(kept))


def make_cothermal(alpha, nbar_th, cutoff, basis=Basis.DIPOLE):
    """Cothermal state: coherent displacement on top of a thermal background.

    Mode a is displaced by alpha, mode b by -i*alpha (the phase relation that
    keeps the one-body density ring-shaped), both carrying thermal occupancy
    nbar_th. Interpolates make_coherent (nbar_th=0) and make_thermal
    (alpha=0). Flagged supplement-approximated: the construction follows the
    supplementary description rather than a closed-form in the main text.
    """
    rho = np.kron(_displaced_thermal(alpha, nbar_th, cutoff),
                  _displaced_thermal(-1.0j * alpha, nbar_th, cutoff))
    rho /= np.real(np.trace(rho))
    return QuantumState(Statistics.BOSE, cutoff, rho, basis,
                        flags=("supplement-approximated",))


def make_noon(basis=Basis.VORTEX):
    """Two-particle NOON state (|2,0> - |0,2>)/sqrt(2) up to a global phase."""
    dim = 3
    vec = np.zeros(dim * dim, dtype=complex)
    vec[2 * dim + 0] = 1.0j / math.sqrt(2.0)
    vec[0 * dim + 2] = -1.0j / math.sqrt(2.0)
    return QuantumState(Statistics.BOSE, 2, np.outer(vec, vec.conj()), basis)


# ---------------------------------------------------------------------------
# basis rotation
# ---------------------------------------------------------------------------

def _ladder_matrices(statistics, cutoff):
    dim = cutoff + 1
    if statistics is Statistics.FERMI:
        a = np.array([[0.0, 1.0], [0.0, 0.0]])
        parity = np.diag([1.0, -1.0])
        eye = np.eye(2)
        return np.kron(a, eye).astype(complex), \
            np.kron(parity, a).astype(complex)
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1)
    eye = np.eye(dim)
    return np.kron(a, eye).astype(complex), np.kron(eye, a).astype(complex)


# Single-particle map from dipole to vortex annihilation operators:
# a_ccw = (a_x - i a_y)/sqrt2, a_cw = (a_x + i a_y)/sqrt2. Note det = i: the
# map is not a plain beamsplitter, it carries a relative phase that matters
# for coherences between occupation states (e.g. the NOON superposition).
_DIPOLE_TO_VORTEX = np.array([[1.0, -1.0j], [1.0, 1.0j]]) / math.sqrt(2.0)


def _mixer(statistics, cutoff):
    """Fock-space unitary U with U a_p U^dag = sum_q u[p, q] a_q.

    Built as exp(i sum_{rs} K[r,s] adag_r a_s) with K = i log(u); number
    conserving, so exact on every complete total-N block of the truncated
    lattice.
    """
    from scipy.linalg import logm
    kmat = 1.0j * logm(_DIPOLE_TO_VORTEX)
    ops = _ladder_matrices(statistics, cutoff)
    dim_full = ops[0].shape[0]
    gen = np.zeros((dim_full, dim_full), dtype=complex)
    for r in range(2):
        for s in range(2):
            gen += kmat[r, s] * (ops[r].conj().T @ ops[s])
    return expm(1.0j * gen)


def _embed(state, cutoff):
    if cutoff < state.cutoff:
        raise ValueError("cannot shrink cutoff")
    if cutoff == state.cutoff:
        return state.matrix.copy()
    old, new = state.dim, cutoff + 1
    rho4 = np.zeros((new, new, new, new), dtype=complex)
    rho4[:old, :old, :old, :old] = state.as4d()
    return rho4.reshape(new * new, new * new)


def _significant_total(state, tol=1e-13):
    """Largest total occupation carrying more than tol of block mass."""
    rho4 = state.as4d()
    dim = state.dim
    totals = np.add.outer(np.arange(dim), np.arange(dim))
    mass = np.zeros(2 * dim - 1)
    diag = np.real(np.einsum("abab->ab", rho4))
    for t in range(2 * dim - 1):
        mass[t] = diag[totals == t].sum()
    keep = np.nonzero(mass > tol)[0]
    return int(keep.max()) if keep.size else 0


def change_basis(state):
    """Re-express the state in the other mode basis (dipole <-> vortex).

    The physical state is unchanged; only the occupation labels rotate. The
    transform redistributes quanta within each total-N block, so the state is
    first embedded at a cutoff that makes every populated block complete.
    For truncated indefinite-number states the (sub-1e-12) tail above the
    embedding cutoff is the only source of error.
    """
    if state.statistics is Statistics.FERMI:
        work = state.cutoff
    else:
        work = max(state.cutoff, _significant_total(state))
    rho = _embed(state, work)
    mixer = _mixer(state.statistics, work)
    if state.basis is Basis.DIPOLE:
        rotated = mixer.conj().T @ rho @ mixer
        new_basis = Basis.VORTEX
    else:
        rotated = mixer @ rho @ mixer.conj().T
        new_basis = Basis.DIPOLE
    return QuantumState(state.statistics, work, rotated, new_basis,
                        flags=state.flags)


def pair_isotropy_defect(state):
    """How strongly the pair density breaks rotation invariance.

    Rotating the plane by angle t multiplies vortex-basis correlator entries
    by exp(i t (l_q + l_q' - l_p - l_p')) with circulation l = +/-1, so the
    one- and two-body densities are isotropic iff every entry with unbalanced
    circulation vanishes. Returns the largest unbalanced magnitude.
    """
    s = state if state.basis is Basis.VORTEX else change_basis(state)
    corr = s.correlators()
    ell = np.array([1, -1])
    defect = 0.0
    for p in range(2):
        for q in range(2):
            if ell[p] != ell[q]:
                defect = max(defect, abs(corr.first[p, q]))
    for idx in np.ndindex(2, 2, 2, 2):
        p, pp, qp, q = idx
        if ell[p] + ell[pp] != ell[q] + ell[qp]:
            defect = max(defect, abs(corr.second[idx]))
    return float(defect)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def state_to_json(state):
    """Dense JSON form with complex entries as [re, im] pairs."""
    mat = [[[float(z.real), float(z.imag)] for z in row]
           for row in state.matrix]
    return json.dumps({
        "format": "vortexcorr.quantum-state",
        "statistics": state.statistics.value,
        "cutoff": state.cutoff,
        "basis": state.basis.value,
        "flags": list(state.flags),
        "matrix": mat,
    })


def state_from_json(text):
    data = json.loads(text)
    if data.get("format") != "vortexcorr.quantum-state":
        raise ValueError("not a serialized quantum state")
    raw = np.asarray(data["matrix"], dtype=float)
    matrix = raw[..., 0] + 1.0j * raw[..., 1]
    return QuantumState(Statistics(data["statistics"]), int(data["cutoff"]),
                        matrix, Basis(data["basis"]),
                        flags=tuple(data.get("flags", ())))

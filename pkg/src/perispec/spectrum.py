"""Spectrum of the nonlocal operator on a periodic box.

Plane-wave fields exp(i nu_k . x) gamma with lattice frequencies
nu_k = (2 pi k_1 / l_1, ..., 2 pi k_n / l_n) diagonalize the operator:
applying it multiplies the coefficient by the tensor multiplier M(nu_k).
The eigenvalues of the operator are therefore the multiplier eigenvalues
lambda1(nu_k) (eigenfield along nu_k) and lambda2(nu_k) (n - 1 transverse
eigenfields), and truncated Fourier series can be applied to and solved
against the operator coefficient-wise.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateEigenvalue, InvalidParams, SingularMode,
                     ZeroMode)
from .multipliers import (eigenvalue_parallel, eigenvalue_transverse,
                          orthonormal_basis, tensor_multiplier)

__all__ = [
    "TorusSpec", "SpectrumRecord", "FourierField", "frequency_vector",
    "spectrum_table", "eigenfield", "apply_operator", "solve_periodic",
]

_EIGENVALUE_FLOOR = 1e-14


@dataclass(frozen=True)
class TorusSpec:
    """Periodic box with edge lengths (l_1, ..., l_n), all positive."""

    lengths: tuple

    def __post_init__(self):
        lengths = tuple(float(l) for l in self.lengths)
        object.__setattr__(self, "lengths", lengths)
        if not lengths:
            raise InvalidParams("torus needs at least one edge length")
        if any(l <= 0 for l in lengths):
            raise InvalidParams(f"edge lengths must be positive, got {lengths}")

    @property
    def dim(self):
        return len(self.lengths)


@dataclass(frozen=True)
class SpectrumRecord:
    """One lattice mode: index k, frequency nu_k, both eigenvalues.

    lambda2 has multiplicity n - 1 (0 in one dimension); both eigenvalues
    are 0 for k = 0.
    """

    k: tuple
    nu_k: np.ndarray
    lambda1: float
    lambda2: float
    multiplicity2: int


def frequency_vector(k, torus):
    """Lattice frequency nu_k = (2 pi k_1 / l_1, ..., 2 pi k_n / l_n)."""
    kv = np.atleast_1d(np.asarray(k, dtype=float))
    if kv.size != torus.dim:
        raise InvalidParams(
            f"mode index has length {kv.size}, expected {torus.dim}")
    return 2.0 * math.pi * kv / np.asarray(torus.lengths)


def _check_torus(params, torus):
    if torus.dim != params.n:
        raise InvalidParams(
            f"torus dimension {torus.dim} does not match n = {params.n}")


def spectrum_table(params, material, torus, k_max):
    """Eigenvalues for every mode in the box {-k_max, ..., k_max}^n.

    Records are ordered lexicographically in k. The k = 0 record carries
    eigenvalue 0 (constant fields are in the operator kernel).
    """
    _check_torus(params, torus)
    if k_max < 0:
        raise InvalidParams(f"k_max must be >= 0, got {k_max}")
    records = []
    for k in itertools.product(range(-k_max, k_max + 1), repeat=params.n):
        nu_k = frequency_vector(k, torus)
        records.append(SpectrumRecord(
            k=k,
            nu_k=nu_k,
            lambda1=eigenvalue_parallel(params, material, nu_k),
            lambda2=eigenvalue_transverse(params, material, nu_k),
            multiplicity2=params.n - 1,
        ))
    return records


def eigenfield(k, torus, x, which="parallel", j=2):
    """Eigenvector field of mode k evaluated at the point x.

    The parallel field is exp(i nu_k . x) nu_k (amplitude nu_k itself, not
    normalized); transverse field number j (2 <= j <= n) is
    exp(i nu_k . x) zeta_j with zeta_j the deterministic transverse basis
    vector.  For k = 0 the parallel convention returns the constant e_1
    field; transverse fields do not exist there and raise ZeroMode.
    """
    kv = tuple(int(ki) for ki in np.atleast_1d(k))
    n = torus.dim
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.size != n:
        raise InvalidParams(f"point has length {x.size}, expected {n}")
    if which not in ("parallel", "transverse"):
        raise InvalidParams(f"which must be 'parallel' or 'transverse', got {which!r}")
    nu_k = frequency_vector(kv, torus)
    if all(ki == 0 for ki in kv):
        if which != "parallel":
            raise ZeroMode("the k = 0 mode has no transverse eigenfields")
        e1 = np.zeros(n, dtype=complex)
        e1[0] = 1.0
        return e1
    phase = np.exp(1j * float(nu_k @ x))
    if which == "parallel":
        return phase * nu_k.astype(complex)
    if not 2 <= j <= n:
        raise InvalidParams(f"transverse index j must be in [2, {n}], got {j}")
    basis = orthonormal_basis(nu_k)
    return phase * basis[j - 1].astype(complex)


@dataclass
class FourierField:
    """Truncated Fourier series of a vector field on the torus.

    ``coeffs`` maps integer mode tuples k to complex coefficient vectors
    of length ``dim``.  Real-valued fields satisfy the conjugate symmetry
    coeff(-k) = conj(coeff(k)); use :meth:`from_half_spectrum` to build
    such a field from one half of the modes.
    """

    dim: int
    coeffs: dict

    def __post_init__(self):
        clean = {}
        for k, c in self.coeffs.items():
            key = tuple(int(ki) for ki in np.atleast_1d(k))
            val = np.atleast_1d(np.asarray(c, dtype=complex))
            if len(key) != self.dim or val.size != self.dim:
                raise InvalidParams(
                    f"mode {key} / coefficient of size {val.size} do not "
                    f"match dim = {self.dim}")
            clean[key] = val
        self.coeffs = clean

    @classmethod
    def from_half_spectrum(cls, dim, half):
        """Build a real (conjugate-symmetric) field from one half-spectrum.

        Every given mode k also populates -k with the conjugate
        coefficient; a k = 0 entry is forced real.
        """
        coeffs = {}
        for k, c in half.items():
            key = tuple(int(ki) for ki in np.atleast_1d(k))
            val = np.atleast_1d(np.asarray(c, dtype=complex))
            neg = tuple(-ki for ki in key)
            if key == neg:
                coeffs[key] = val.real.astype(complex)
            else:
                coeffs[key] = val
                coeffs[neg] = np.conj(val)
        return cls(dim, coeffs)

    def conjugate_asymmetry(self):
        """Max deviation from coeff(-k) = conj(coeff(k)) over all modes."""
        worst = 0.0
        for k, c in self.coeffs.items():
            neg = tuple(-ki for ki in k)
            other = self.coeffs.get(neg)
            if other is None:
                worst = max(worst, float(np.max(np.abs(c))))
            else:
                worst = max(worst, float(np.max(np.abs(np.conj(c) - other))))
        return worst

    def evaluate(self, torus, x):
        """Pointwise value sum_k coeff(k) exp(i nu_k . x)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros(self.dim, dtype=complex)
        for k, c in self.coeffs.items():
            out += c * np.exp(1j * float(frequency_vector(k, torus) @ x))
        return out


def apply_operator(field, params, material, torus):
    """Apply the operator coefficient-wise: out(k) = M(nu_k) in(k).

    Exact on the truncated series; preserves conjugate symmetry since the
    multiplier matrices are real.
    """
    _check_torus(params, torus)
    if field.dim != params.n:
        raise InvalidParams("field dimension does not match n")
    out = {}
    for k, c in field.coeffs.items():
        nu_k = frequency_vector(k, torus)
        M = tensor_multiplier(params, material, nu_k).matrix
        out[k] = M @ c
    return FourierField(field.dim, out)


def solve_periodic(rhs, params, material, torus):
    """Solve M(nu_k) u(k) = rhs(k) mode by mode in the eigenbasis.

    The zero mode must vanish (M(0) = 0 is singular); constant fields stay
    in the kernel, so u(0) = 0.  Raises DegenerateEigenvalue if any
    eigenvalue in range is numerically zero.
    """
    _check_torus(params, torus)
    if rhs.dim != params.n:
        raise InvalidParams("field dimension does not match n")
    zero = (0,) * params.n
    out = {}
    for k, c in rhs.coeffs.items():
        if k == zero:
            if np.any(c != 0):
                raise SingularMode(
                    "rhs has a nonzero mean; the zero mode is not solvable")
            out[k] = np.zeros(params.n, dtype=complex)
            continue
        nu_k = frequency_vector(k, torus)
        lam1 = eigenvalue_parallel(params, material, nu_k)
        lam2 = eigenvalue_transverse(params, material, nu_k)
        if abs(lam1) < _EIGENVALUE_FLOOR or (
                params.n > 1 and abs(lam2) < _EIGENVALUE_FLOOR):
            raise DegenerateEigenvalue(
                f"eigenvalue at mode {k} is below {_EIGENVALUE_FLOOR}")
        basis = orthonormal_basis(nu_k)
        u = (basis[0] @ c) / lam1 * basis[0].astype(complex)
        for b in basis[1:]:
            u = u + (b @ c) / lam2 * b.astype(complex)
        out[k] = u
    return FourierField(rhs.dim, out)

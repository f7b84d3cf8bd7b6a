"""Integer symplectic matrices and their actions.

Period matrices transform as tau -> (C + D tau)(A + B tau)^-1 and row
vectors as z -> z (A + B tau)^-1, where M = [[A, B], [C, D]].
Characteristics use the classical Igusa formula; it is written for the
transposed-block action (A tau + B)(C tau + D)^-1, so the matrix is first
conjugated by the half-swap [[0, I], [I, 0]].
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .theta import ThetaCharacteristic, check_period_matrix

__all__ = [
    "ConditioningError",
    "ShapeError",
    "IntegerSymplectic",
    "standard_form",
    "is_symplectic",
    "act_on_period",
    "act_on_vector",
    "characteristic_shift",
    "act_on_characteristic",
    "swap_convention",
    "KNOWN_MATRICES",
    "CYCLIC_BASIS",
    "REORDER",
    "HUMBERT",
    "BOLZA_S",
    "BOLZA_T",
    "HALF_SWAP",
]


class ConditioningError(ArithmeticError):
    """A + B tau is too close to singular."""


class ShapeError(ValueError):
    """Matrix has the wrong shape for a symplectic operation."""


def _as_int_matrix(M):
    arr = np.array(M, dtype=object)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {arr.shape}")
    return np.vectorize(int, otypes=[object])(arr)


def standard_form(g):
    """J = [[0, I], [-I, 0]] as an exact integer matrix."""
    J = np.zeros((2 * g, 2 * g), dtype=object)
    for i in range(g):
        J[i, g + i] = 1
        J[g + i, i] = -1
    return J


def is_symplectic(M):
    """True iff M J M^T = J exactly.

    Raises
    ------
    ShapeError
        For non-square or odd-dimensional input.
    """
    arr = _as_int_matrix(M)
    if arr.shape[0] % 2:
        raise ShapeError(f"symplectic matrices have even size, got {arr.shape[0]}")
    J = standard_form(arr.shape[0] // 2)
    return bool(np.all(arr.dot(J).dot(arr.T) == J))


@dataclass(frozen=True)
class IntegerSymplectic:
    """Exact integer symplectic matrix with block accessors."""

    rows: tuple

    def __post_init__(self):
        arr = _as_int_matrix(self.rows)
        if not is_symplectic(arr):
            raise ValueError("matrix is not symplectic")
        object.__setattr__(self, "rows", tuple(tuple(int(x) for x in r) for r in arr))

    @property
    def g(self):
        return len(self.rows) // 2

    def exact(self):
        return np.array(self.rows, dtype=object)

    def array(self):
        return np.array(self.rows, dtype=float)

    def blocks(self, exact=False):
        M = self.exact() if exact else self.array()
        g = self.g
        return M[:g, :g], M[:g, g:], M[g:, :g], M[g:, g:]

    def __matmul__(self, other):
        return IntegerSymplectic(self.exact().dot(other.exact()))

    def inverse(self):
        J = standard_form(self.g)
        # M^-1 = -J M^T J
        return IntegerSymplectic(-J.dot(self.exact().T).dot(J))


def _coerce(M):
    return M if isinstance(M, IntegerSymplectic) else IntegerSymplectic(M)


def _denominator(M, tau, cond_max):
    A, B, _, _ = M.blocks()
    den = A + B @ tau
    cond = np.linalg.cond(den)
    if not np.isfinite(cond) or cond > cond_max:
        raise ConditioningError(f"A + B tau is ill-conditioned (cond={cond:.3e})")
    return den


def act_on_period(M, tau, cond_max=1e12):
    """tau -> (C + D tau)(A + B tau)^-1.

    Raises
    ------
    ConditioningError
        If A + B tau has condition number above ``cond_max``.
    """
    M = _coerce(M)
    tau = check_period_matrix(tau)
    den = _denominator(M, tau, cond_max)
    _, _, C, D = M.blocks()
    out = np.linalg.solve(den.T, (C + D @ tau).T)
    out = 0.5 * (out + out.T)
    return check_period_matrix(out, sym_tol=1e-8)


def act_on_vector(M, tau, z, cond_max=1e12):
    """Row-vector transport z -> z (A + B tau)^-1."""
    M = _coerce(M)
    den = _denominator(M, np.asarray(tau, dtype=complex), cond_max)
    z = np.asarray(z, dtype=complex)
    return np.linalg.solve(den.T, z.T).T


def characteristic_shift(M, tau_new):
    """Half-period 1/2 diag(C D^T) + 1/2 diag(A B^T) tau_new picked up by M."""
    M = _coerce(M)
    A, B, C, D = M.blocks()
    return 0.5 * np.diag(C @ D.T) + 0.5 * np.diag(A @ B.T) @ np.asarray(tau_new, dtype=complex)


def swap_convention(M):
    """Conjugate by [[0, I], [I, 0]]: [[A, B], [C, D]] -> [[D, C], [B, A]]."""
    M = _coerce(M)
    A, B, C, D = M.blocks(exact=True)
    return IntegerSymplectic(np.block([[D, C], [B, A]]))


def _fracs(vec):
    return np.array([Fraction(x) for x in vec], dtype=object)


def act_on_characteristic(M, ch):
    """Act on a characteristic; returns ``(new_char, phase)``.

    With G = [[a, b], [c, d]] the half-swapped matrix,
    G.(p, q) = (p, q) G^-1 + 1/2 (diag(c d^T), diag(a b^T)) and the phase
    (a fraction of a full turn) is
    -1/2 (p b^T d p - 2 p b^T c q + q a^T c q) + 1/2 (p d^T - q c^T) diag(a b^T),
    written for row vectors p, q.
    """
    M = _coerce(M)
    G = swap_convention(M)
    a, b, c, d = G.blocks(exact=True)
    p = _fracs(ch.a)
    q = _fracs(ch.b)
    if len(p) != G.g:
        raise ShapeError("characteristic genus does not match matrix")
    diag_cd = np.array([Fraction(int(x), 2) for x in np.diag(c.dot(d.T))], dtype=object)
    diag_ab = np.array([Fraction(int(x), 2) for x in np.diag(a.dot(b.T))], dtype=object)
    # (p, q) G^-1 with G^-1 = [[d^T, -b^T], [-c^T, a^T]]
    new_p = p.dot(d.T) - q.dot(c.T) + diag_cd
    new_q = -p.dot(b.T) + q.dot(a.T) + diag_ab
    quad = p.dot(b.T).dot(d).dot(p) - 2 * p.dot(b.T).dot(c).dot(q) + q.dot(a.T).dot(c).dot(q)
    lin = (p.dot(d.T) - q.dot(c.T)).dot(diag_ab)
    phase = Fraction(-quad, 2) + lin
    phase -= phase.numerator // phase.denominator
    return ThetaCharacteristic(tuple(new_p), tuple(new_q)), phase


# Cyclic-basis change for the genus-4 curve, in the (C + D tau)(A + B tau)^-1 action
CYCLIC_BASIS = (
    (1, 0, 0, 0, 0, 0, 0, 0),
    (0, -1, 0, 0, 0, 1, 0, 0),
    (0, 0, 0, 0, 0, 0, -1, 0),
    (0, 0, 0, 1, 0, 0, 0, 0),
    (0, 0, 0, 0, 1, 0, 0, 0),
    (0, -1, 0, 0, 0, 0, 0, 0),
    (0, 0, 1, 0, 0, 0, -1, 0),
    (0, 0, 0, -1, 0, 0, 0, 1),
)

# Cyclic reorder of coordinates (z0, z1, z2, z3) -> (z3, z0, z1, z2), as diag(P, P)
_P = ((0, 0, 0, 1), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0))
REORDER = tuple(
    tuple(_P[i][j] if (i < 4 and j < 4) else (_P[i - 4][j - 4] if (i >= 4 and j >= 4) else 0) for j in range(8))
    for i in range(8)
)

# Genus-2 reduction to the normal form [[t11, 1/2], [1/2, t22]]
HUMBERT = ((0, 1, 1, 0), (1, 1, 0, 1), (0, 1, 0, 1), (0, 0, 1, 0))

# Generators acting on the normal form
BOLZA_S = ((1, 2, -4, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 1, -2, 1))
BOLZA_T = ((1, 0, 0, 0), (0, 1, 0, 0), (1, 0, 1, 0), (0, 0, 0, 1))
HALF_SWAP = ((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, 0, 1), (0, 0, 1, 0))

KNOWN_MATRICES = {
    "cyclic_basis": CYCLIC_BASIS,
    "reorder": REORDER,
    "humbert": HUMBERT,
    "bolza_s": BOLZA_S,
    "bolza_t": BOLZA_T,
    "half_swap": HALF_SWAP,
}

"""Finite Macdonald difference operators on the truncated dominant cone.

The operator attached to a small dominant weight omega of the dual lattice
acts on functions of the shifted grid rho_g_hat + P_c_hat by

    (D_omega f)(x) = sum_{nu, mu+nu in cone} sum'_eta V_nu(x) U_{nu,eta}(x) f(x+nu),

where nu runs over the saturated set of omega, eta over the stabilizer
orbit W_nu(w_nu^{-1} omega), and the primed sum drops terms whose U
denominator vanishes.  Every "does this sine vanish" question is decided in
exact rational arithmetic (the argument is a multiple of m_a (h_g + c))
before any floating-point evaluation; shifts that leave the cone are
dropped only after their numerator is certified to vanish exactly.

Grid points are always carried as exact lattice weights paired with the
spec; raw real vectors are never accepted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .rootsys import (
    ConfigurationError,
    RootSystemData,
    Vector,
    apply_word,
    dominant_representative,
    dominant_weights_below,
    dot,
    inverse_word,
    parabolic_stabilizer_orbit,
    saturated_set,
    vadd,
    vscale,
    vsub,
    weyl_orbit,
)
from .macparams import Side, UnitarySpec

_DENSE_LIMIT = 5000


class InvariantViolation(AssertionError):
    """A structural identity guaranteed by the theory failed numerically."""


# -- truncated cones ----------------------------------------------------------


@dataclass(eq=False)
class TruncatedCone:
    """Ordered dominant weights of one side with truncation level c.

    The order (height ascending, then lexicographic in fundamental-weight
    coordinates) is a linear extension of the dominance order; positions are
    the indices of every matrix and grid vector downstream.
    """

    spec: UnitarySpec
    which: str  # 'primal' | 'dual'
    weights: tuple[Vector, ...]
    index: dict

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def side(self) -> Side:
        return self.spec.side(self.which)

    def __contains__(self, mu: Vector) -> bool:
        return mu in self.index

    def position(self, mu: Vector) -> int:
        return self.index[mu]

    def grid_points(self) -> list[Vector]:
        side = self.side
        return [self.spec.grid_point(side, mu) for mu in self.weights]

    def dominance_matrix(self) -> np.ndarray:
        """leq[i, j] True iff weights[i] <= weights[j] in dominance order."""
        cached = getattr(self, "_dom", None)
        if cached is not None:
            return cached
        S = self.side.system
        n = len(self.weights)
        leq = np.zeros((n, n), dtype=bool)
        for j, lam in enumerate(self.weights):
            leq[j, j] = True
            for i in range(j):
                mu = self.weights[i]
                coords = S.root_coords(vsub(lam, mu))
                if coords is not None and all(
                        c.denominator == 1 and c >= 0 for c in coords):
                    leq[i, j] = True
        self._dom = leq
        return leq


def cone_marks(spec: UnitarySpec, which: str) -> tuple[int, ...]:
    """Pairings of the fundamental weights with the truncation covector."""
    side = spec.side(which)
    marks = []
    for w in side.system.fundamental_weights:
        m = dot(w, side.cone_covector)
        assert m.denominator == 1 and m > 0
        marks.append(int(m))
    return tuple(marks)


def truncated_cone(spec: UnitarySpec, which: str = "dual") -> TruncatedCone:
    cached = spec._cache.get(("cone", which))
    if cached is not None:
        return cached
    side = spec.side(which)
    S = side.system
    marks = cone_marks(spec, which)
    c = spec.c
    coords_list: list[tuple[int, ...]] = []

    def rec(i: int, budget: int, acc: list[int]):
        if i == len(marks):
            coords_list.append(tuple(acc))
            return
        k = 0
        while k * marks[i] <= budget:
            acc.append(k)
            rec(i + 1, budget - k * marks[i], acc)
            acc.pop()
            k += 1

    rec(0, c, [])
    weights = [S.from_weight_coords(cs) for cs in coords_list]
    weights.sort(key=lambda v: (S.height(v), S.weight_coords(v)))
    cone = TruncatedCone(spec=spec, which=which,
                         weights=tuple(weights),
                         index={w: i for i, w in enumerate(weights)})
    spec._cache[("cone", which)] = cone
    return cone


def cardinality_series(spec: UnitarySpec, which: str, cmax: int) -> list[int]:
    """Coefficients of (1-z)^{-1} prod_j (1-z^{k_j})^{-1} up to degree cmax."""
    marks = cone_marks(spec, which)
    dp = [1] * (cmax + 1)  # the (1-z)^{-1} prefix
    for k in marks:
        for i in range(k, cmax + 1):
            dp[i] += dp[i - k]
    return dp


# -- coefficient machinery ----------------------------------------------------


def _dual_pairing(spec: UnitarySpec, v: Vector, a: Vector) -> Fraction:
    return spec.dual.system.pair(v, a)


def v_coefficient_parts(spec: UnitarySpec, nu: Vector, mu: Vector):
    """(num, num_zeros, den, den_zeros) of V_nu at the grid point of mu.

    Zeros are counted from the exact rational criterion, and a factor that
    is exactly zero contributes 0.0 to the float product.
    """
    side = spec.dual
    S = side.system
    x = spec.grid_point(side, mu)
    num, den = 1.0, 1.0
    num_zeros = den_zeros = 0
    for a in S.all_roots:
        p = S.pair(nu, a)
        if p <= 0:
            continue
        assert p <= 2, "shifts of a small weight pair with coroots in [-2, 2]"
        xa = S.pair(x, a)
        ga = side.g_of(a)
        shifts = [(ga, Fraction(0))]
        if p == 2:
            shifts.append((1 + ga, Fraction(1)))
        for sn, sd in shifts:
            vn, zn = spec.sin_pair(side, a, xa + sn)
            vd, zd = spec.sin_pair(side, a, xa + sd)
            num *= vn
            den *= vd
            num_zeros += zn
            den_zeros += zd
    return num, num_zeros, den, den_zeros


def coefficient_V(spec: UnitarySpec, nu: Vector, mu: Vector) -> float:
    """The shift coefficient V_nu(rho_g_hat + mu); denominators must not vanish."""
    num, _, den, dz = v_coefficient_parts(spec, nu, mu)
    if dz:
        raise InvariantViolation(
            "V denominator vanished at an in-range point; the regularity "
            "lemma forbids this for mu and mu+nu inside the cone")
    return num / den


def v_numerator(spec: UnitarySpec, nu: Vector, mu: Vector) -> tuple[float, bool]:
    """Numerator product of V_nu with its exact-zero certificate."""
    num, nz, _, _ = v_coefficient_parts(spec, nu, mu)
    return num, nz > 0


def u_coefficient_parts(spec: UnitarySpec, nu: Vector, eta: Vector, mu: Vector):
    """(num, num_zeros, den, den_zeros) of U_{nu,eta} at the grid point of mu."""
    side = spec.dual
    S = side.system
    x = spec.grid_point(side, mu)
    num, den = 1.0, 1.0
    num_zeros = den_zeros = 0
    for a in S.all_roots:
        if dot(nu, a) != 0:
            continue
        q = S.pair(eta, a)
        if q <= 0:
            continue
        assert q <= 2
        xa = S.pair(x, a)
        ga = side.g_of(a)
        shifts = [(ga, Fraction(0))]
        if q == 2:
            shifts.append((1 - ga, Fraction(1)))
        for sn, sd in shifts:
            vn, zn = spec.sin_pair(side, a, xa + sn)
            vd, zd = spec.sin_pair(side, a, xa + sd)
            num *= vn
            den *= vd
            num_zeros += zn
            den_zeros += zd
    return num, num_zeros, den, den_zeros


OMITTED = None


def coefficient_U(spec: UnitarySpec, nu: Vector, eta: Vector, mu: Vector) -> float | None:
    """U_{nu,eta}(rho_g_hat + mu), or None when the term is omitted.

    Omission happens exactly when the denominator vanishes, which by the
    singularity criterion requires, for some a orthogonal to nu with
    <eta, a^vee> = 2, either <mu, a^vee> = 0 with <rho_g_hat, a^vee> = -1 or
    <mu, a^vee> = m_a c with <rho_g_hat, a^vee> = m_a h_g - 1.
    """
    num, _, den, dz = u_coefficient_parts(spec, nu, eta, mu)
    if dz:
        return OMITTED
    return num / den


def u_denominator_criterion(spec: UnitarySpec, nu: Vector, eta: Vector, mu: Vector) -> bool:
    """Exact-rational transcription of the U-singularity case analysis."""
    side = spec.dual
    S = side.system
    for a in S.all_roots:
        if dot(nu, a) != 0 or S.pair(eta, a) != 2:
            continue
        mu_a = S.pair(mu, a)
        rho_a = S.pair(side.rho_g, a)
        m_a = spec.m_of(side, a)
        if mu_a == 0 and rho_a == -1:
            return True
        if mu_a == m_a * spec.c and rho_a == m_a * spec.h_g - 1:
            return True
    return False


# -- eigenvalue symbols ---------------------------------------------------------


def small_dominant_weights(spec: UnitarySpec) -> tuple[Vector, ...]:
    """All nonzero small dominant weights of the dual lattice.

    The quasi-minuscule weight (highest short root of Rhat) comes first;
    it is the default diagonalization operator.
    """
    cached = spec._cache.get("small_weights")
    if cached is not None:
        return cached
    S = spec.dual.system
    from .rootsys import coroot as _coroot
    top = _coroot(S.highest_short_root)  # highest coroot of Rhat
    marks = []
    for w in S.fundamental_weights:
        m = dot(w, top)
        assert m.denominator == 1 and m > 0
        marks.append(int(m))
    out: list[Vector] = []

    def rec(i, budget, acc):
        if i == len(marks):
            if any(acc):
                out.append(S.from_weight_coords(acc))
            return
        k = 0
        while k * marks[i] <= budget:
            acc.append(k)
            rec(i + 1, budget - k * marks[i], acc)
            acc.pop()
            k += 1

    rec(0, 2, [])
    qm = S.highest_short_root
    out.sort(key=lambda v: (v != qm, S.height(v), S.weight_coords(v)))
    assert out[0] == qm
    result = tuple(out)
    spec._cache["small_weights"] = result
    return result


def spectrum_terms(spec: UnitarySpec, omega: Vector):
    """[(mu, epsilon_{omega,mu}, orbit W mu)] for the eigenvalue symbol E_omega.

    epsilon_{omega,mu} sums t_a^{<eta,a^vee>} over the stabilizer orbit
    W_mu omega, the product running over positive roots of the stabilizer
    subsystem pairing to +-1 with eta; epsilon_{omega,omega} = 1.
    """
    key = ("spectrum", omega)
    cached = spec._cache.get(key)
    if cached is not None:
        return cached
    side = spec.dual
    S = side.system
    if not S.is_dominant(omega):
        raise ConfigurationError("omega must be dominant")
    from .rootsys import classify_weight
    if classify_weight(S, omega) == "not-small":
        raise ConfigurationError("eigenvalue symbols exist for small omega only")
    terms = []
    for mu in dominant_weights_below(S, omega):
        stab_pos = [a for a in S.positive_roots if dot(mu, a) == 0]
        eps = 0j
        for eta in parabolic_stabilizer_orbit(S, mu, omega):
            val = 1 + 0j
            for a in stab_pos:
                p = S.pair(eta, a)
                if p == 1:
                    val *= spec.t_of(side, a)
                elif p == -1:
                    val /= spec.t_of(side, a)
            eps += val
        terms.append((mu, eps, weyl_orbit(S, mu)))
    spec._cache[key] = terms
    return terms


def eigenvalue_E(spec: UnitarySpec, omega: Vector, lam: Vector) -> complex:
    """E_omega evaluated at the primal point rho_g + lam."""
    return eigenvalue_vector(spec, omega, [lam])[0]


def eigenvalue_vector(spec: UnitarySpec, omega: Vector, lams: Sequence[Vector]) -> np.ndarray:
    """E_omega(rho_g + lam) for a batch of primal weights."""
    terms = spectrum_terms(spec, omega)
    pts = np.array([[float(c) for c in spec.grid_point(spec.primal, lam)]
                    for lam in lams], dtype=float)
    out = np.zeros(len(lams), dtype=complex)
    for _mu, eps, orbit in terms:
        om = np.array([[float(c) for c in v] for v in orbit], dtype=float)
        angles = 2.0 * spec.kappa * (om @ pts.T)
        out += eps * np.exp(1j * angles).sum(axis=0)
    return out


# -- finite operator matrices ---------------------------------------------------


@dataclass(eq=False)
class FiniteOperator:
    """Matrix of D_omega on the dual grid: column mu holds the coefficients
    of f(rho_g_hat + mu + nu) so that (D f)(mu) = sum_mu' A[mu', mu] f(mu')."""

    spec: UnitarySpec
    cone: TruncatedCone
    omega: Vector
    matrix: object  # ndarray or scipy sparse
    omission_events: tuple = ()

    def dense(self) -> np.ndarray:
        m = self.matrix
        if isinstance(m, np.ndarray):
            return m
        return m.toarray()

    def action(self) -> np.ndarray:
        """Matrix acting on grid-value column vectors: (D f)_mu = (action @ f)_mu."""
        return self.dense().T

    def apply(self, f: np.ndarray) -> np.ndarray:
        return self.action() @ f


def shift_data(spec: UnitarySpec, omega: Vector):
    """Per-shift tables for D_omega: saturated set, eta orbits."""
    key = ("shifts", omega)
    cached = spec._cache.get(key)
    if cached is not None:
        return cached
    S = spec.dual.system
    shifts = []
    for nu in saturated_set(S, omega):
        _nu_dom, word = dominant_representative(S, nu)
        w_inv_omega = apply_word(S, inverse_word(word), omega)
        etas = parabolic_stabilizer_orbit(S, nu, w_inv_omega)
        shifts.append((nu, etas))
    spec._cache[key] = shifts
    return shifts


def finite_operator(spec: UnitarySpec, cone: TruncatedCone, omega: Vector) -> FiniteOperator:
    """Assemble the matrix of D_omega on the cone grid.

    Out-of-cone shifts are dropped only after the boundary-vanishing check:
    their V numerator must carry an exact rational zero (and evaluate below
    1e-10), otherwise assembly aborts.
    """
    if cone.which != "dual":
        raise ConfigurationError("operators act on the dual-side grid")
    key = ("operator", omega)
    cached = spec._cache.get(key)
    if cached is not None and cached.cone is cone:
        return cached
    n = len(cone)
    dense = n <= _DENSE_LIMIT
    if dense:
        A = np.zeros((n, n), dtype=float)
    else:
        from scipy.sparse import lil_matrix
        A = lil_matrix((n, n), dtype=float)
    omissions = []
    shifts = shift_data(spec, omega)
    for j, mu in enumerate(cone.weights):
        for nu, etas in shifts:
            target = vadd(mu, nu)
            if target not in cone.index:
                numv, exact_zero = v_numerator(spec, nu, mu)
                if not exact_zero and abs(numv) > 1e-10:
                    raise InvariantViolation(
                        f"boundary vanishing failed: out-of-cone shift has "
                        f"V numerator {numv!r}")
                continue
            vval = coefficient_V(spec, nu, mu)
            usum = 0.0
            for eta in etas:
                unum, nz, uden, dz = u_coefficient_parts(spec, nu, eta, mu)
                if dz:
                    omissions.append((mu, nu, eta, nz, dz))
                    continue
                usum += unum / uden
            A[cone.index[target], j] += vval * usum
    if not dense:
        A = A.tocsr()
    op = FiniteOperator(spec=spec, cone=cone, omega=omega, matrix=A,
                        omission_events=tuple(omissions))
    spec._cache[key] = op
    return op


def operator_scale(op: FiniteOperator) -> float:
    m = op.dense()
    return float(np.abs(m).max()) or 1.0


def adjointness_residual(spec: UnitarySpec, cone: TruncatedCone, omega: Vector) -> float:
    """Deviation from <D_omega f, g> = <f, D_{omega*} g> in the weighted grid space.

    omega* = -w0 omega is the dominant representative of -omega; the
    residual is the max-entry defect of W D = D*^T W over the operator
    scale.
    """
    from .polynomials import grid_measure
    S = spec.dual.system
    omega_star, _ = dominant_representative(S, vscale(-1, omega))
    B = finite_operator(spec, cone, omega).action()
    Bstar = finite_operator(spec, cone, omega_star).action()
    w = grid_measure(spec, cone)
    # <Bf, g> = g^H diag(w) B f and <f, B* g> = g^H B*^T diag(w) f (real B*)
    WB = w[:, None] * B
    rhs = Bstar.T * w[None, :]
    scale = max(np.abs(WB).max(), 1e-300)
    return float(np.abs(WB - rhs).max() / scale)


def delta_recurrence_residual(spec: UnitarySpec, cone: TruncatedCone, omega: Vector) -> float:
    """Residual of Delta(mu+nu) V_{-nu}(mu+nu) = Delta(mu) V_nu(mu), all shifts.

    Both sides must be strictly positive when nu lies in the quasi-minuscule
    root orbit or in a minuscule orbit.
    """
    from .polynomials import delta_weight
    from .rootsys import classify_weight
    S = spec.dual.system
    worst = 0.0
    deltas = {mu: delta_weight(spec, mu, "dual") for mu in cone.weights}
    for nu, _etas in shift_data(spec, omega):
        if all(c == 0 for c in nu):
            continue
        nu_dom, _ = dominant_representative(S, nu)
        positive_class = classify_weight(S, nu_dom) in ("minuscule", "quasi-minuscule")
        for mu in cone.weights:
            target = vadd(mu, nu)
            if target not in cone.index:
                continue
            lhs = deltas[target] * coefficient_V(spec, vscale(-1, nu), target)
            rhs = deltas[mu] * coefficient_V(spec, nu, mu)
            scale = max(abs(lhs), abs(rhs), 1e-300)
            worst = max(worst, abs(lhs - rhs) / scale)
            if positive_class and not (lhs > 0 and rhs > 0):
                raise InvariantViolation(
                    f"recurrence sides not positive at mu={mu}, nu={nu}")
    return worst


def commutation_residual(spec: UnitarySpec, cone: TruncatedCone,
                         omega1: Vector, omega2: Vector) -> float:
    """Commutator defect of two operators conjugated into the monomial basis."""
    from .polynomials import monomial_matrix
    D1 = finite_operator(spec, cone, omega1).action()
    D2 = finite_operator(spec, cone, omega2).action()
    M = monomial_matrix(spec, cone)
    Minv = np.linalg.inv(M)
    A1 = Minv @ D1 @ M
    A2 = Minv @ D2 @ M
    comm = A1 @ A2 - A2 @ A1
    scale = max(np.abs(A1 @ A2).max(), 1e-300)
    return float(np.abs(comm).max() / scale)


# -- portable text export -------------------------------------------------------


def export_operator_text(op: FiniteOperator) -> str:
    """Dense/sparse-agnostic text dump: header, cone order, then entries."""
    spec = op.spec
    S = op.cone.side.system
    lines = [
        "# macorth operator export v1",
        f"type {spec.pair.R.label} rank {spec.pair.R.rank} pair {spec.pair.dual_flag}",
        f"g {spec.g.g_short} {spec.g.g_long}",
        f"c {spec.c}",
        "omega " + " ".join(str(c) for c in S.weight_coords(op.omega)),
        f"dim {len(op.cone)}",
    ]
    for mu in op.cone.weights:
        lines.append("w " + " ".join(str(c) for c in S.weight_coords(mu)))
    m = op.dense()
    for i in range(m.shape[0]):
        for j in range(m.shape[1]):
            if m[i, j] != 0.0:
                lines.append(f"{i} {j} {m[i, j]!r} 0.0")
    return "\n".join(lines) + "\n"


def parse_operator_text(text: str):
    """Inverse of export_operator_text: (header dict, weights, dense matrix)."""
    header: dict = {}
    weights = []
    entries = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] in ("type", "g", "c", "omega", "dim"):
            header[parts[0]] = parts[1:]
        elif parts[0] == "w":
            weights.append(tuple(Fraction(p) for p in parts[1:]))
        else:
            i, j, re_, im_ = parts
            entries.append((int(i), int(j), float(re_), float(im_)))
    n = int(header["dim"][0])
    m = np.zeros((n, n), dtype=float)
    for i, j, re_, _ in entries:
        m[i, j] = re_
    return header, weights, m

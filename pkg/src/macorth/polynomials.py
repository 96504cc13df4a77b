"""Macdonald polynomials on the truncated cone and their verification surface.

Construction route (primary): conjugate the finite difference operator of
the quasi-minuscule dual weight into the symmetric-monomial basis through
the grid evaluation matrix, then solve for each eigenvector by
back-substitution along the dominance-compatible order.  Rows whose
eigenvalue gap is poor for the default operator are re-solved with whichever
small weight separates the pair best; an absolute gap floor of 1e-8 below
which no small weight separates a comparable pair is a degeneracy failure.

Cross-check route (independent): the Gram-Schmidt expansion

    p_lam = m_lam - sum_{mu < lam} (<m_lam, p_mu> / <p_mu, p_mu>) p_mu

in the weighted grid inner product.  Agreement of the two routes is itself
one of the verified statements; nothing in the primary route assumes the
orthogonality it is used to test.

Weights, inner products, the S-matrix, Pieri recurrences, Weyl-character
degeneration at unit multiplicity and the eigenvalue nondegeneracy scan all
live here.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .rootsys import (
    ConfigurationError,
    RootSystemData,
    Vector,
    classify_weight,
    dominant_representative,
    dot,
    signed_orbit,
    vadd,
    vscale,
    vsub,
    weyl_orbit,
)
from .macparams import (
    AdmissiblePair,
    Multiplicity,
    UnitarySpec,
    index_pair,
    total_mass_formula,
    unitary_spec,
)
from .operators import (
    FiniteOperator,
    InvariantViolation,
    TruncatedCone,
    coefficient_V,
    eigenvalue_vector,
    finite_operator,
    shift_data,
    small_dominant_weights,
    truncated_cone,
    u_coefficient_parts,
    v_numerator,
)

GAP_FLOOR = 1e-8
COND_LIMIT = 1e12


@dataclass(eq=False)
class SymmetricPolynomial:
    """Finite expansion in the symmetric monomials m_lambda.

    Coefficients are keyed by dominant weights; the leading coefficient is 1
    for Macdonald polynomials and the support sits inside the dominance
    ideal of the leading weight.
    """

    leading: Vector
    coeffs: dict

    def __getitem__(self, mu: Vector) -> complex:
        return self.coeffs.get(mu, 0j)

    def evaluate(self, spec: UnitarySpec, x: Vector) -> complex:
        """Value at an exact point x through e^nu(x) = exp(2i kappa <nu, x>)."""
        R = spec.primal.system
        total = 0j
        for mu, c in self.coeffs.items():
            for nu in weyl_orbit(R, mu):
                total += c * cmath.exp(2j * spec.kappa * float(dot(nu, x)))
        return total


# -- discrete weights ----------------------------------------------------------


def delta_weight(spec: UnitarySpec, lam: Vector, which: str = "primal") -> float:
    """The positive orthogonality weight Delta(lam) of one side.

    Product over the positive roots of sine ratios against rho_g and a
    quotient of trigonometric Pochhammer symbols; every sine argument stays
    strictly inside (0, pi) on the truncated cone, so the value is positive.
    """
    side = spec.side(which)
    S = side.system
    if not S.is_dominant(lam) or dot(lam, side.cone_covector) > spec.c:
        raise ConfigurationError("weight outside the truncated cone")
    x = spec.grid_point(side, lam)
    value = 1.0
    for a in S.positive_roots:
        rho_a = S.pair(side.rho_g, a)
        lam_a = S.pair(lam, a)
        assert lam_a.denominator == 1
        ga = side.g_of(a)
        num, zn = spec.sin_pair(side, a, rho_a + lam_a)
        den, zd = spec.sin_pair(side, a, rho_a)
        if zn or zd:
            raise InvariantViolation("Delta sine factor vanished inside the cone")
        value *= num / den
        for j in range(int(lam_a)):
            pn, z1 = spec.sin_pair(side, a, rho_a + ga + j)
            pd, z2 = spec.sin_pair(side, a, rho_a + 1 - ga + j)
            if z1 or z2:
                raise InvariantViolation("Delta Pochhammer factor vanished")
            value *= pn / pd
    return value


def grid_measure(spec: UnitarySpec, cone: TruncatedCone) -> np.ndarray:
    key = ("measure", cone.which)
    cached = spec._cache.get(key)
    if cached is None:
        cached = np.array([delta_weight(spec, mu, cone.which) for mu in cone.weights])
        spec._cache[key] = cached
    return cached


def principal_specialization(spec: UnitarySpec, lam: Vector) -> float:
    """p_lam evaluated at rho_g_hat, by the closed product formula; positive."""
    side = spec.primal
    S = side.system
    value = 1.0
    for a in S.positive_roots:
        rho_a = S.pair(side.rho_g, a)
        ga = side.g_of(a)
        l = S.pair(lam, a)
        assert l.denominator == 1 and l >= 0
        for j in range(int(l)):
            num, zn = spec.sin_pair(side, a, rho_a + ga + j)
            den, zd = spec.sin_pair(side, a, rho_a + j)
            if zn or zd:
                raise InvariantViolation("specialization factor vanished in-cone")
            value *= num / den
    return value


# -- grid evaluation -----------------------------------------------------------


def _float_rows(vectors: Iterable[Vector]) -> np.ndarray:
    return np.array([[float(c) for c in v] for v in vectors], dtype=float)


def monomial_values(spec: UnitarySpec, lam: Vector, points: np.ndarray) -> np.ndarray:
    """m_lam at an array of (already floated) points."""
    orbit = _float_rows(weyl_orbit(spec.primal.system, lam))
    angles = 2.0 * spec.kappa * (orbit @ points.T)
    return np.exp(1j * angles).sum(axis=0)


def monomial_matrix(spec: UnitarySpec, cone: TruncatedCone) -> np.ndarray:
    """M[i, j] = m_{lambda_j}(rho_g_hat + mu_i) over dual grid x primal cone."""
    key = ("monomial_matrix",)
    cached = spec._cache.get(key)
    if cached is not None:
        return cached
    cone_p = truncated_cone(spec, "primal")
    pts = _float_rows(cone.grid_points())
    M = np.empty((len(cone), len(cone_p)), dtype=complex)
    for j, lam in enumerate(cone_p.weights):
        M[:, j] = monomial_values(spec, lam, pts)
    spec._cache[key] = M
    return M


# -- the Macdonald system -------------------------------------------------------


class DegenerateSpectrumError(InvariantViolation):
    """No small weight separates a comparable pair of cone weights."""


@dataclass(eq=False)
class ConstructionResult:
    coeff_matrix: np.ndarray      # unit upper triangular in the cone order
    grid_values: np.ndarray       # p_lam at the dual grid points, column per lam
    normalized_values: np.ndarray  # P_lam = p_lam / p_lam(rho_g_hat)
    specializations: np.ndarray   # p_lam(rho_g_hat), complex as evaluated
    condition_number: float
    min_gap: float
    used_omegas: tuple
    unresolved_pairs: tuple


class MacdonaldSystem:
    """All per-spec state: cones, measures, operators, constructed bases."""

    def __init__(self, spec: UnitarySpec):
        self.spec = spec
        self.cone_primal = truncated_cone(spec, "primal")
        self.cone_dual = truncated_cone(spec, "dual")
        if len(self.cone_primal) != len(self.cone_dual):
            raise InvariantViolation("|P_c| != |P_c_hat|")

    # measures ---------------------------------------------------------------

    @cached_property
    def delta_primal(self) -> np.ndarray:
        return grid_measure(self.spec, self.cone_primal)

    @cached_property
    def delta_dual(self) -> np.ndarray:
        return grid_measure(self.spec, self.cone_dual)

    @cached_property
    def N0(self) -> float:
        """Brute-force total mass (the norm checks use this, not the tables)."""
        return float(self.delta_dual.sum())

    @cached_property
    def N0_primal(self) -> float:
        return float(self.delta_primal.sum())

    def N0_formula(self, precision: str = "double") -> float:
        return total_mass_formula(self.spec, precision)

    # construction -----------------------------------------------------------

    @cached_property
    def construction(self) -> ConstructionResult:
        spec = self.spec
        cone_p, cone_d = self.cone_primal, self.cone_dual
        n = len(cone_p)
        M = monomial_matrix(spec, cone_d)
        cond = float(np.linalg.cond(M))
        if cond > COND_LIMIT:
            raise InvariantViolation(
                f"evaluation matrix numerically singular (cond {cond:.3e})")
        Minv = np.linalg.inv(M)
        leq = cone_p.dominance_matrix()

        omegas = small_dominant_weights(spec)
        evecs = {w: eigenvalue_vector(spec, w, cone_p.weights) for w in omegas}

        mono_ops: dict = {}

        def mono_op(w):
            if w not in mono_ops:
                B = finite_operator(spec, cone_d, w).action()
                mono_ops[w] = Minv @ B @ M
            return mono_ops[w]

        C = np.zeros((n, n), dtype=complex)
        min_gap = math.inf
        unresolved = []
        for j in range(n):
            C[j, j] = 1.0
            for i in range(j - 1, -1, -1):
                if not leq[i, j]:
                    continue
                best_gap, best_w = 0.0, None
                for w in omegas:
                    gap = abs(evecs[w][j] - evecs[w][i])
                    if gap > best_gap:
                        best_gap, best_w = gap, w
                min_gap = min(min_gap, best_gap)
                if best_gap < GAP_FLOOR:
                    unresolved.append((cone_p.weights[i], cone_p.weights[j]))
                    if not spec.allow_degenerate:
                        raise DegenerateSpectrumError(
                            f"no small weight separates {cone_p.weights[i]} "
                            f"and {cone_p.weights[j]}")
                    continue
                A = mono_op(best_w)
                num = A[i, i + 1:j + 1] @ C[i + 1:j + 1, j]
                C[i, j] = num / (A[j, j] - A[i, i])
        grid_values = M @ C
        zero_pos = cone_d.index[tuple(Fraction(0) for _ in
                                      range(cone_d.side.system.ambient))]
        specializations = grid_values[zero_pos, :].copy()
        normalized = grid_values / specializations[None, :]
        return ConstructionResult(
            coeff_matrix=C,
            grid_values=grid_values,
            normalized_values=normalized,
            specializations=specializations,
            condition_number=cond,
            min_gap=min_gap if min_gap is not math.inf else float("nan"),
            used_omegas=tuple(mono_ops.keys()),
            unresolved_pairs=tuple(unresolved),
        )

    def polynomials(self) -> list[SymmetricPolynomial]:
        C = self.construction.coeff_matrix
        out = []
        for j, lam in enumerate(self.cone_primal.weights):
            coeffs = {}
            for i in range(j + 1):
                if i == j or C[i, j] != 0:
                    coeffs[self.cone_primal.weights[i]] = complex(C[i, j])
            out.append(SymmetricPolynomial(leading=lam, coeffs=coeffs))
        return out

    @cached_property
    def gram_schmidt_matrix(self) -> np.ndarray:
        """Independent coefficient matrix from weighted Gram-Schmidt on the grid."""
        cone_p, cone_d = self.cone_primal, self.cone_dual
        n = len(cone_p)
        M = monomial_matrix(self.spec, cone_d)
        w = self.delta_dual
        leq = cone_p.dominance_matrix()
        C = np.zeros((n, n), dtype=complex)
        grid = np.zeros((len(cone_d), n), dtype=complex)
        norms = np.zeros(n, dtype=float)
        for j in range(n):
            C[j, j] = 1.0
            gj = M[:, j].copy()
            for i in range(j):
                if not leq[i, j]:
                    continue
                coef = np.sum(M[:, j] * np.conj(grid[:, i]) * w) / norms[i]
                C[:, j] -= coef * C[:, i]
                gj -= coef * grid[:, i]
            grid[:, j] = gj
            norms[j] = float(np.real(np.sum(gj * np.conj(gj) * w)))
        return C

    # inner products and residuals --------------------------------------------

    def inner_product(self, f: np.ndarray, g: np.ndarray) -> complex:
        return complex(np.sum(f * np.conj(g) * self.delta_dual))

    @cached_property
    def gram(self) -> np.ndarray:
        """G[j', j] = <P_j, P_j'> over the dual grid."""
        PX = self.construction.normalized_values
        return PX.conj().T @ (self.delta_dual[:, None] * PX)

    def orthogonality_offdiag(self) -> float:
        G = self.gram
        off = G - np.diag(np.diag(G))
        return float(np.abs(off).max() / self.N0)

    def dual_orthogonality_offdiag(self) -> float:
        """Off-diagonal defect of the lambda-summed relation on the dual grid."""
        PX = self.construction.normalized_values
        K = (PX * self.delta_primal[None, :]) @ PX.conj().T
        off = K - np.diag(np.diag(K))
        return float(np.abs(off).max() / self.N0)

    def norm_identity_residual(self) -> float:
        G = self.gram
        diags = np.real(np.diag(G))
        return float(np.abs(self.delta_primal * diags - self.N0).max() / self.N0)

    def gram_agreement(self) -> float:
        C = self.construction.coeff_matrix
        return float(np.abs(C - self.gram_schmidt_matrix).max())

    def eigen_residual(self) -> float:
        """Joint eigenfunction defect over every small dual weight."""
        spec = self.spec
        worst = 0.0
        for w in small_dominant_weights(spec):
            B = finite_operator(spec, self.cone_dual, w).action()
            E = eigenvalue_vector(spec, w, self.cone_primal.weights)
            P = self.construction.grid_values
            R = B @ P - P * E[None, :]
            scale = np.abs(P).max(axis=0) * (1.0 + np.abs(E))
            worst = max(worst, float((np.abs(R).max(axis=0) / scale).max()))
        return worst

    def specialization_residual(self) -> float:
        """Evaluated p_lam(rho_g_hat) against the closed product formula."""
        vals = self.construction.specializations
        worst = 0.0
        for j, lam in enumerate(self.cone_primal.weights):
            ref = principal_specialization(self.spec, lam)
            worst = max(worst, abs(vals[j] - ref) / abs(ref))
        return worst


# -- module-level operation surface ---------------------------------------------


def construct_macdonald(spec: UnitarySpec) -> tuple[list[SymmetricPolynomial], dict]:
    """Grid-eigenproblem construction of p_lam for all lam in the cone."""
    system = MacdonaldSystem(spec)
    res = system.construction
    diag = {
        "condition_number": res.condition_number,
        "min_gap": res.min_gap,
        "used_omegas": res.used_omegas,
        "unresolved_pairs": res.unresolved_pairs,
    }
    return system.polynomials(), diag


def gram_schmidt_macdonald(spec: UnitarySpec) -> list[SymmetricPolynomial]:
    system = MacdonaldSystem(spec)
    C = system.gram_schmidt_matrix
    out = []
    for j, lam in enumerate(system.cone_primal.weights):
        coeffs = {system.cone_primal.weights[i]: complex(C[i, j])
                  for i in range(j + 1) if i == j or C[i, j] != 0}
        out.append(SymmetricPolynomial(leading=lam, coeffs=coeffs))
    return out


def discrete_inner_product(spec: UnitarySpec, f, g) -> complex:
    """Weighted grid pairing of polynomials or grid-value vectors."""
    system = MacdonaldSystem(spec)
    fv = _as_grid_vector(spec, system, f)
    gv = _as_grid_vector(spec, system, g)
    return system.inner_product(fv, gv)


def _as_grid_vector(spec, system, f) -> np.ndarray:
    if isinstance(f, np.ndarray):
        return f
    if isinstance(f, SymmetricPolynomial):
        pts = _float_rows(system.cone_dual.grid_points())
        total = np.zeros(len(system.cone_dual), dtype=complex)
        for mu, c in f.coeffs.items():
            total += c * monomial_values(spec, mu, pts)
        return total
    raise TypeError("expected SymmetricPolynomial or grid vector")


def norm_identity_residual(spec: UnitarySpec) -> float:
    return MacdonaldSystem(spec).norm_identity_residual()


# -- S-matrix ---------------------------------------------------------------------


@dataclass(eq=False)
class SMatrixResult:
    matrix: np.ndarray
    unitarity_defect: float
    duality_defect: float | None


def s_matrix(spec: UnitarySpec, check_duality: bool = True) -> SMatrixResult:
    """S[lam, mu] = sqrt(Delta(lam) Delta_hat(mu) / N0) P_lam(grid mu).

    Unitarity encodes both orthogonality relations at once; the duality
    defect compares against the matrix of the swapped pair.
    """
    system = MacdonaldSystem(spec)
    PX = system.construction.normalized_values  # rows mu, cols lam
    S = (np.sqrt(system.delta_primal)[:, None] *
         np.sqrt(system.delta_dual)[None, :] / math.sqrt(system.N0)) * PX.T
    n = S.shape[0]
    defect = float(np.abs(S.conj().T @ S - np.eye(n)).max())
    duality = None
    if check_duality:
        swapped = MacdonaldSystem(spec.swap())
        if swapped.cone_primal.weights != system.cone_dual.weights:
            raise InvariantViolation("swapped cone does not match the dual cone")
        PXhat = swapped.construction.normalized_values
        Shat = (np.sqrt(swapped.delta_primal)[:, None] *
                np.sqrt(swapped.delta_dual)[None, :] / math.sqrt(swapped.N0)) * PXhat.T
        duality = float(np.abs(Shat.T - S).max())
    return SMatrixResult(matrix=S, unitarity_defect=defect, duality_defect=duality)


# -- Pieri ------------------------------------------------------------------------


def pieri_residual(spec: UnitarySpec, omega: Vector) -> float:
    """Residual of the finite Pieri recurrence for a small primal weight omega.

    E_hat_omega(x) P_lam(x) must equal the sum over in-cone shifts lam+nu of
    V_hat U_hat coefficients (evaluated at rho_g + lam) times P_{lam+nu}(x),
    at every point x of the dual grid.
    """
    system = MacdonaldSystem(spec)
    swapped = spec.swap()
    cls = classify_weight(spec.primal.system, omega)
    if cls == "not-small":
        raise ConfigurationError("Pieri identities require a small weight")
    PX = system.construction.normalized_values
    Ehat = eigenvalue_vector(swapped, omega, system.cone_dual.weights)
    lhs = Ehat[:, None] * PX
    rhs = np.zeros_like(PX)
    shifts = shift_data(swapped, omega)
    for j, lam in enumerate(system.cone_primal.weights):
        for nu, etas in shifts:
            target = vadd(lam, nu)
            if target not in system.cone_primal.index:
                continue
            vval = coefficient_V(swapped, nu, lam)
            usum = 0.0
            for eta in etas:
                unum, _, uden, dz = u_coefficient_parts(swapped, nu, eta, lam)
                if dz:
                    continue
                usum += unum / uden
            rhs[:, j] += vval * usum * PX[:, system.cone_primal.index[target]]
    scale = max(1.0, float(np.abs(lhs).max()))
    return float(np.abs(lhs - rhs).max() / scale)


def quasi_minuscule_path(spec: UnitarySpec, lam: Vector) -> list[Vector]:
    """A path 0 -> ... -> lam inside the cone whose increments are positive
    roots from the short-root orbit or minuscule fundamental weights.

    Returns the weights after the origin; the zero weight yields [].
    """
    R = spec.primal.system
    cone = truncated_cone(spec, "primal")
    if lam not in cone.index:
        raise ConfigurationError("weight outside the truncated cone")
    theta = R.highest_short_root
    theta_pos = [r for r in weyl_orbit(R, theta) if r in set(R.positive_roots)]
    classes = [classify_weight(R, w) for w in R.fundamental_weights]
    zero = tuple(Fraction(0) for _ in range(R.ambient))

    descending = []
    cur = lam
    while cur != zero:
        descending.append(cur)
        coords = R.weight_coords(cur)
        step = None
        for j, c in enumerate(coords):
            if c > 0 and classes[j] not in ("minuscule", "quasi-minuscule"):
                # descend the fundamental-weight chain by a short positive root
                for j2 in range(R.rank):
                    if j2 == j:
                        continue
                    diff = vsub(R.fundamental_weights[j],
                                R.fundamental_weights[j2])
                    if diff in theta_pos:
                        step = diff
                        break
                if step is None and R.fundamental_weights[j] in theta_pos:
                    step = R.fundamental_weights[j]
                if step is not None:
                    break
        if step is None:
            j = next(j for j, c in enumerate(coords) if c > 0)
            step = R.fundamental_weights[j]
            if classes[j] == "quasi-minuscule":
                assert step == theta
        cur = vsub(cur, step)
        if not R.is_dominant(cur) or cur not in cone.index:
            raise InvariantViolation(f"path left the cone at {cur}")
    return list(reversed(descending))


# -- Weyl characters at unit multiplicity -----------------------------------------


def weyl_character_values(spec: UnitarySpec, lam: Vector,
                          points: np.ndarray) -> np.ndarray:
    """chi_{rho + lam} at an array of points, via the signed regular orbit."""
    R = spec.primal.system
    shifted = vadd(R.rho, lam)
    total = np.zeros(points.shape[0], dtype=complex)
    orbit = signed_orbit(R, shifted)
    pts_T = points.T
    vecs = _float_rows([v for v, _ in orbit])
    signs = np.array([s for _, s in orbit], dtype=float)
    angles = 2.0 * spec.kappa * (vecs @ pts_T)
    total = (signs[:, None] * np.exp(1j * angles)).sum(axis=0)
    return total


def weyl_orthogonality_check(pair: AdmissiblePair, c: int) -> dict:
    """Antisymmetric-monomial orthogonality at unit multiplicity.

    Verifies that the chi_{rho+lam} sums vanish off-diagonal, that diagonal
    sums equal Ind(R, Rhat) (hbar + c)^n, and the derived trigonometric
    identity tying N_c to (hbar + c)^n.
    """
    spec = unitary_spec(pair, Multiplicity.of(1, 1), c)
    cone_p = truncated_cone(spec, "primal")
    cone_d = truncated_cone(spec, "dual")
    pts = _float_rows(cone_d.grid_points())
    n = len(cone_p)
    X = np.empty((n, len(cone_d)), dtype=complex)
    for j, lam in enumerate(cone_p.weights):
        X[j, :] = weyl_character_values(spec, lam, pts)
    G = X.conj().T @ X  # G[mu, mu~] = sum_lam conj(chi(mu)) chi(mu~)
    target = index_pair(pair) * float(spec.T) ** pair.R.rank
    off = G - np.diag(np.diag(G))
    off_defect = float(np.abs(off).max() / target)
    diag_defect = float(np.abs(np.real(np.diag(G)) - target).max() / target)

    # trigonometric identity: N_c * prod sin(kappa_a <rho, a^vee>)
    side = spec.primal
    S = side.system
    prod = 1.0
    for a in S.positive_roots:
        v, z = spec.sin_pair(side, a, S.pair(S.rho, a))
        assert not z
        prod *= v
    nc = total_mass_formula(spec) / pair.R.index
    trig_target = (index_pair(pair) / pair.R.index) * float(spec.T) ** pair.R.rank
    trig_defect = abs(nc * prod - trig_target) / trig_target
    return {
        "offdiag_defect": off_defect,
        "diag_defect": diag_defect,
        "trig_identity_defect": trig_defect,
        "diag_target": target,
        "pass": off_defect <= 1e-8 and diag_defect <= 1e-8 and trig_defect <= 1e-8,
    }


# -- nondegeneracy scan ------------------------------------------------------------


def nondegeneracy_scan(pair: AdmissiblePair, c: int,
                       g_samples: Sequence[tuple] = ((Fraction(7, 10), Fraction(11, 20)),
                                                     (Fraction(13, 10), Fraction(17, 20)),
                                                     (Fraction(2, 5), Fraction(9, 10))),
                       gap_floor: float = GAP_FLOOR,
                       allow_degenerate: bool = False) -> dict:
    """Pairwise eigenvalue separation over all small dual weights.

    A pair lam != mu counts as separated when some small weight keeps
    |E_omega(rho_g+lam) - E_omega(rho_g+mu)| above the floor at every g
    sample.  For E7 with c in 6Z the degenerate pairs are reported and
    checked to differ by a multiple of alpha_1+alpha_2+alpha_6 and to lie
    outside the shrunken cone with level ceil(11c/12).
    """
    specs = [unitary_spec(pair, Multiplicity.of(gs, gl), c,
                          allow_degenerate=allow_degenerate)
             for gs, gl in g_samples]
    cone = truncated_cone(specs[0], "primal")
    n = len(cone)
    omegas = small_dominant_weights(specs[0])
    # gaps[w][s] = eigenvalue vector for omega w at sample s
    evecs = []
    for w in omegas:
        evecs.append([eigenvalue_vector(s, w, cone.weights) for s in specs])
    min_gap = math.inf
    degenerate = []
    for j in range(n):
        for i in range(j):
            best = 0.0
            for vec_per_sample in evecs:
                worst_sample = min(abs(v[j] - v[i]) for v in vec_per_sample)
                best = max(best, worst_sample)
            min_gap = min(min_gap, best)
            if best <= gap_floor:
                degenerate.append((cone.weights[i], cone.weights[j], best))
    report = {
        "pairs": n * (n - 1) // 2,
        "degenerate": degenerate,
        "min_gap": min_gap if min_gap is not math.inf else float("nan"),
        "omegas": len(omegas),
        "pass": not degenerate,
    }
    if degenerate and pair.R.label == "E7" and c % 6 == 0:
        R = pair.R
        nu = vadd(vadd(R.simple_roots[0], R.simple_roots[1]), R.simple_roots[5])
        c_tilde = -((-11 * c) // 12)  # ceil(11c/12)
        cov = specs[0].primal.cone_covector
        ok = True
        for lam, mu, _ in degenerate:
            diff = vsub(lam, mu)
            ratio = None
            for k in range(1, 2 * c + 1):
                if diff == vscale(k, nu) or diff == vscale(-k, nu):
                    ratio = k
                    break
            inside_line = ratio is not None
            outside_small_cone = (dot(lam, cov) > c_tilde and dot(mu, cov) > c_tilde)
            ok = ok and inside_line and outside_small_cone
        report["e7_degenerations_on_line"] = ok
        report["c_tilde"] = c_tilde
        report["pass"] = ok
    return report


# -- plain-text polynomial export ----------------------------------------------------


def export_polynomial_table(spec: UnitarySpec) -> str:
    """Coefficient table: leading weight, then weight/coefficient pairs."""
    system = MacdonaldSystem(spec)
    S = spec.primal.system
    C = system.construction.coeff_matrix
    lines = [
        "# macorth polynomial table v1",
        f"type {spec.pair.R.label} rank {spec.pair.R.rank} pair {spec.pair.dual_flag}",
        f"g {spec.g.g_short} {spec.g.g_long}",
        f"c {spec.c}",
    ]
    for j, lam in enumerate(system.cone_primal.weights):
        parts = ["poly", _coords_str(S, lam)]
        for i in range(j + 1):
            val = C[i, j]
            if i != j and abs(val) < 1e-14:
                continue
            mu = system.cone_primal.weights[i]
            parts.append(f"| {_coords_str(S, mu)} {val.real:.10e} {val.imag:.10e}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def _coords_str(S: RootSystemData, v: Vector) -> str:
    return " ".join(str(int(c)) for c in S.weight_coords(v))


def parse_polynomial_table(text: str):
    """(header dict, list of (leading coords, {coords: complex}))."""
    header: dict = {}
    polys = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] in ("type", "g", "c"):
            header[parts[0]] = parts[1:]
            continue
        assert parts[0] == "poly"
        rest = " ".join(parts[1:])
        fields = [f.strip() for f in rest.split("|")]
        lead = tuple(int(t) for t in fields[0].split())
        coeffs = {}
        for f in fields[1:]:
            toks = f.split()
            coords = tuple(int(t) for t in toks[:-2])
            coeffs[coords] = complex(float(toks[-2]), float(toks[-1]))
        polys.append((lead, coeffs))
    return header, polys

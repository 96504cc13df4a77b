"""Admissible pairs, unitary parameter specialization, and mass formulas.

An admissible pair is a root system R together with a partner Rhat equal to
R or to its dual R^vee; the hat involution swaps the two.  A multiplicity
function g assigns a positive rational to each (W x Z2)-orbit of
R u Rhat.  The unitary specialization fixes

    kappa = pi / (u_phi (h_g + c)),   q_a = exp(2i kappa_a),
    t_a = exp(2i kappa_a g_a),        kappa_a = kappa u_a,

which places all parameters on the unit circle and enforces the truncation
relation exactly (the combined phase is an exact integer multiple of 2 pi).

All lattice-side decisions (zero detection for sine factors, regularity of
g, moment bounds) are made in exact rational arithmetic; floating point
enters only in the final sine evaluations.  The closed-form total-mass
products are encoded as data: lists of trigonometric Pochhammer factor
descriptors, shipped alongside the package as a checksummed plain-text
table.
"""

from __future__ import annotations

import cmath
import hashlib
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Iterable, Sequence

from .rootsys import (
    ConfigurationError,
    RootSystemData,
    Vector,
    build_root_system,
    coroot,
    dot,
    dual_root_system,
    norm2,
    vadd,
    vscale,
)

SIMPLY_LACED = ("A", "D", "E6", "E7", "E8")


def parse_rational(text) -> Fraction:
    """Accept only integer or p/q strings; decimal input is rejected."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    s = str(text).strip()
    if "." in s or "e" in s.lower():
        raise ConfigurationError(f"rational required (got {text!r}); write p/q")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigurationError(f"cannot parse rational {text!r}") from exc


# -- admissible pairs --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AdmissiblePair:
    """A root system R with the choice Rhat in {R, R^vee}.

    u_a = |hat(a)| / |a^vee| is constant on norm classes and exactly
    rational: u_a = |a|^2 / 2 when Rhat = R and u_a = 1 when Rhat = R^vee.
    """

    R: RootSystemData
    Rhat: RootSystemData
    dual_flag: str  # 'self' | 'dual'

    def __repr__(self) -> str:
        return f"AdmissiblePair({self.R.label}{self.R.rank}, {self.dual_flag})"

    @property
    def simply_laced(self) -> bool:
        return self.R.label in SIMPLY_LACED

    def hat_primal(self, a: Vector) -> Vector:
        """Hat involution applied to a root of R."""
        return a if self.dual_flag == "self" else coroot(a)

    def hat_dual(self, a: Vector) -> Vector:
        """Hat involution applied to a root of Rhat."""
        return a if self.dual_flag == "self" else coroot(a)

    def u_primal(self, a: Vector) -> Fraction:
        if self.dual_flag == "self":
            return norm2(a) / 2
        return Fraction(1)

    def u_dual(self, a: Vector) -> Fraction:
        if self.dual_flag == "self":
            return norm2(a) / 2
        return Fraction(1)

    @property
    def u_phi(self) -> Fraction:
        return self.u_primal(self.R.highest_root)

    @property
    def u_theta(self) -> Fraction:
        return self.u_primal(self.R.highest_short_root)

    @property
    def m(self) -> int:
        m = self.u_phi / self.u_theta
        assert m.denominator == 1 and int(m) in (1, 2, 3)
        return int(m)

    @property
    def psi(self) -> Vector:
        """Highest root of Rhat."""
        return self.Rhat.highest_root

    @property
    def psi_hat(self) -> Vector:
        """Hat of psi, a root of R (phi when Rhat = R, theta when Rhat = R^vee)."""
        return self.hat_dual(self.psi)

    def swap(self) -> "AdmissiblePair":
        return AdmissiblePair(R=self.Rhat, Rhat=self.R, dual_flag=self.dual_flag)


def admissible_pair(label: str, rank: int, dual_flag: str = "self") -> AdmissiblePair:
    if dual_flag not in ("self", "dual"):
        raise ConfigurationError("pair flag must be 'self' or 'dual'")
    R = build_root_system(label, rank)
    Rhat = R if dual_flag == "self" else dual_root_system(R)
    return AdmissiblePair(R=R, Rhat=Rhat, dual_flag=dual_flag)


@dataclass(frozen=True)
class Multiplicity:
    """Positive rational multiplicity per root-length orbit (g_theta, g_phi)."""

    g_short: Fraction
    g_long: Fraction

    def __post_init__(self):
        for g in (self.g_short, self.g_long):
            if not isinstance(g, Fraction):
                raise ConfigurationError("multiplicities must be exact rationals")
            if g <= 0:
                raise ConfigurationError("multiplicities must be positive")

    @staticmethod
    def of(g_short, g_long=None) -> "Multiplicity":
        gs = parse_rational(g_short)
        gl = gs if g_long is None else parse_rational(g_long)
        return Multiplicity(g_short=gs, g_long=gl)


def rho_weights(pair: AdmissiblePair, g: Multiplicity):
    """(rho_g, rho_theta, rho_{phi minus theta}, rho) for the primal system.

    rho_theta is the half-sum of short positive roots and the long-root
    complement satisfies rho_{phi\\theta} = rho - rho_theta; all roots count
    as short when R is simply laced.
    """
    R = pair.R
    zero = tuple(Fraction(0) for _ in range(R.ambient))
    short = zero
    long_ = zero
    for a in R.positive_roots:
        if R.is_short(a):
            short = vadd(short, a)
        else:
            long_ = vadd(long_, a)
    rho_theta = vscale(Fraction(1, 2), short)
    rho_long = vscale(Fraction(1, 2), long_)
    gs, gl = _resolved_g(pair, g)
    rho_g = vadd(vscale(gs, rho_theta), vscale(gl, rho_long))
    return rho_g, rho_theta, rho_long, R.rho


def _resolved_g(pair: AdmissiblePair, g: Multiplicity) -> tuple[Fraction, Fraction]:
    """Simply laced systems carry a single orbit; g_long collapses onto g_short."""
    if pair.simply_laced:
        return g.g_short, g.g_short
    return g.g_short, g.g_long


def h_g_value(pair: AdmissiblePair, g: Multiplicity) -> Fraction:
    """h_g = <rho_g, psi_hat^vee> + g_psi, the exact rational truncation scale."""
    rho_g, _, _, _ = rho_weights(pair, g)
    psi_hat = pair.psi_hat
    gs, gl = _resolved_g(pair, g)
    g_psi = gs if pair.R.is_short(psi_hat) else gl
    return pair.R.pair(rho_g, psi_hat) + g_psi


# -- the unitary specialization ----------------------------------------------


@dataclass(frozen=True, eq=False)
class Side:
    """Per-side bundle: one system of the pair with its u, g and rho_g data."""

    system: RootSystemData
    rho_g: Vector
    u_short: Fraction
    u_long: Fraction
    g_short: Fraction
    g_long: Fraction
    cone_covector: Vector  # lambda in the cone iff <lambda, cone_covector> <= c

    def u_of(self, a: Vector) -> Fraction:
        return self.u_short if self.system.is_short(a) else self.u_long

    def g_of(self, a: Vector) -> Fraction:
        return self.g_short if self.system.is_short(a) else self.g_long


@dataclass(frozen=True, eq=False)
class UnitarySpec:
    """An admissible pair with multiplicities, truncation level and kappa."""

    pair: AdmissiblePair
    g: Multiplicity
    c: int
    h_g: Fraction
    T: Fraction  # h_g + c
    u_phi: Fraction
    kappa: float
    primal: Side
    dual: Side
    allow_degenerate: bool = False
    _cache: dict = field(default_factory=dict, repr=False)

    def __repr__(self) -> str:
        p = self.pair
        return (f"UnitarySpec({p.R.label}{p.R.rank} {p.dual_flag}, "
                f"g=({self.g.g_short},{self.g.g_long}), c={self.c})")

    def side(self, which: str) -> Side:
        return self.primal if which == "primal" else self.dual

    def m_of(self, side: Side, a: Vector) -> Fraction:
        return self.u_phi / side.u_of(a)

    def kappa_of(self, side: Side, a: Vector) -> float:
        return math.pi / float(self.m_of(side, a) * self.T)

    def sin_pair(self, side: Side, a: Vector, argument: Fraction) -> tuple[float, bool]:
        """sin(kappa_a * argument) with exact zero detection.

        The sine vanishes iff argument is a multiple of m_a (h_g + c), a
        condition decided in rational arithmetic before any float enters.
        """
        r = argument / (self.m_of(side, a) * self.T)
        if r.denominator == 1:
            return 0.0, True
        return math.sin(math.pi * float(r)), False

    def q_of(self, side: Side, a: Vector) -> complex:
        return cmath.exp(2j * self.kappa * float(side.u_of(a)))

    def t_of(self, side: Side, a: Vector) -> complex:
        return cmath.exp(2j * self.kappa * float(side.u_of(a) * side.g_of(a)))

    def grid_point(self, side: Side, mu: Vector) -> Vector:
        return vadd(side.rho_g, mu)

    def swap(self) -> "UnitarySpec":
        """The spec of the swapped pair (Rhat, R); kappa is unchanged."""
        cached = self._cache.get("swap")
        if cached is not None:
            return cached
        swapped = UnitarySpec(
            pair=self.pair.swap(),
            g=self.g,
            c=self.c,
            h_g=self.h_g,
            T=self.T,
            u_phi=self.u_phi,
            kappa=self.kappa,
            primal=self.dual,
            dual=self.primal,
            allow_degenerate=self.allow_degenerate,
        )
        swapped._cache["swap"] = self
        self._cache["swap"] = swapped
        return swapped

    def truncation_phase(self) -> Fraction:
        """Exact phase/(2 pi) of the truncation product; an integer by construction."""
        pair = self.pair
        _, rho_theta, rho_long, _ = rho_weights(pair, self.g)
        psi_hat_vee = coroot(pair.psi_hat)
        gs, gl = _resolved_g(pair, self.g)
        g_psi = gs if pair.R.is_short(pair.psi_hat) else gl
        num = (gs * dot(rho_theta, psi_hat_vee)
               + gl * dot(rho_long, psi_hat_vee)
               + g_psi + self.c)
        return num / self.T

    def truncation_residual(self) -> float:
        """|t_theta^{m<rho_theta,psi_hat_vee>} t_phi^{<rho_phi\\theta,psi_hat_vee>} t_psi q_phi^c - 1|."""
        pair = self.pair
        _, rho_theta, rho_long, _ = rho_weights(pair, self.g)
        psi_hat_vee = coroot(pair.psi_hat)
        gs, gl = _resolved_g(pair, self.g)
        g_psi = gs if pair.R.is_short(pair.psi_hat) else gl
        m = Fraction(pair.m)
        # phase of each unitary factor, in units of 2 pi
        phase = (pair.u_theta * gs * m * dot(rho_theta, psi_hat_vee)
                 + pair.u_phi * gl * dot(rho_long, psi_hat_vee)
                 + pair.u_phi * g_psi
                 + pair.u_phi * self.c) / (pair.u_phi * self.T)
        return abs(cmath.exp(2j * math.pi * float(phase)) - 1.0)


def unitary_spec(pair: AdmissiblePair, g: Multiplicity, c: int,
                 allow_degenerate: bool = False) -> UnitarySpec:
    """Build the unitary specialization kappa = pi/(u_phi (h_g + c)).

    For R of type E7 a truncation level that is a proper multiple of 6 is
    refused (simultaneous spectral degenerations occur there) unless
    allow_degenerate is set.
    """
    if not isinstance(c, int) or c <= 1:
        raise ConfigurationError("truncation level c must be an integer > 1")
    if pair.R.label == "E7" and c % 6 == 0 and c >= 12 and not allow_degenerate:
        raise ConfigurationError(
            "E7 with c a proper multiple of 6 has degenerate spectra; "
            "pass allow_degenerate to override")

    gs, gl = _resolved_g(pair, g)
    g = Multiplicity(g_short=gs, g_long=gl)
    h_g = h_g_value(pair, g)
    T = h_g + c
    u_phi = pair.u_phi
    kappa = math.pi / float(u_phi * T)

    rho_g, _, _, _ = rho_weights(pair, g)
    R, Rhat = pair.R, pair.Rhat

    # g on Rhat follows the hat involution: classes swap under dualization.
    if pair.dual_flag == "self":
        dual_gs, dual_gl = gs, gl
        dual_us, dual_ul = pair.u_theta, pair.u_phi
    else:
        dual_gs, dual_gl = (gs, gl) if pair.simply_laced else (gl, gs)
        dual_us = dual_ul = Fraction(1)

    zero = tuple(Fraction(0) for _ in range(Rhat.ambient))
    acc = zero
    for a in Rhat.positive_roots:
        ga = dual_gs if Rhat.is_short(a) else dual_gl
        acc = vadd(acc, vscale(ga, a))
    rho_g_hat = vscale(Fraction(1, 2), acc)

    primal = Side(system=R, rho_g=rho_g,
                  u_short=pair.u_theta, u_long=pair.u_phi,
                  g_short=gs, g_long=gl,
                  cone_covector=coroot(pair.psi_hat))
    dual = Side(system=Rhat, rho_g=rho_g_hat,
                u_short=dual_us, u_long=dual_ul,
                g_short=dual_gs, g_long=dual_gl,
                cone_covector=coroot(pair.hat_primal(R.highest_root)))

    spec = UnitarySpec(pair=pair, g=g, c=c, h_g=h_g, T=T, u_phi=u_phi,
                       kappa=kappa, primal=primal, dual=dual,
                       allow_degenerate=allow_degenerate)

    # Duality stability: the swapped pair reproduces h_g (and hence kappa)
    # exactly, and the truncation phase is an exact integer.
    h_g_swapped = Rhat.pair(rho_g_hat, pair.hat_primal(R.highest_root)) + (
        dual_gs if Rhat.is_short(pair.hat_primal(R.highest_root)) else dual_gl)
    assert h_g_swapped == h_g, "duality stability of kappa violated"
    assert spec.truncation_phase().denominator == 1, "truncation relation violated"
    return spec


def spec_for(label: str, rank: int, dual_flag: str, g_short, g_long, c: int,
             allow_degenerate: bool = False) -> UnitarySpec:
    """Convenience constructor from plain values."""
    return unitary_spec(admissible_pair(label, rank, dual_flag),
                        Multiplicity.of(g_short, g_long), c,
                        allow_degenerate=allow_degenerate)


# -- trigonometric Pochhammer symbols ----------------------------------------


def trig_pochhammer(a, kappa: float, l: int) -> float:
    """(a : kappa)_l = 2^l sin(kappa a) sin(kappa(a+1)) ... sin(kappa(a+l-1))."""
    if l < 0:
        raise ValueError("length must be nonnegative")
    value = 1.0
    af = float(a)
    for j in range(l):
        value *= 2.0 * math.sin(kappa * (af + j))
    return value


def is_regular_g(spec: UnitarySpec) -> tuple[bool, list[Vector]]:
    """g is regular iff <rho_g_hat, a^vee> avoids {1, m_a h_g - 1} on Rhat^+."""
    bad = []
    side = spec.dual
    for a in side.system.positive_roots:
        v = side.system.pair(side.rho_g, a)
        if v == 1 or v == spec.m_of(side, a) * spec.h_g - 1:
            bad.append(a)
    return (not bad), bad


def moment_bound_violations(spec: UnitarySpec, which: str, lam: Vector) -> list[Vector]:
    """Roots violating g_a <= <rho_g + lam, a^vee> <= m_a(h_g+c) - g_a, exactly."""
    side = spec.side(which)
    x = spec.grid_point(side, lam)
    bad = []
    for a in side.system.positive_roots:
        v = side.system.pair(x, a)
        ga = side.g_of(a)
        if not (ga <= v <= spec.m_of(side, a) * spec.T - ga):
            bad.append(a)
    return bad


# -- closed-form total mass ---------------------------------------------------


@dataclass(frozen=True)
class MassFactor:
    """One trigonometric Pochhammer factor of a total-mass product.

    The argument is a0 + a_short*g_theta + a_long*g_phi, the length is
    len_c*c + len_0, the scale tag picks kappa_phi, kappa_theta or kappa
    itself, and power is the (signed) exponent of the factor.
    """

    scale: str
    a0: Fraction
    a_short: Fraction
    a_long: Fraction
    len_c: int
    len_0: int
    power: int


def _F(scale, a0, a_short, a_long, len_c, len_0, power) -> MassFactor:
    return MassFactor(scale, Fraction(a0), Fraction(a_short), Fraction(a_long),
                      len_c, len_0, power)


def mass_factors(label: str, rank: int, dual_flag: str) -> tuple[MassFactor, ...]:
    """Factor descriptors of N_c for one type and pair choice."""
    out: list[MassFactor] = []
    n = rank
    if label in SIMPLY_LACED:
        if label == "A":
            exps = range(1, n + 1)
        elif label == "D":
            exps = [n - 1] + [2 * k - 1 for k in range(1, n)]
        else:
            exps = {"E6": (1, 4, 5, 7, 8, 11),
                    "E7": (1, 5, 7, 9, 11, 13, 17),
                    "E8": (1, 7, 11, 13, 17, 19, 23, 29)}[label]
        for e in exps:
            out.append(_F("phi", 1, e, 0, 1, -1, 1))
        return tuple(out)

    if dual_flag == "self":
        if label == "B":
            out.append(_F("theta", 1, 1, 2 * (n - 1), 2, -1, 1))
            for k in range(1, n):
                out.append(_F("phi", 1, 0, k, 1, -1, 1))
                out.append(_F("phi", 1, 1, n + k - 2, 1, -1, 1))
                out.append(_F("theta", 1, 0, 2 * k, 1, -1, -2))
        elif label == "C":
            out.append(_F("theta", 1, n - 1, 2, 2, -1, 1))
            for k in range(1, n - 1):
                out.append(_F("theta", 1, n + k, 2, 1, 0, 2))
            for k in range(0, n):
                out.append(_F("phi", 1, k, 1, 1, -1, 1))
                out.append(_F("theta", 1, 2 * k, 2, 2, -1, -1))
        elif label == "F4":
            out.append(_F("phi", 1, 0, 1, 1, -1, 1))
            out.append(_F("phi", 1, 1, 3, 1, -1, 1))
            out.append(_F("phi", 1, 2, 3, 1, -1, 1))
            out.append(_F("phi", 1, 3, 5, 1, -1, 1))
            out.append(_F("theta", 1, 3, 4, 1, -1, 2))
            out.append(_F("theta", 1, 5, 6, 1, 0, 2))
            out.append(_F("theta", 1, 0, 4, 1, -1, -2))
            out.append(_F("theta", 1, 2, 6, 1, -1, -2))
        elif label == "G2":
            out.append(_F("phi", 1, 0, 1, 1, -1, 1))
            out.append(_F("phi", 1, 1, 2, 1, -1, 1))
            out.append(_F("theta", 1, 2, 3, 1, 0, 2))
            out.append(_F("theta", 1, 0, 3, 1, -1, -2))
        else:
            raise ConfigurationError(f"no mass table for {label}")
        return tuple(out)

    # multiply laced with Rhat = R^vee; all factors at kappa itself
    if label == "B":
        for k in range(1, n + 1):
            out.append(_F("kappa", 1, 1, n + k - 2, 1, -1, 1))
        for k in range(1, n // 2 + 1):
            out.append(_F("kappa", 1, 0, 2 * k - 1, 1, -1, 1))
            out.append(_F("kappa", 1, 0, 2 * (n - k), 1, -1, -1))
    elif label == "C":
        for k in range(1, n + 1):
            out.append(_F("kappa", 1, k - 1, 1, 1, -1, 1))
        for k in range(1, n // 2 + 1):
            out.append(_F("kappa", 1, 2 * n - 2 * k - 1, 2, 1, -1, 1))
            out.append(_F("kappa", 1, 2 * (k - 1), 2, 1, -1, -1))
    elif label == "F4":
        for s, l in ((0, 1), (1, 3), (2, 3), (3, 4), (3, 5), (5, 6)):
            out.append(_F("kappa", 1, s, l, 1, -1, 1))
        out.append(_F("kappa", 1, 0, 4, 1, -1, -1))
        out.append(_F("kappa", 1, 2, 6, 1, -1, -1))
    elif label == "G2":
        for s, l in ((0, 1), (1, 2), (2, 3)):
            out.append(_F("kappa", 1, s, l, 1, -1, 1))
        out.append(_F("kappa", 1, 0, 3, 1, -1, -1))
    else:
        raise ConfigurationError(f"no mass table for {label}")
    return tuple(out)


def _scale_m(spec: UnitarySpec, scale: str) -> Fraction:
    """Angle of the factor scale is pi*(arg)/( _scale_m * T )."""
    if scale == "phi":
        return Fraction(1)
    if scale == "theta":
        return Fraction(spec.pair.m)
    if scale == "kappa":
        return spec.u_phi
    raise ValueError(f"unknown scale {scale!r}")


def evaluate_mass_factors(spec: UnitarySpec, factors: Iterable[MassFactor],
                          precision: str = "double") -> float:
    """Evaluate a product of Pochhammer factor descriptors at the spec.

    Every sine argument is checked, in exact rationals, to lie strictly
    inside (0, pi); the closed forms are positive throughout the parameter
    domain and a violation signals a transcription error.
    """
    gs, gl = spec.g.g_short, spec.g.g_long
    use_mp = precision == "extended"
    if use_mp:
        import mpmath
        mp_ctx = mpmath.mp
        old_dps = mp_ctx.dps
        mp_ctx.dps = 40
        acc = mpmath.mpf(1)
    else:
        acc = 1.0
    try:
        for f in factors:
            arg = f.a0 + f.a_short * gs + f.a_long * gl
            length = f.len_c * spec.c + f.len_0
            if length < 0:
                raise ConfigurationError("negative Pochhammer length")
            m_scale = _scale_m(spec, f.scale)
            one = 1.0
            if use_mp:
                import mpmath
                one = mpmath.mpf(1)
            value = one
            for j in range(length):
                frac = (arg + j) / (m_scale * spec.T)
                if not (0 < frac < 1):
                    raise AssertionError(
                        f"mass factor argument left (0, pi): {f} at j={j}")
                if use_mp:
                    import mpmath
                    value *= 2 * mpmath.sin(mpmath.pi * mpmath.mpf(frac.numerator)
                                            / frac.denominator)
                else:
                    value *= 2.0 * math.sin(math.pi * float(frac))
            if f.power > 0:
                acc *= value ** f.power
            else:
                acc /= value ** (-f.power)
        return float(acc)
    finally:
        if use_mp:
            mp_ctx.dps = old_dps


def nc_rhat_product(spec: UnitarySpec, precision: str = "double") -> float:
    """Root-product form of N_c, valid for simply laced R or Rhat = R^vee.

    N_c = prod_{a in R+} (1+<rho_g,a^vee> : kappa_a)_{c-1}
        / prod_{a in R+ not simple} (1+<rho_g,a^vee>-g_a : kappa_a)_{c-1}.
    """
    side = spec.primal
    R = side.system
    simple = set(R.simple_roots)
    use_mp = precision == "extended"
    if use_mp:
        import mpmath
        acc = mpmath.mpf(1)
    else:
        acc = 1.0
    for a in R.positive_roots:
        rv = R.pair(side.rho_g, a)
        m_a = spec.m_of(side, a)
        num = _poch_exact(spec, 1 + rv, m_a, spec.c - 1, use_mp)
        acc *= num
        if a not in simple:
            den = _poch_exact(spec, 1 + rv - side.g_of(a), m_a, spec.c - 1, use_mp)
            acc /= den
    return float(acc)


def equal_label_product(spec: UnitarySpec, precision: str = "double") -> float:
    """Exponent form prod_k (1 + g e_k : kappa_phi)_{c-1} for constant g."""
    g = spec.g.g_short
    use_mp = precision == "extended"
    if use_mp:
        import mpmath
        acc = mpmath.mpf(1)
    else:
        acc = 1.0
    for e in spec.pair.R.exponents:
        acc *= _poch_exact(spec, 1 + g * e, Fraction(1), spec.c - 1, use_mp)
    return float(acc)


def _poch_exact(spec: UnitarySpec, arg: Fraction, m_scale: Fraction, length: int,
                use_mp: bool):
    if use_mp:
        import mpmath
        value = mpmath.mpf(1)
    else:
        value = 1.0
    for j in range(length):
        frac = (arg + j) / (m_scale * spec.T)
        if use_mp:
            import mpmath
            value *= 2 * mpmath.sin(mpmath.pi * mpmath.mpf(frac.numerator)
                                    / frac.denominator)
        else:
            value *= 2.0 * math.sin(math.pi * float(frac))
    return value


def total_mass_formula(spec: UnitarySpec, precision: str = "double") -> float:
    """Closed-form total mass N_0 = Ind(R) * N_c from the factor tables.

    For simply laced systems and for Rhat = R^vee the independent
    root-product form is evaluated as well and must agree to 1e-10
    relative.
    """
    pair = spec.pair
    nc = evaluate_mass_factors(
        spec, mass_factors(pair.R.label, pair.R.rank, pair.dual_flag), precision)
    if pair.simply_laced or pair.dual_flag == "dual":
        alt = nc_rhat_product(spec, precision)
        if abs(alt - nc) > 1e-10 * abs(nc):
            raise AssertionError(
                f"mass table vs root-product mismatch: {nc} vs {alt}")
    return pair.R.index * nc


def index_pair(pair: AdmissiblePair) -> int:
    """Ind(R, Rhat) = |P / (u_phi Qhat^vee)| governing Weyl-character norms."""
    if pair.simply_laced or pair.dual_flag == "dual":
        return pair.R.index
    n_short = sum(1 for a in pair.R.simple_roots if pair.R.is_short(a))
    return pair.m ** n_short * pair.R.index


# -- versioned factor-table file ----------------------------------------------

MASS_TABLE_VERSION = "1"
MASS_TABLE_SHA256 = "29bafe57f4e11f1bfb092d137b2e22c59530016fd954a9e1024c83b96ad4273c"

_TABLE_RANKS = {"A": range(1, 9), "B": range(2, 9), "C": range(3, 9),
                "D": range(4, 9), "E6": (6,), "E7": (7,), "E8": (8,),
                "F4": (4,), "G2": (2,)}


def render_mass_table_file() -> str:
    """Render all shipped factor descriptors as the plain-text data file."""
    lines = [f"# macorth mass tables v{MASS_TABLE_VERSION}",
             "# type rank pair | scale a0 a_short a_long | len_c len_0 | power"]
    for label in ("A", "B", "C", "D", "E6", "E7", "E8", "F4", "G2"):
        flags = ("self",) if label in SIMPLY_LACED else ("self", "dual")
        for rank in _TABLE_RANKS[label]:
            for flag in flags:
                for f in mass_factors(label, rank, flag):
                    lines.append(
                        f"{label} {rank} {flag} | {f.scale} {f.a0} {f.a_short} "
                        f"{f.a_long} | {f.len_c} {f.len_0} | {f.power}")
    return "\n".join(lines) + "\n"


def load_mass_table_file() -> dict[tuple[str, int, str], tuple[MassFactor, ...]]:
    text = resources.files("macorth").joinpath("data/mass_tables.txt").read_text()
    table: dict[tuple[str, int, str], list[MassFactor]] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        head, mid, tail, pw = [p.strip() for p in line.replace("|", ";").split(";")]
        label, rank, flag = head.split()
        scale, a0, a_s, a_l = mid.split()
        len_c, len_0 = tail.split()
        table.setdefault((label, int(rank), flag), []).append(
            _F(scale, Fraction(a0), Fraction(a_s), Fraction(a_l),
               int(len_c), int(len_0), int(pw)))
    return {k: tuple(v) for k, v in table.items()}


def validate_mass_table_file() -> bool:
    """Checksum gate over the shipped factor table."""
    data = resources.files("macorth").joinpath("data/mass_tables.txt").read_bytes()
    return hashlib.sha256(data).hexdigest() == MASS_TABLE_SHA256

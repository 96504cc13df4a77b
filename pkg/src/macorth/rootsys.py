"""Exact-arithmetic irreducible reduced crystallographic root systems.

Root systems are realized in the ambient Euclidean coordinates of the
standard Bourbaki tables, with every lattice quantity kept as an exact
rational: inner products, coroot pairings, reflections, dominance tests and
orbit enumeration never touch floating point.  The ambient dimension may
exceed the rank (A_n lives in the coordinate-sum-zero hyperplane of
R^{n+1}; E6 and E7 sit inside R^8).

Orbits are enumerated by breadth-first closure under the simple reflections
and returned in a fixed total order (height descending, then lexicographic
in fundamental-weight coordinates) so that every downstream computation is
reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import factorial
from typing import Iterable, Sequence

Vector = tuple[Fraction, ...]

LABELS = ("A", "B", "C", "D", "E6", "E7", "E8", "F4", "G2")

_WEYL_ORDER_FIXED = {"E6": 51840, "E7": 2903040, "E8": 696729600, "F4": 1152, "G2": 12}
_DUAL_LABEL = {"A": "A", "B": "C", "C": "B", "D": "D",
               "E6": "E6", "E7": "E7", "E8": "E8", "F4": "F4", "G2": "G2"}


class ConfigurationError(ValueError):
    """Invalid root-system or run configuration."""


def vec(*entries) -> Vector:
    return tuple(Fraction(e) for e in entries)


def vadd(x: Vector, y: Vector) -> Vector:
    return tuple(a + b for a, b in zip(x, y, strict=True))


def vsub(x: Vector, y: Vector) -> Vector:
    return tuple(a - b for a, b in zip(x, y, strict=True))


def vscale(c, x: Vector) -> Vector:
    c = Fraction(c)
    return tuple(c * a for a in x)


def dot(x: Vector, y: Vector) -> Fraction:
    if len(x) != len(y):
        raise ValueError("dimension mismatch")
    return sum((a * b for a, b in zip(x, y)), Fraction(0))


def norm2(x: Vector) -> Fraction:
    return dot(x, x)


def coroot(x: Vector) -> Vector:
    """The covector 2x/|x|^2 of a nonzero vector."""
    n2 = norm2(x)
    if n2 == 0:
        raise ValueError("coroot of zero vector")
    return vscale(Fraction(2) / n2, x)


def _solve_in_basis(columns: Sequence[Vector], target: Vector) -> tuple[Fraction, ...] | None:
    """Exact coordinates of ``target`` in the (independent) ``columns``.

    Returns None when the system is inconsistent.  Plain Gaussian
    elimination over Fraction; the matrix may have more rows than columns.
    """
    m = len(target)
    n = len(columns)
    aug = [[columns[j][i] for j in range(n)] + [target[i]] for i in range(m)]
    row = 0
    pivots = []
    for col in range(n):
        piv = next((r for r in range(row, m) if aug[r][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        pv = aug[row][col]
        aug[row] = [a / pv for a in aug[row]]
        for r in range(m):
            if r != row and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    for r in range(row, m):
        if aug[r][n] != 0:
            return None
    coords = [Fraction(0)] * n
    for r, col in enumerate(pivots):
        coords[col] = aug[r][n]
    return tuple(coords)


def _invert_int_matrix(a: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(a)
    m = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for i in range(n):
        piv = next(r for r in range(i, n) if m[r][i] != 0)
        m[i], m[piv] = m[piv], m[i]
        pv = m[i][i]
        m[i] = [x / pv for x in m[i]]
        for r in range(n):
            if r != i and m[r][i] != 0:
                f = m[r][i]
                m[r] = [x - f * y for x, y in zip(m[r], m[i])]
    return [row[n:] for row in m]


def _det_int_matrix(a: Sequence[Sequence[int]]) -> int:
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    det = Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if m[r][i] != 0), None)
        if piv is None:
            return 0
        if piv != i:
            m[i], m[piv] = m[piv], m[i]
            det = -det
        det *= m[i][i]
        inv = 1 / m[i][i]
        for r in range(i + 1, n):
            if m[r][i] != 0:
                f = m[r][i] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[i])]
    assert det.denominator == 1
    return int(det)


@dataclass(frozen=True, eq=False)
class RootSystemData:
    """Immutable tables of one irreducible reduced root system.

    Instances are built by :func:`build_root_system` or
    :func:`dual_root_system`; all fields are exact and the object is safe to
    share across threads (the orbit cache is a read-mostly dict guarded by
    the GIL).
    """

    label: str
    rank: int
    ambient: int
    simple_roots: tuple[Vector, ...]
    positive_roots: tuple[Vector, ...]
    fundamental_weights: tuple[Vector, ...]
    cartan: tuple[tuple[int, ...], ...]
    highest_root: Vector
    highest_short_root: Vector
    coxeter_number: int
    dual_coxeter_number: int
    exponents: tuple[int, ...]
    index: int
    weyl_order: int
    rho: Vector
    _orbit_cache: dict = field(default_factory=dict, repr=False)

    def __repr__(self) -> str:
        return f"RootSystemData({self.label}{self.rank})"

    # -- exact pairings ----------------------------------------------------

    def pair(self, v: Vector, alpha: Vector) -> Fraction:
        """Coroot pairing <v, alpha^vee> = 2<v,alpha>/|alpha|^2."""
        return 2 * dot(v, alpha) / norm2(alpha)

    def simple_reflection(self, i: int, v: Vector) -> Vector:
        a = self.simple_roots[i]
        return vsub(v, vscale(self.pair(v, a), a))

    def reflect(self, alpha: Vector, v: Vector) -> Vector:
        return vsub(v, vscale(self.pair(v, alpha), alpha))

    def is_dominant(self, v: Vector) -> bool:
        return all(self.pair(v, a) >= 0 for a in self.simple_roots)

    def weight_coords(self, v: Vector) -> tuple[Fraction, ...]:
        """Coordinates of v in the fundamental-weight basis."""
        return tuple(self.pair(v, a) for a in self.simple_roots)

    def from_weight_coords(self, coords: Sequence) -> Vector:
        v = tuple(Fraction(0) for _ in range(self.ambient))
        for c, w in zip(coords, self.fundamental_weights, strict=True):
            if c:
                v = vadd(v, vscale(c, w))
        return v

    def root_coords(self, v: Vector) -> tuple[Fraction, ...] | None:
        """Coordinates of v in the simple-root basis, or None if outside the span."""
        return _solve_in_basis(self.simple_roots, v)

    def in_root_lattice(self, v: Vector) -> bool:
        coords = self.root_coords(v)
        return coords is not None and all(c.denominator == 1 for c in coords)

    def in_weight_lattice(self, v: Vector) -> bool:
        if self.root_coords(v) is None:
            return False
        return all(self.pair(v, a).denominator == 1 for a in self.simple_roots)

    @cached_property
    def rho_covector(self) -> Vector:
        """Half-sum of the positive coroots."""
        acc = tuple(Fraction(0) for _ in range(self.ambient))
        for a in self.positive_roots:
            acc = vadd(acc, coroot(a))
        return vscale(Fraction(1, 2), acc)

    def height(self, v: Vector) -> Fraction:
        """Pairing with the half-sum of positive coroots; strictly monotone on Q+."""
        return dot(v, self.rho_covector)

    @cached_property
    def short_norm2(self) -> Fraction:
        return norm2(self.highest_short_root)

    @cached_property
    def long_norm2(self) -> Fraction:
        return norm2(self.highest_root)

    def is_short(self, alpha: Vector) -> bool:
        return norm2(alpha) == self.short_norm2

    @cached_property
    def all_roots(self) -> tuple[Vector, ...]:
        return tuple(self.positive_roots) + tuple(vscale(-1, a) for a in self.positive_roots)

    def orbit_sort_key(self, v: Vector):
        return (-self.height(v), self.weight_coords(v))


# -- construction ----------------------------------------------------------


def _simple_roots_for(label: str, rank: int) -> tuple[list[Vector], int]:
    f = Fraction
    if label == "A":
        if rank < 1:
            raise ConfigurationError("A_n requires n >= 1")
        d = rank + 1
        return [_unit_diff(i, i + 1, d) for i in range(rank)], d
    if label == "B":
        if rank < 2:
            raise ConfigurationError("B_n requires n >= 2")
        rows = [_unit_diff(i, i + 1, rank) for i in range(rank - 1)]
        rows.append(_unit(rank - 1, rank))
        return rows, rank
    if label == "C":
        if rank < 3:
            raise ConfigurationError("C_n requires n >= 3")
        rows = [_unit_diff(i, i + 1, rank) for i in range(rank - 1)]
        rows.append(vscale(2, _unit(rank - 1, rank)))
        return rows, rank
    if label == "D":
        if rank < 4:
            raise ConfigurationError("D_n requires n >= 4")
        rows = [_unit_diff(i, i + 1, rank) for i in range(rank - 1)]
        rows.append(vadd(_unit(rank - 2, rank), _unit(rank - 1, rank)))
        return rows, rank
    if label in ("E6", "E7", "E8"):
        need = int(label[1])
        if rank != need:
            raise ConfigurationError(f"{label} has rank {need}")
        alpha1 = tuple(f(1, 2) if i in (0, 7) else f(-1, 2) for i in range(8))
        alpha2 = vadd(_unit(0, 8), _unit(1, 8))
        rows = [alpha1, alpha2] + [_unit_diff(i - 2, i - 3, 8) for i in range(3, 9)]
        return rows[:need], 8
    if label == "F4":
        if rank != 4:
            raise ConfigurationError("F4 has rank 4")
        rows = [_unit_diff(1, 2, 4), _unit_diff(2, 3, 4), _unit(3, 4),
                vscale(f(1, 2), vec(1, -1, -1, -1))]
        return rows, 4
    if label == "G2":
        if rank != 2:
            raise ConfigurationError("G2 has rank 2")
        return [vec(1, -1, 0), vec(-2, 1, 1)], 3
    raise ConfigurationError(f"unknown root system label {label!r}")


def _unit(i: int, d: int) -> Vector:
    return tuple(Fraction(1) if j == i else Fraction(0) for j in range(d))


def _unit_diff(i: int, j: int, d: int) -> Vector:
    return tuple(Fraction(1) if k == i else Fraction(-1) if k == j else Fraction(0)
                 for k in range(d))


def _weyl_order(label: str, rank: int) -> int:
    if label == "A":
        return factorial(rank + 1)
    if label in ("B", "C"):
        return 2 ** rank * factorial(rank)
    if label == "D":
        return 2 ** (rank - 1) * factorial(rank)
    return _WEYL_ORDER_FIXED[label]


def _finish(label: str, rank: int, ambient: int, simple: Sequence[Vector],
            weyl_order: int) -> RootSystemData:
    # Every root is Weyl-conjugate to a simple root: close under the simple
    # reflections.
    pair = lambda v, a: 2 * dot(v, a) / norm2(a)
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for v in frontier:
            for a in simple:
                w = vsub(v, vscale(pair(v, a), a))
                if w not in roots:
                    roots.add(w)
                    nxt.append(w)
        frontier = nxt

    coords = {r: _solve_in_basis(simple, r) for r in roots}
    positive = [r for r in roots if all(c >= 0 for c in coords[r])]
    heights = {r: sum(coords[r]) for r in positive}
    assert all(h.denominator == 1 for h in heights.values())
    positive.sort(key=lambda r: (heights[r], coords[r]))

    n_pos = len(positive)
    h = Fraction(2 * n_pos, rank)
    assert h.denominator == 1
    h = int(h)

    cartan_rows = []
    for a in simple:
        row = []
        for b in simple:
            c = pair(a, b)
            assert c.denominator == 1
            row.append(int(c))
        cartan_rows.append(tuple(row))
    cartan = tuple(cartan_rows)

    inv = _invert_int_matrix(cartan)
    fundamental = []
    for i in range(rank):
        w = tuple(Fraction(0) for _ in range(ambient))
        for k in range(rank):
            if inv[i][k]:
                w = vadd(w, vscale(inv[i][k], simple[k]))
        fundamental.append(w)

    dominant_roots = [r for r in positive
                      if all(pair(r, a) >= 0 for a in simple)]
    norms = sorted({norm2(r) for r in roots})
    if len(norms) == 1:
        assert len(dominant_roots) == 1
        phi = theta = dominant_roots[0]
    else:
        assert len(dominant_roots) == 2 and len(norms) == 2
        phi = max(dominant_roots, key=norm2)
        theta = min(dominant_roots, key=norm2)

    rho = vscale(Fraction(1, 2),
                 _sum_vectors(positive, ambient))

    # Exponents from the height distribution: the number of positive roots
    # of height k equals the number of exponents >= k.
    count_by_h = {}
    for r in positive:
        count_by_h[int(heights[r])] = count_by_h.get(int(heights[r]), 0) + 1
    exps_desc = []
    for j in range(1, rank + 1):
        exps_desc.append(sum(1 for k, c in count_by_h.items() if c >= j))
    exponents = tuple(sorted(exps_desc))

    hdual = 2 * dot(rho, phi) / norm2(phi) + 1
    assert hdual.denominator == 1

    return RootSystemData(
        label=label,
        rank=rank,
        ambient=ambient,
        simple_roots=tuple(simple),
        positive_roots=tuple(positive),
        fundamental_weights=tuple(fundamental),
        cartan=cartan,
        highest_root=phi,
        highest_short_root=theta,
        coxeter_number=h,
        dual_coxeter_number=int(hdual),
        exponents=exponents,
        index=abs(_det_int_matrix(cartan)),
        weyl_order=weyl_order,
        rho=rho,
    )


def _sum_vectors(vs: Iterable[Vector], ambient: int) -> Vector:
    acc = tuple(Fraction(0) for _ in range(ambient))
    for v in vs:
        acc = vadd(acc, v)
    return acc


def build_root_system(label: str, rank: int) -> RootSystemData:
    """Construct the Bourbaki realization of an irreducible reduced system."""
    label = label.upper()
    if label in ("E", "F", "G"):
        label = f"{label}{rank}"
        if label not in LABELS:
            raise ConfigurationError(f"invalid type {label}")
    if label not in LABELS:
        raise ConfigurationError(f"unknown root system label {label!r}")
    simple, ambient = _simple_roots_for(label, rank)
    return _finish(label, rank, ambient, simple, _weyl_order(label, rank))


def dual_root_system(R: RootSystemData) -> RootSystemData:
    """The system R^vee with every root replaced by 2a/|a|^2."""
    simple = [coroot(a) for a in R.simple_roots]
    return _finish(_DUAL_LABEL[R.label], R.rank, R.ambient, simple, R.weyl_order)


# -- Weyl group machinery ----------------------------------------------------


def weyl_orbit(R: RootSystemData, weight: Vector) -> tuple[Vector, ...]:
    """Full W-orbit of a weight, in the fixed deterministic order."""
    key = ("orbit", weight)
    cached = R._orbit_cache.get(key)
    if cached is not None:
        return cached
    seen = {weight}
    frontier = [weight]
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(R.rank):
                w = R.simple_reflection(i, v)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    orbit = tuple(sorted(seen, key=R.orbit_sort_key))
    R._orbit_cache[key] = orbit
    return orbit


def dominant_representative(R: RootSystemData, weight: Vector) -> tuple[Vector, tuple[int, ...]]:
    """Dominant orbit point and a shortest word of simple reflections reaching it.

    The word is recorded in application order: feeding it to
    :func:`apply_word` with the input weight reproduces the dominant point.
    """
    v = weight
    word = []
    while True:
        i = next((i for i in range(R.rank) if R.pair(v, R.simple_roots[i]) < 0), None)
        if i is None:
            return v, tuple(word)
        v = R.simple_reflection(i, v)
        word.append(i)


def apply_word(R: RootSystemData, word: Sequence[int], v: Vector) -> Vector:
    for i in word:
        v = R.simple_reflection(i, v)
    return v


def inverse_word(word: Sequence[int]) -> tuple[int, ...]:
    return tuple(reversed(word))


def inversions(R: RootSystemData, weight: Vector) -> int:
    """Number of positive coroots made negative, i.e. the length of w_weight."""
    return sum(1 for a in R.positive_roots if R.pair(weight, a) < 0)


def dominance_leq(R: RootSystemData, mu: Vector, lam: Vector) -> bool:
    """mu <= lam in dominance order: lam - mu is a nonnegative integral root sum."""
    coords = R.root_coords(vsub(lam, mu))
    if coords is None:
        return False
    return all(c.denominator == 1 and c >= 0 for c in coords)


def dominant_weights_below(R: RootSystemData, lam: Vector) -> tuple[Vector, ...]:
    """All dominant mu <= lam, by closure under dominant positive-root steps.

    Covers of the dominance order on dominant weights differ by a single
    positive root, so the closure reaches every dominant weight below lam.
    """
    if not R.is_dominant(lam):
        raise ValueError("lam must be dominant")
    seen = {lam}
    frontier = [lam]
    while frontier:
        nxt = []
        for v in frontier:
            for a in R.positive_roots:
                w = vsub(v, a)
                if w not in seen and R.is_dominant(w):
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return tuple(sorted(seen, key=R.orbit_sort_key))


def saturated_set(R: RootSystemData, lam: Vector) -> tuple[Vector, ...]:
    """Union of the orbits of all dominant weights below lam."""
    key = ("saturated", lam)
    cached = R._orbit_cache.get(key)
    if cached is not None:
        return cached
    points = set()
    for mu in dominant_weights_below(R, lam):
        points.update(weyl_orbit(R, mu))
    out = tuple(sorted(points, key=R.orbit_sort_key))
    R._orbit_cache[key] = out
    return out


def classify_weight(R: RootSystemData, omega: Vector) -> str:
    """Strongest of minuscule / quasi-minuscule / small / not-small."""
    if not R.is_dominant(omega) or all(c == 0 for c in omega):
        raise ValueError("omega must be dominant and nonzero")
    pairings = [(R.pair(omega, a), a == omega) for a in R.positive_roots]
    if all(p <= 1 for p, _ in pairings):
        return "minuscule"
    if all(p <= 1 for p, is_self in pairings if not is_self):
        return "quasi-minuscule"
    if all(p <= 2 for p, _ in pairings):
        return "small"
    return "not-small"


def parabolic_stabilizer_orbit(R: RootSystemData, mu: Vector, omega: Vector) -> tuple[Vector, ...]:
    """Orbit of omega under the stabilizer W_mu.

    Computed through the parabolic subgroup of the dominant representative:
    W_mu = w^{-1} W_{mu+} w with w the shortest element moving mu into the
    dominant cone, and W_{mu+} generated by the simple reflections fixing
    mu+.  The full orbit is never filtered.
    """
    mu_dom, word = dominant_representative(R, mu)
    gens = [i for i in range(R.rank) if R.pair(mu_dom, R.simple_roots[i]) == 0]
    start = apply_word(R, word, omega)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for i in gens:
                w = R.simple_reflection(i, v)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    inv = inverse_word(word)
    return tuple(sorted((apply_word(R, inv, v) for v in seen), key=R.orbit_sort_key))


def signed_orbit(R: RootSystemData, weight: Vector) -> tuple[tuple[Vector, int], ...]:
    """Orbit of a regular weight with the determinant sign of the moving element.

    Requires trivial stabilizer (regular weight); the sign of a path is then
    well defined.
    """
    seen = {weight: 1}
    frontier = [weight]
    while frontier:
        nxt = []
        for v in frontier:
            s = seen[v]
            for i in range(R.rank):
                w = R.simple_reflection(i, v)
                if w not in seen:
                    seen[w] = -s
                    nxt.append(w)
        frontier = nxt
    return tuple(sorted(seen.items(), key=lambda kv: R.orbit_sort_key(kv[0])))


def dump_roots(R: RootSystemData) -> str:
    """Plain-text fixture dump, one positive root per line as rational tuples."""
    lines = [f"# {R.label} rank {R.rank} positive roots"]
    for r in R.positive_roots:
        lines.append(" ".join(str(c) for c in r))
    return "\n".join(lines) + "\n"

"""Exact truncated power series for counting by degree.

All series are indexed by the non-root vertex count ``k`` (an
integer), so the natural half-integer exponents (``u^p`` marking
``2p`` vertices, ``z^{1/2}``) become integer shifts: ``u`` sits at
index 2, ``z`` at index 2, ``z^{1/2}`` and ``u^{1/2}`` at index 1.
Coefficients are exact Python integers (Fractions never arise here).

The central objects are the melonic series ``T`` with
``T = 1 + z T^4``, the per-scheme generating functions, and their sum
``F^(δ)`` counting rooted graphs of degree δ by vertex count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import MomapsError, UnstabilizedCatalog


class VSeries:
    """Dense truncated power series in the vertex-count index.

    ``coeffs[k]`` counts objects with ``k`` (non-root) vertices; the
    truncation ``order`` means indices 0..order are meaningful.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order):
        self.order = order
        c = list(coeffs[:order + 1])
        c.extend([0] * (order + 1 - len(c)))
        self.coeffs = c

    @classmethod
    def monomial(cls, k, order, value=1):
        c = [0] * (order + 1)
        if k <= order:
            c[k] = value
        return cls(c, order)

    @classmethod
    def one(cls, order):
        return cls.monomial(0, order)

    def __getitem__(self, k):
        if not 0 <= k <= self.order:
            raise IndexError(f"index {k} outside truncation 0..{self.order}")
        return self.coeffs[k]

    def __eq__(self, other):
        return (isinstance(other, VSeries) and self.order == other.order
                and self.coeffs == other.coeffs)

    def __add__(self, other):
        a, b = self, self._coerce(other)
        n = min(a.order, b.order)
        return VSeries([a.coeffs[k] + b.coeffs[k] for k in range(n + 1)], n)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self, self._coerce(other)
        n = min(a.order, b.order)
        return VSeries([a.coeffs[k] - b.coeffs[k] for k in range(n + 1)], n)

    def __neg__(self):
        return VSeries([-c for c in self.coeffs], self.order)

    def __mul__(self, other):
        if isinstance(other, int):
            return VSeries([c * other for c in self.coeffs], self.order)
        b = self._coerce(other)
        n = min(self.order, b.order)
        out = [0] * (n + 1)
        for i, ci in enumerate(self.coeffs[:n + 1]):
            if ci == 0:
                continue
            for j in range(0, n + 1 - i):
                cj = b.coeffs[j]
                if cj:
                    out[i + j] += ci * cj
        return VSeries(out, n)

    __rmul__ = __mul__

    def _coerce(self, other):
        if isinstance(other, VSeries):
            return other
        if isinstance(other, int):
            return VSeries.monomial(0, self.order, other)
        raise TypeError(f"cannot combine VSeries with {type(other)!r}")

    def shift(self, k):
        """Multiply by the unit monomial of index ``k``."""
        return VSeries([0] * k + self.coeffs, self.order)

    def inverse(self):
        """Reciprocal series; the constant term must be +1 or -1."""
        c0 = self.coeffs[0]
        if c0 not in (1, -1):
            raise MomapsError(
                f"series with constant term {c0} has no integer reciprocal")
        n = self.order
        inv = [0] * (n + 1)
        inv[0] = c0
        for k in range(1, n + 1):
            acc = sum(self.coeffs[i] * inv[k - i] for i in range(1, k + 1))
            inv[k] = -c0 * acc
        return VSeries(inv, n)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def pow(self, e):
        if e < 0:
            return self.inverse().pow(-e)
        out = VSeries.one(self.order)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    __pow__ = pow

    def compose(self, inner):
        """Substitute ``inner`` (zero constant term) for the variable.

        Only meaningful when ``self`` is interpreted as a series in a
        single variable whose unit step is index 1; each index-``k``
        term becomes ``inner**k``.
        """
        if inner.coeffs[0] != 0:
            raise MomapsError("composition needs a zero constant term")
        n = min(self.order, inner.order)
        out = VSeries.monomial(0, n, self.coeffs[0])
        power = VSeries.one(n)
        for k in range(1, n + 1):
            power = power * inner
            if self.coeffs[k]:
                out = out + power * self.coeffs[k]
        return out

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:8])
        return f"VSeries([{head}{', …' if self.order > 7 else ''}] K={self.order})"


def melonic_T(order):
    """The melonic series ``T = 1 + z T^4`` up to vertex index ``order``.

    ``z`` carries vertex index 2 (one power of z = two vertices), so
    odd indices of T vanish.  Computed by fixed-point iteration; the
    coefficient of ``z^n`` is the Fuss–Catalan number
    ``binom(4n, n) / (3n + 1)``.
    """
    t = VSeries.one(order)
    # Each iteration is exact one index further; vertex index grows by
    # 2 per z power, so order//2 + 1 rounds suffice.
    for _ in range(order // 2 + 2):
        t = VSeries.one(order) + (t ** 4).shift(2)
    return t


def fuss_catalan(n):
    """Closed form for the z^n coefficient of T."""
    return math.comb(4 * n, n) // (3 * n + 1)


def melonic_U(order):
    """``U = z T^4 = T - 1``."""
    return melonic_T(order) - 1


def sqrt_U(order):
    """``U^{1/2} = z^{1/2} T^2`` exactly (odd-index unit shift)."""
    return (melonic_T(order) ** 2).shift(1)


def _geometric(order, step, start):
    """``u^start / (1 - u^step)`` in vertex index (u at index 2)."""
    c = [0] * (order + 1)
    k = start
    while k <= order:
        c[k] = 1
        k += 2 * step
    return VSeries(c, order)


def chain_gf(chain_type, order):
    """Generating function of proper chains by half vertex count.

    ``u`` marks half the vertex count (index 2).  L and R chains:
    ``u^2/(1-u)``; even straight: ``u^2/(1-u^2)``; odd straight:
    ``u^3/(1-u^2)``; broken: ``6u^2/((1-3u)(1-u))``.
    """
    name = getattr(chain_type, "label", chain_type)
    if name in ("L", "R"):
        return _geometric(order, 1, 4)
    if name == "Se":
        return _geometric(order, 2, 4)
    if name == "So":
        return _geometric(order, 2, 6)
    if name == "B":
        one = VSeries.one(order)
        u = VSeries.monomial(2, order)
        return (6 * u * u) * (one - 3 * u).inverse() * (one - u).inverse()
    raise MomapsError(f"unknown chain type {chain_type!r}")


@dataclass(frozen=True)
class SchemeParams:
    """The exponents entering a scheme's generating function.

    ``two_p`` is the number of standard vertices (twice the paper's
    half-count p); the remaining fields count chain-vertices by type.
    """

    two_p: int
    c_l: int = 0
    c_r: int = 0
    s_e: int = 0
    s_o: int = 0
    b: int = 0

    @property
    def c(self):
        """Total chain-vertices."""
        return self.c_l + self.c_r + self.s_e + self.s_o + self.b

    @property
    def s(self):
        return self.s_e + self.s_o

    @property
    def min_vertices(self):
        """Vertex count of the minimal substitution: 2(p + 2c + s_o)."""
        return self.two_p + 4 * self.c + 2 * self.s_o


def scheme_gf(params, order):
    """Melon-free graphs with a given scheme, by half vertex count.

    ``6^b u^{p + 2c + s_o} / ((1-u)^{c-s} (1-u^2)^s (1-3u)^b)`` with
    ``u`` at vertex index 2 (so ``u^p`` sits at index ``two_p``).
    """
    lead = params.two_p + 4 * params.c + 2 * params.s_o
    out = VSeries.monomial(lead, order, 6 ** params.b)
    one = VSeries.one(order)
    u = VSeries.monomial(2, order)
    if params.c - params.s:
        out = out * (one - u).inverse().pow(params.c - params.s)
    if params.s:
        out = out * (one - u * u).inverse().pow(params.s)
    if params.b:
        out = out * (one - 3 * u).inverse().pow(params.b)
    return out


def rooted_gf(params, order):
    """Rooted graphs with a given scheme, melons restored.

    Substitutes ``U = T - 1`` for ``u`` in the scheme's melon-free
    series and multiplies by ``T``: a melon-free graph with ``2p``
    non-root vertices has ``4p + 1`` edge slots, each carrying a
    rooted melonic graph, which is exactly ``T(z)^{4p+1} z^p`` summed
    over the melon-free counts.
    """
    g = scheme_gf(params, order)
    t = melonic_T(order)
    u_half = (t * t).shift(1)  # U^{1/2} = z^{1/2} T^2
    # scheme_gf indices are multiples of the half-step (index 1), so
    # compose with the half-power of U.
    return t * g.compose(u_half)


def rooted_gf_by_substitution(melon_free_counts, order):
    """Rooted-graph series from raw melon-free counts.

    ``melon_free_counts[v]`` is the number of rooted melon-free graphs
    with ``v`` vertices; each contributes ``z^{v/2} T^{2v+1}``.
    """
    t = melonic_T(order)
    out = VSeries([0], order)
    t_sq_shift = (t * t).shift(1)  # z^{1/2} T^2 per half vertex pair
    power = t  # v = 0 -> T^1
    for v in range(0, order + 1):
        count = melon_free_counts.get(v, 0)
        if count:
            out = out + power * count
        power = power * t_sq_shift
    return out


def degree_gf(catalog, order, *, on_unstabilized="warn"):
    """Sum of rooted-graph series over a scheme catalog.

    ``catalog`` is a :class:`momaps.enumerate.SchemeCatalog`.  If its
    stabilization flag is unset, coefficients beyond the certified
    range may be incomplete; depending on ``on_unstabilized`` this
    warns, raises, or is ignored.
    """
    import warnings
    if not catalog.stabilized:
        msg = (f"scheme catalog for two_delta={catalog.two_delta} is not "
               f"stabilized (last growth at source size "
               f"{catalog.last_growth_at} of {catalog.max_vertices_scanned} "
               f"scanned); series coefficients are certified only up to "
               f"vertex index {catalog.certified_order}")
        if on_unstabilized == "raise":
            raise UnstabilizedCatalog(msg)
        if on_unstabilized == "warn":
            warnings.warn(msg, UnstabilizedCatalog)
    out = VSeries([0], order)
    for params in catalog.params():
        out = out + rooted_gf(params, order)
    return out


# ---------------------------------------------------------------------------
# Asymptotics.
# ---------------------------------------------------------------------------


def catalan(n):
    return math.comb(2 * n, n) // (n + 1)


def _gamma_half_integer(two_x):
    """Exact ``Gamma(two_x / 2)`` as (rational, multiplies_sqrt_pi)."""
    if two_x <= 0:
        raise MomapsError("Gamma pole or non-positive argument")
    if two_x % 2 == 0:
        return Fraction(math.factorial(two_x // 2 - 1)), False
    # Gamma(1/2) = sqrt(pi); Gamma(x+1) = x Gamma(x).
    val = Fraction(1)
    k = Fraction(two_x, 2) - 1
    while k > 0:
        val *= k
        k -= 1
    return val, True


@dataclass(frozen=True)
class AsymptoticEstimate:
    """The predicted leading term of the degree-δ counting sequence.

    ``a_n ~ Cat(2δ-1) * 3^(δ-3/2) / 2^(2δ-5/2) * n^(2δ-3/2) /
    Γ(2δ-1/2) * (2^8/3^3)^n`` for n in δ + Z.
    """

    two_delta: int

    @property
    def growth_rate(self):
        return 256.0 / 27.0

    @property
    def exponent(self):
        return self.two_delta - 1.5

    @property
    def prefactor(self):
        td = self.two_delta
        cat = catalan(td - 1)
        # 3^(δ-3/2) / 2^(2δ-5/2): keep exact square roots separate.
        pow3 = 3.0 ** ((td - 3) / 2.0)
        pow2 = 2.0 ** ((2 * td - 5) / 2.0)
        gam, has_sqrt_pi = _gamma_half_integer(2 * td - 1)
        gamma_val = float(gam) * (math.sqrt(math.pi) if has_sqrt_pi else 1.0)
        return cat * pow3 / pow2 / gamma_val

    def value(self, two_n):
        n = two_n / 2.0
        return (self.prefactor * n ** self.exponent
                * self.growth_rate ** n)


@dataclass
class RatioReport:
    two_delta: int
    ratios: list            # (two_n, a_n / estimate) on the main parity
    fitted_rate: float
    fitted_exponent: float
    parity_ratios: list     # (two_n, a_{n+1/2} * sqrt(n) / a_n)

    @property
    def trending_to_one(self):
        """Whether |ratio - 1| shrinks over the top decade of n."""
        tail = [r for _, r in self.ratios[-10:]]
        if len(tail) < 2:
            return False
        return abs(tail[-1] - 1.0) <= abs(tail[0] - 1.0)


def asymptotic_check(two_delta, series):
    """Compare a degree-δ coefficient series with the predicted law.

    ``series`` is the VSeries of ``F^(δ)``.  The main parity is
    n ∈ δ + Z, i.e. vertex indices 2n with 2n = 2δ (mod 2).  Fits the
    growth rate and polynomial exponent by log-regression over the top
    half of the available range.
    """
    est = AsymptoticEstimate(two_delta)
    main = [(k, series[k]) for k in range(2, series.order + 1)
            if k % 2 == two_delta % 2 and series[k] > 0]
    ratios = [(k, series[k] / est.value(k)) for k, _ in main]
    # Log-regression on the top half: log a_n = n log(rate) + e log n + C.
    pts = main[len(main) // 2:]
    if len(pts) < 3:
        raise MomapsError("series too short for an asymptotic fit")
    import numpy as np
    ns = np.array([k / 2.0 for k, _ in pts])
    logs = np.array([_log_big(c) for _, c in pts])
    design = np.column_stack([ns, np.log(ns), np.ones(len(ns))])
    sol, *_ = np.linalg.lstsq(design, logs, rcond=None)
    fitted_rate = math.exp(sol[0])
    fitted_exponent = sol[1]
    # Sub-dominant parity: a_{n+1/2} sqrt(n) / a_n should stay bounded.
    parity = []
    for k, a_k in main:
        if k + 1 <= series.order and a_k:
            b = series[k + 1]
            parity.append((k, b * math.sqrt(k / 2.0) / a_k))
    return RatioReport(two_delta, ratios, fitted_rate, fitted_exponent,
                       parity)


def _log_big(n):
    """Natural log of a (possibly huge) positive integer."""
    if n <= 0:
        raise MomapsError("log of non-positive count")
    if n.bit_length() <= 900:
        return math.log(n)
    shift = n.bit_length() - 64
    return math.log(n >> shift) + shift * math.log(2.0)

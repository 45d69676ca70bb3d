"""Finite abelian groups, characters, Cayley graphs and bicharacter twists.

The group Z_{n_1} x ... x Z_{n_m} is enumerated row-major over residue
tuples.  Characters are tau_mu(alpha) = prod_i omega_i^{alpha_i mu_i} with
omega_i = exp(2 pi i / n_i); all phases are produced by root-of-unity
lookup tables so that order-2 and order-4 values are exact.

A unitary bicharacter is stored through its values on the generators,
snapped to exact roots of unity of order dividing gcd(n_i, n_j) (the
well-definedness condition for the multiplicative extension).  Twisting
the function algebra by a bicharacter deforms the multiplication in the
Fourier basis to ``b_mu b_nu = conj(sigma(mu,nu)) b_{mu+nu} / sqrt(N)``
and leaves counit and Cayley adjacency untouched, which is how the
twisted quantum sets and twisted Cayley graphs below are built.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .algebra import DEFAULT_TOL, QuantumSet
from .errors import InvalidInput
from .kernels import unit_root

__all__ = [
    "AbelianGroup",
    "Bicharacter",
    "characters_fourier",
    "classical_cayley",
    "cayley_spectrum",
    "make_bicharacter",
    "trivial_bicharacter",
    "twist_quantum_set",
    "twisted_cayley",
    "twist_tensor",
    "leg_phases",
]


def _root_table(order: int) -> np.ndarray:
    return np.asarray([unit_root(k, order) for k in range(order)], dtype=complex)


@dataclass(eq=False)
class AbelianGroup:
    """Z_{n_1} x ... x Z_{n_m} with componentwise arithmetic."""

    orders: tuple[int, ...]
    _elements: Optional[tuple[tuple[int, ...], ...]] = field(default=None, repr=False)
    _index: Optional[dict] = field(default=None, repr=False)
    _add_table: Optional[np.ndarray] = field(default=None, repr=False)
    _neg: Optional[np.ndarray] = field(default=None, repr=False)
    _fourier: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self.orders = tuple(int(n) for n in self.orders)
        if len(self.orders) == 0 or any(n <= 0 for n in self.orders):
            raise InvalidInput(f"cyclic factor orders must be positive, got {self.orders}")

    @property
    def size(self) -> int:
        return int(np.prod(self.orders))

    @property
    def rank(self) -> int:
        return len(self.orders)

    def elements(self) -> tuple[tuple[int, ...], ...]:
        if self._elements is None:
            self._elements = tuple(itertools.product(*(range(n) for n in self.orders)))
        return self._elements

    def index(self, el: Sequence[int]) -> int:
        if self._index is None:
            self._index = {e: k for k, e in enumerate(self.elements())}
        key = tuple(x % n for x, n in zip(el, self.orders))
        if len(key) != self.rank:
            raise InvalidInput(f"element {tuple(el)} has wrong rank for orders {self.orders}")
        return self._index[key]

    def add(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        return tuple((x + y) % n for x, y, n in zip(a, b, self.orders))

    def neg(self, a: Sequence[int]) -> tuple[int, ...]:
        return tuple((-x) % n for x, n in zip(a, self.orders))

    def coords(self) -> np.ndarray:
        return np.asarray(self.elements(), dtype=np.int64)

    def addition_table(self) -> np.ndarray:
        """table[i, j] = index(el_i + el_j)."""
        if self._add_table is None:
            c = self.coords()
            idx = np.zeros((self.size, self.size), dtype=np.int64)
            stride = 1
            strides = np.zeros(self.rank, dtype=np.int64)
            for k in range(self.rank - 1, -1, -1):
                strides[k] = stride
                stride *= self.orders[k]
            for k in range(self.rank):
                s = (c[:, None, k] + c[None, :, k]) % self.orders[k]
                idx += strides[k] * s
            self._add_table = idx
            self._add_table.setflags(write=False)
        return self._add_table

    def negation(self) -> np.ndarray:
        """neg[i] = index(-el_i)."""
        if self._neg is None:
            self._neg = np.asarray([self.index(self.neg(e)) for e in self.elements()],
                                   dtype=np.int64)
            self._neg.setflags(write=False)
        return self._neg

    def fourier_matrix(self) -> np.ndarray:
        """F[alpha, mu] = tau_mu(alpha); symmetric, with F Finv = id."""
        if self._fourier is None:
            c = self.coords()
            f = np.ones((self.size, self.size), dtype=complex)
            for k, n in enumerate(self.orders):
                roots = _root_table(n)
                f = f * roots[(c[:, None, k] * c[None, :, k]) % n]
            self._fourier = f
            self._fourier.setflags(write=False)
        return self._fourier


def characters_fourier(group: AbelianGroup) -> tuple[np.ndarray, np.ndarray]:
    """The Fourier matrix and its inverse (1/N) conj(F)^T."""
    f = group.fourier_matrix()
    return f, f.conj().T / group.size


@dataclass(eq=False)
class Bicharacter:
    """A unitary bicharacter, stored exactly through snapped generator values.

    ``gen_values[i][j]`` holds sigma(eps_i, eps_j); internally each value is
    an integer exponent over gcd(n_i, n_j), so every evaluation is an exact
    root of unity.
    """

    group: AbelianGroup
    gen_values: np.ndarray
    _exp_num: np.ndarray = field(repr=False, default=None)  # k_ij
    _exp_den: np.ndarray = field(repr=False, default=None)  # gcd(n_i, n_j)
    _table: Optional[np.ndarray] = field(default=None, repr=False)

    def value(self, mu: Sequence[int], nu: Sequence[int]) -> complex:
        return self.table()[self.group.index(mu), self.group.index(nu)]

    def table(self) -> np.ndarray:
        """sigma(mu, nu) for all pairs of group elements."""
        if self._table is None:
            g = self.group
            c = g.coords()
            lcm = 1
            for d in self._exp_den.ravel():
                lcm = lcm * int(d) // math.gcd(lcm, int(d))
            expo = np.zeros((g.size, g.size), dtype=np.int64)
            for i in range(g.rank):
                for j in range(g.rank):
                    w = int(self._exp_num[i, j]) * (lcm // int(self._exp_den[i, j]))
                    if w % lcm:
                        expo += w * np.outer(c[:, i], c[:, j])
            roots = _root_table(lcm)
            self._table = roots[expo % lcm]
            self._table.setflags(write=False)
        return self._table

    def is_trivial(self) -> bool:
        return not np.any(self._exp_num % self._exp_den)


def make_bicharacter(
    group: AbelianGroup, gen_values: Sequence[Sequence[complex]], tol: float = DEFAULT_TOL
) -> Bicharacter:
    """Validate generator values and build the multiplicative extension.

    Each sigma(eps_i, eps_j) must be a root of unity of order dividing
    gcd(n_i, n_j); anything else cannot extend to a homomorphism in both
    arguments and is rejected naming the offending pair.
    """
    g = group
    vals = np.asarray(gen_values, dtype=complex)
    if vals.shape != (g.rank, g.rank):
        raise InvalidInput(
            f"gen_values must be {g.rank} x {g.rank} for orders {g.orders}, got {vals.shape}"
        )
    num = np.zeros((g.rank, g.rank), dtype=np.int64)
    den = np.zeros((g.rank, g.rank), dtype=np.int64)
    for i in range(g.rank):
        for j in range(g.rank):
            d = math.gcd(g.orders[i], g.orders[j])
            v = vals[i, j]
            if abs(abs(v) - 1.0) > tol:
                raise InvalidInput(f"bicharacter value at ({i},{j}) is not unimodular: {v}")
            theta = np.angle(v) / (2 * math.pi)
            k = int(round(theta * d)) % d
            if abs(v - unit_root(k, d)) > tol:
                raise InvalidInput(
                    f"bicharacter value at ({i},{j}) violates the order condition: "
                    f"{v} is not a root of unity of order dividing gcd{g.orders[i], g.orders[j]}={d}"
                )
            num[i, j] = k
            den[i, j] = d
    snapped = np.asarray(
        [[unit_root(int(num[i, j]), int(den[i, j])) for j in range(g.rank)]
         for i in range(g.rank)], dtype=complex)
    return Bicharacter(group=g, gen_values=snapped, _exp_num=num, _exp_den=den)


def trivial_bicharacter(group: AbelianGroup) -> Bicharacter:
    return make_bicharacter(group, np.ones((group.rank, group.rank)))


# ---------------------------------------------------------------------------
# classical Cayley graphs
# ---------------------------------------------------------------------------


def _as_elements(group: AbelianGroup, gens: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    return [tuple(x % n for x, n in zip(el, group.orders)) for el in gens]


def classical_cayley(group: AbelianGroup, gens: Iterable[Sequence[int]],
                     tol: float = DEFAULT_TOL) -> "QuantumGraph":
    """Cayley graph of the classical set: A[beta, alpha] = #{theta in S : beta = alpha + theta}.

    ``gens`` is a multiset; repeats produce multigraphs and 0 produces loops.
    """
    from .algebra import build_quantum_set
    from .graphs import QuantumGraph

    n = group.size
    x = build_quantum_set([1] * n, tol=tol)
    a = np.zeros((n, n), dtype=complex)
    table = group.addition_table()
    for theta in _as_elements(group, gens):
        rows = table[group.index(theta), :]
        a[rows, np.arange(n)] += 1.0
    return QuantumGraph(set=x, adjacency=a)


def cayley_spectrum(group: AbelianGroup, gens: Iterable[Sequence[int]]) -> np.ndarray:
    """Eigenvalues lambda_mu = sum_{theta in S} tau_mu(-theta), mu ordered as elements()."""
    f = group.fourier_matrix()
    neg = group.negation()
    lam = np.zeros(group.size, dtype=complex)
    for theta in _as_elements(group, gens):
        lam += f[neg[group.index(theta)], :]
    return lam


# ---------------------------------------------------------------------------
# twisting
# ---------------------------------------------------------------------------


def twist_quantum_set(group: AbelianGroup, sigma: Bicharacter,
                      tol: float = DEFAULT_TOL) -> QuantumSet:
    """The quantum set deforming C(Gamma) by the bicharacter sigma.

    Orthonormal basis b_mu indexed by group elements, with multiplication
    ``b_mu b_nu = conj(sigma(mu,nu)) b_{mu+nu} / sqrt(N)``, unit sqrt(N) b_0
    and counit sqrt(N) delta_{mu,0}.  The star matrix is solved numerically
    from unitarity of the scaled basis (each tau_mu must satisfy
    tau_mu^* tau_mu = 1 with tau_mu^* a multiple of tau_{-mu}); consistency
    is certified by verify_frobenius rather than by a symbolic phase rule.
    """
    if sigma.group is not group and sigma.group.orders != group.orders:
        raise InvalidInput("bicharacter is defined on a different group")
    n = group.size
    table = group.addition_table()
    sig = sigma.table()
    sqrt_n = math.sqrt(n)

    lft, rgt = np.meshgrid(np.arange(n, dtype=np.int64), np.arange(n, dtype=np.int64),
                           indexing="ij")
    lft = lft.ravel()
    rgt = rgt.ravel()
    out = table[lft, rgt]
    val = np.conj(sig[lft, rgt]) / sqrt_n

    unit = np.zeros(n, dtype=complex)
    zero = group.index((0,) * group.rank)
    unit[zero] = sqrt_n

    # solve tau_mu^* = c_mu tau_{-mu} from (c_mu tau_{-mu}) tau_mu = 1:
    # the stored product coefficient of tau_{-mu} tau_mu on tau_0 is
    # conj(sigma(-mu, mu)), so c_mu is its reciprocal.
    neg = group.negation()
    star = np.zeros((n, n), dtype=complex)
    prod_coeff = np.conj(sig[neg, np.arange(n)])  # tau_{-mu} tau_mu = this * tau_0
    star[np.arange(n), neg] = 1.0 / prod_coeff

    return QuantumSet(
        blocks=None,
        N=n,
        mult_out=out,
        mult_left=lft,
        mult_right=rgt,
        mult_val=val,
        unit_vec=unit,
        star_mat=star,
        tol=tol,
        group=group,
        bicharacter=sigma,
    )


def twisted_cayley(group: AbelianGroup, gens: Iterable[Sequence[int]],
                   sigma: Bicharacter, tol: float = DEFAULT_TOL) -> "QuantumGraph":
    """Twisted Cayley graph: diagonal adjacency with the classical eigenvalues."""
    from .graphs import QuantumGraph

    x = twist_quantum_set(group, sigma, tol=tol)
    lam = cayley_spectrum(group, gens)
    return QuantumGraph(set=x, adjacency=np.diag(lam))


def leg_phases(group: AbelianGroup, sigma: Bicharacter, legs: int) -> np.ndarray:
    """Multi-index phases sigma_i = prod_{a<b} sigma(g_{i_a}, g_{i_b}).

    Returned as a vector over row-major multi-indices of length ``legs``.
    """
    n = group.size
    if legs == 0:
        return np.ones(1, dtype=complex)
    table = group.addition_table()
    sig = sigma.table()
    phases = np.ones(n, dtype=complex)
    sums = np.arange(n, dtype=np.int64)
    for _ in range(legs - 1):
        phases = (phases[:, None] * sig[sums[:, None], np.arange(n)[None, :]]).ravel()
        sums = table[sums[:, None], np.arange(n)[None, :]].ravel()
    return phases


def twist_tensor(tensor: np.ndarray, out_legs: int, in_legs: int,
                 group: AbelianGroup, sigma: Bicharacter) -> np.ndarray:
    """Entrywise twist of a tensor with group-graded legs.

    ``tensor`` is an (N^out_legs) x (N^in_legs) matrix over row-major
    multi-indices; the twisted tensor multiplies each entry by
    sigma_i conj(sigma_j) for output multi-index i and input multi-index j.
    """
    n = group.size
    t = np.asarray(tensor, dtype=complex)
    expected = (n ** out_legs, n ** in_legs)
    if t.shape != expected:
        raise InvalidInput(f"tensor has shape {t.shape}, expected {expected}")
    po = leg_phases(group, sigma, out_legs)
    pi = leg_phases(group, sigma, in_legs)
    return (po[:, None] * t) * np.conj(pi)[None, :]

"""Size-rescaling calculus: the three equivalent weight parameterizations.

A rescaling row for n players can be given in any of three coordinates,
linked by exact bijections:

* ``mu``: a probability vector over coalition sizes 0..n (canonical storage);
* ``f``:  per-coalition weights, ``f[k] = mu[k] / C(n, k)``;
* ``F``:  tail sums, ``F[k] = mu[k] + ... + mu[n]`` (so ``F[0] = 1``,
  ``F`` is weakly decreasing, and ``F[k] = 0`` for ``k > n``).

Rows weight the per-size counts of winning coalitions in the collective
decisiveness index and the per-size marginal contributions in the weighted
semivalue (see :mod:`querypower.measures`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

from .errors import RescalingError

_HARMONIC: list[Fraction] = [Fraction(0)]


def harmonic(n: int) -> Fraction:
    """n-th harmonic number 1 + 1/2 + ... + 1/n, exact (cached)."""
    if n < 0:
        raise ValueError("harmonic numbers need n >= 0")
    while len(_HARMONIC) <= n:
        j = len(_HARMONIC)
        _HARMONIC.append(_HARMONIC[-1] + Fraction(1, j))
    return _HARMONIC[n]


def _as_fractions(values: Sequence[Union[int, Fraction]], what: str, n: int) -> tuple[Fraction, ...]:
    if len(values) != n + 1:
        raise RescalingError(f"{what} must have n+1 = {n + 1} entries, got {len(values)}")
    return tuple(Fraction(v) for v in values)


class RescalingRow:
    """Admissible size weights for a fixed player count.

    Stores the probability vector ``mu`` canonically; ``f`` and ``F`` are
    memoized derived views.  Instances are immutable and hashable.
    """

    __slots__ = ("n", "mu", "_f", "_F")

    def __init__(self, n: int, mu: Sequence[Union[int, Fraction]]):
        if n < 1:
            raise RescalingError("rows need n >= 1")
        probs = _as_fractions(mu, "mu", n)
        if any(p < 0 for p in probs):
            raise RescalingError("mu entries must be nonnegative")
        if sum(probs) != 1:
            raise RescalingError(f"mu must sum to 1, got {sum(probs)}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "mu", probs)
        object.__setattr__(self, "_f", None)
        object.__setattr__(self, "_F", None)

    def __setattr__(self, name, value):
        raise AttributeError("RescalingRow instances are immutable")

    @property
    def f(self) -> tuple[Fraction, ...]:
        """Per-coalition weights f[k] = mu[k] / C(n, k), k = 0..n."""
        if self._f is None:
            fs = tuple(m / math.comb(self.n, k) for k, m in enumerate(self.mu))
            object.__setattr__(self, "_f", fs)
        return self._f

    @property
    def F(self) -> tuple[Fraction, ...]:
        """Tail sums F[k] = mu[k] + ... + mu[n], for k = 0..n+1 (F[n+1] = 0)."""
        if self._F is None:
            tails = [Fraction(0)]
            for m in reversed(self.mu):
                tails.append(tails[-1] + m)
            object.__setattr__(self, "_F", tuple(reversed(tails)))
        return self._F

    def is_self_dual(self) -> bool:
        """True iff mu is symmetric: mu[k] = mu[n-k] for every k."""
        return all(self.mu[k] == self.mu[self.n - k] for k in range(self.n + 1))

    def c_norm(self) -> Fraction:
        """Normalizing constant sum(C(n-1, k-1) * f[k], k=1..n) = mean(mu)/n.

        Equals the collective decisiveness of a dictatorial game under this
        row; dividing the weighted semivalue by it yields a semivalue.
        """
        n = self.n
        return sum((Fraction(k, n) * m for k, m in enumerate(self.mu)), Fraction(0))

    def is_regular(self) -> bool:
        """All weights f[k] for 1 <= k <= n are strictly positive."""
        return all(self.mu[k] > 0 for k in range(1, self.n + 1))

    def is_semivalue_row(self) -> bool:
        """c_norm == 1; happens exactly when mu is the point mass at n."""
        return self.c_norm() == 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, RescalingRow):
            return NotImplemented
        return self.n == other.n and self.mu == other.mu

    def __hash__(self) -> int:
        return hash((self.n, self.mu))

    def __repr__(self) -> str:
        return f"RescalingRow(n={self.n}, mu={[str(m) for m in self.mu]})"


def make_row(n: int, *, mu: Sequence | None = None, f: Sequence | None = None,
             F: Sequence | None = None) -> RescalingRow:
    """Build a row from exactly one of the three coordinates.

    ``mu`` and ``f`` carry entries for k = 0..n.  ``F`` carries k = 0..n with
    F[n+1] = 0 implied; it must start at 1 and be weakly decreasing.
    """
    given = [name for name, val in (("mu", mu), ("f", f), ("F", F)) if val is not None]
    if len(given) != 1:
        raise RescalingError(f"exactly one of mu/f/F required, got {given or 'none'}")
    if mu is not None:
        return RescalingRow(n, mu)
    if f is not None:
        fs = _as_fractions(f, "f", n)
        if any(x < 0 for x in fs):
            raise RescalingError("f entries must be nonnegative")
        probs = [x * math.comb(n, k) for k, x in enumerate(fs)]
        if sum(probs) != 1:
            raise RescalingError(
                f"sum of f[k]*C(n,k) must be 1, got {sum(probs)}")
        return RescalingRow(n, probs)
    tails = _as_fractions(F, "F", n)
    if tails[0] != 1:
        raise RescalingError(f"F[0] must be 1, got {tails[0]}")
    extended = list(tails) + [Fraction(0)]
    probs = [extended[k] - extended[k + 1] for k in range(n + 1)]
    if any(p < 0 for p in probs):
        raise RescalingError("F must be weakly decreasing (with F[n+1] = 0)")
    return RescalingRow(n, probs)


class RescalingFamily:
    """A rescaling row for every n >= 1, produced by a pure generator.

    ``mu_fn(n, k)`` must return the exact probability of size k among n+1
    sizes; each instantiated row is validated.  Rows are cached per n.
    """

    def __init__(self, name: str, mu_fn: Callable[[int, int], Fraction]):
        self.name = name
        self._mu_fn = mu_fn
        self._rows: dict[int, RescalingRow] = {}

    def row(self, n: int) -> RescalingRow:
        if n not in self._rows:
            self._rows[n] = RescalingRow(n, [self._mu_fn(n, k) for k in range(n + 1)])
        return self._rows[n]

    def mu(self, n: int, k: int) -> Fraction:
        if 0 <= k <= n:
            return self.row(n).mu[k]
        return Fraction(0)

    def f(self, n: int, k: int) -> Fraction:
        if 0 <= k <= n:
            return self.row(n).f[k]
        return Fraction(0)

    def F(self, n: int, k: int) -> Fraction:
        if k < 0:
            raise RescalingError("F is indexed by k >= 0")
        if k > n:
            return Fraction(0)
        return self.row(n).F[k]

    def __repr__(self) -> str:
        return f"RescalingFamily({self.name!r})"


def _uniform_mu(n: int, k: int) -> Fraction:
    return Fraction(1, n + 1)


def _coleman_mu(n: int, k: int) -> Fraction:
    return Fraction(math.comb(n, k), 2**n)


def _shapley_mu(n: int, k: int) -> Fraction:
    if k == 0:
        return Fraction(0)
    return Fraction(1) / (k * harmonic(n))


BUILTIN_FAMILIES = ("uniform", "coleman", "shapley")


def builtin_family(name: str) -> RescalingFamily:
    """Built-in families.

    * ``uniform``: mu is uniform over sizes 0..n (tail sums 1 - k/(n+1));
      the simplest row, and the one behind the plain decisiveness index.
    * ``coleman``: mu is binomial(n, 1/2), i.e. constant f = 2**-n; its
      normalized semivalue is the Banzhaf value.
    * ``shapley``: mu[k] = 1/(k * H_n) for k >= 1; its normalized semivalue
      is the Shapley value.
    """
    if name == "uniform":
        return RescalingFamily("uniform", _uniform_mu)
    if name == "coleman":
        return RescalingFamily("coleman", _coleman_mu)
    if name == "shapley":
        return RescalingFamily("shapley", _shapley_mu)
    raise RescalingError(f"unknown family {name!r}; expected one of {BUILTIN_FAMILIES}")


class SizeWeights:
    """A bare per-size weight function f(n, k), not necessarily a probability row.

    Used for recursion checks on weight functions that are not admissible
    rows themselves (e.g. a family's f divided by its normalizing constant).
    """

    def __init__(self, name: str, fn: Callable[[int, int], Fraction]):
        self.name = name
        self._fn = fn

    def f(self, n: int, k: int) -> Fraction:
        if 0 <= k <= n:
            return Fraction(self._fn(n, k))
        return Fraction(0)

    def mu(self, n: int, k: int) -> Fraction:
        return self.f(n, k) * math.comb(n, k) if 0 <= k <= n else Fraction(0)

    def F(self, n: int, k: int) -> Fraction:
        return sum((self.mu(n, j) for j in range(k, n + 1)), Fraction(0))

    def __repr__(self) -> str:
        return f"SizeWeights({self.name!r})"


WeightSource = Union[RescalingFamily, SizeWeights, Callable[[int, int], Fraction]]


def normalized_weights(family: RescalingFamily) -> SizeWeights:
    """The family's f divided per-n by its normalizing constant c_n."""
    def fn(n: int, k: int) -> Fraction:
        return family.f(n, k) / family.row(n).c_norm()
    return SizeWeights(f"{family.name}/c_n", fn)


RECURSION_FORMS = ("standard_f", "F_form", "extended_f", "mu_form")


@dataclass
class RecursionReport:
    """Outcome of an exact cross-n identity check.

    ``violations`` lists every failing (n, k) with both exact sides, in the
    iteration order n = 1..n_max-1, k = 1..n.
    """

    form: str
    n_max: int
    source: str
    violations: list[tuple[int, int, Fraction, Fraction]] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.violations

    @property
    def first_violation(self) -> tuple[int, int, Fraction, Fraction] | None:
        return self.violations[0] if self.violations else None

    def witnesses(self) -> list[tuple[int, int]]:
        return [(n, k) for n, k, _, _ in self.violations]


def check_recursion(weights: WeightSource, form: str, n_max: int) -> RecursionReport:
    """Exactly check a cross-n identity for all 1 <= n < n_max, 1 <= k <= n.

    Out-of-range weights are zero (f and mu vanish for k > n, as do the tail
    sums F).  Supported forms:

    * ``standard_f``:  f(n,k) = f(n+1,k) + f(n+1,k+1) — the coherence
      condition for a weight family to define one value across all player
      counts in the standard model.
    * ``F_form``: the same condition rewritten in tail sums,
      F(n,k) - F(n,k+1) = (n+1-k)/(n+1) F(n+1,k) + (2k-n)/(n+1) F(n+1,k+1)
      - (k+1)/(n+1) F(n+1,k+2).
    * ``mu_form``: the same condition in probabilities,
      mu_n(k) = (1 - k/(n+1)) mu_{n+1}(k) + (k+1)/(n+1) mu_{n+1}(k+1).
    * ``extended_f``: f(n,k) = f(n,k+1) + f(n+1,k+1) — the printed analogue
      for the duality-closed model; checked verbatim and reported, not
      asserted (it fails even for the uniform family).
    """
    if form not in RECURSION_FORMS:
        raise RescalingError(f"unknown form {form!r}; expected one of {RECURSION_FORMS}")
    if isinstance(weights, RescalingFamily) or isinstance(weights, SizeWeights):
        source = weights
        name = weights.name
    else:
        source = SizeWeights(getattr(weights, "__name__", "custom"), weights)
        name = source.name

    report = RecursionReport(form=form, n_max=n_max, source=name)
    for n in range(1, n_max):
        for k in range(1, n + 1):
            if form == "standard_f":
                lhs = source.f(n, k)
                rhs = source.f(n + 1, k) + source.f(n + 1, k + 1)
            elif form == "extended_f":
                lhs = source.f(n, k)
                rhs = source.f(n, k + 1) + source.f(n + 1, k + 1)
            elif form == "mu_form":
                lhs = source.mu(n, k)
                rhs = ((1 - Fraction(k, n + 1)) * source.mu(n + 1, k)
                       + Fraction(k + 1, n + 1) * source.mu(n + 1, k + 1))
            else:  # F_form
                lhs = source.F(n, k) - source.F(n, k + 1)
                rhs = (Fraction(n + 1 - k, n + 1) * source.F(n + 1, k)
                       + Fraction(2 * k - n, n + 1) * source.F(n + 1, k + 1)
                       - Fraction(k + 1, n + 1) * source.F(n + 1, k + 2))
            if lhs != rhs:
                report.violations.append((n, k, lhs, rhs))
    return report

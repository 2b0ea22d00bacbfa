"""Exact finite-alphabet probability algebra and information measures.

Conventions used throughout the library:

* All information quantities are in bits (logarithms base 2), with the
  usual continuity convention 0 * log 0 = 0.
* A joint distribution is a dense row-major table over an ordered tuple of
  named finite alphabets; the first variable is the outermost axis.
* Masses are either exact rationals (`fractions.Fraction`, covering integer
  inputs) or doubles, never mixed within one table.  The representation is
  carried as a tag so downstream constructions can insist on exactness.
* Tables are validated, never silently renormalized: a table that does not
  sum to one is an error, not a hint.
* Values are immutable after construction and every operation is a pure
  function of its inputs (plus an explicit seed where randomness is asked
  for), so everything here is safe to use from concurrent callers.

Dense tables target desk-scale alphabets; anything beyond ~1e6 cells is
rejected explicitly rather than degrading.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    MassNotOne,
    MixedRepresentation,
    NameCollision,
    NegativeMass,
    OverlappingSubsets,
    ShapeMismatch,
    SourceMismatch,
    TableTooLarge,
    UnknownVariable,
)

__all__ = [
    "MAX_CELLS",
    "Alphabet",
    "JointDistribution",
    "DeterministicMap",
    "InfoValue",
    "validate_joint",
    "entropy",
    "conditional_entropy",
    "mutual_information",
    "apply_map",
    "product_compose",
    "key_identity_residual",
    "random_joint",
    "entropy_bits",
]

# Dense-table budget: product alphabets beyond this are rejected.
MAX_CELLS = 1_000_000

DOUBLE_MASS_TOL = 1e-12


@dataclass(frozen=True)
class Alphabet:
    """Named ordered finite alphabet of distinct string symbols."""

    name: str
    symbols: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if not self.name:
            raise ShapeMismatch("alphabet name must be non-empty")
        if len(self.symbols) < 1:
            raise ShapeMismatch(f"alphabet {self.name!r} needs at least one symbol")
        index = {}
        for pos, sym in enumerate(self.symbols):
            if not isinstance(sym, str):
                raise ShapeMismatch(
                    f"alphabet {self.name!r}: symbol {sym!r} is not a string"
                )
            if sym in index:
                raise ShapeMismatch(f"alphabet {self.name!r}: duplicate symbol {sym!r}")
            index[sym] = pos
        object.__setattr__(self, "_index", index)

    @property
    def size(self) -> int:
        return len(self.symbols)

    def index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise UnknownVariable(
                f"symbol {symbol!r} not in alphabet {self.name!r}"
            ) from None


@dataclass(frozen=True)
class JointDistribution:
    """Dense joint pmf over an ordered tuple of alphabets.

    `mass` is row-major with the first variable outermost.  `exact` tags the
    representation: True means every entry is a Fraction and all algebra on
    the table is exact; False means doubles.  Use :func:`validate_joint` to
    build one from raw input; the constructor trusts its caller.
    """

    variables: tuple[Alphabet, ...]
    mass: tuple[Fraction | float, ...]
    exact: bool
    _dense: np.ndarray | None = field(
        default=None, init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "mass", tuple(self.mass))
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise NameCollision(f"duplicate variable names in joint: {names}")

    @property
    def var_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(v.size for v in self.variables)

    @property
    def cells(self) -> int:
        return math.prod(self.shape)

    def axis(self, name: str) -> int:
        for pos, v in enumerate(self.variables):
            if v.name == name:
                return pos
        raise UnknownVariable(f"variable {name!r} not in joint {self.var_names}")

    def variable(self, name: str) -> Alphabet:
        return self.variables[self.axis(name)]

    def dense(self) -> np.ndarray:
        """Float view of the table, shaped like `shape` (cached)."""
        if self._dense is None:
            arr = np.array([float(m) for m in self.mass], dtype=float)
            arr = arr.reshape(self.shape)
            object.__setattr__(self, "_dense", arr)
        return self._dense

    def flat_index(self, positions: Sequence[int]) -> int:
        idx = 0
        for pos, var in zip(positions, self.variables):
            idx = idx * var.size + pos
        return idx

    def prob(self, symbols: Sequence[str]) -> Fraction | float:
        positions = [v.index(s) for v, s in zip(self.variables, symbols)]
        return self.mass[self.flat_index(positions)]

    def marginal(self, names: Sequence[str]) -> "JointDistribution":
        """Exact marginal over `names`, in the given order."""
        axes = [self.axis(n) for n in names]
        if len(set(axes)) != len(axes):
            raise OverlappingSubsets(f"repeated variable in marginal request {names}")
        kept = [self.variables[a] for a in axes]
        zero: Fraction | float = Fraction(0) if self.exact else 0.0
        out = [zero] * math.prod(v.size for v in kept)
        shape = self.shape
        strides = _strides(shape)
        out_sizes = [v.size for v in kept]
        for flat, m in enumerate(self.mass):
            if not m:
                continue
            pos = [(flat // strides[a]) % shape[a] for a in axes]
            o = 0
            for p, size in zip(pos, out_sizes):
                o = o * size + p
            out[o] += m
        return JointDistribution(tuple(kept), tuple(out), self.exact)

    def cell_symbols(self, flat: int) -> tuple[str, ...]:
        shape = self.shape
        strides = _strides(shape)
        return tuple(
            v.symbols[(flat // strides[a]) % shape[a]]
            for a, v in enumerate(self.variables)
        )


@dataclass(frozen=True)
class DeterministicMap:
    """Total lookup table from a (possibly product) source to a target alphabet.

    `source` is the ordered tuple of source alphabets; a single-alphabet
    source uses plain string keys, a product source uses tuples of symbols.
    `numeric_labels` optionally embeds target symbols on the real line and
    must be injective when present.
    """

    source: tuple[Alphabet, ...]
    target: Alphabet
    table: Mapping[str | tuple[str, ...], str]
    numeric_labels: Mapping[str, float] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "source", tuple(self.source))
        table = dict(self.table)
        normalized: dict[tuple[str, ...], str] = {}
        for key, value in table.items():
            tkey = (key,) if isinstance(key, str) else tuple(key)
            normalized[tkey] = value
        for combo in _symbol_product(self.source):
            if combo not in normalized:
                raise SourceMismatch(f"map is not total: no entry for {combo}")
            value = normalized[combo]
            if value not in self.target._index:
                raise UnknownVariable(
                    f"map value {value!r} not in target alphabet {self.target.name!r}"
                )
        if len(normalized) != math.prod(a.size for a in self.source):
            raise SourceMismatch("map table has keys outside the source alphabet")
        object.__setattr__(self, "table", normalized)
        if self.numeric_labels is not None:
            labels = dict(self.numeric_labels)
            if set(labels) != set(self.target.symbols):
                raise UnknownVariable("numeric labels must cover the target alphabet")
            if len(set(labels.values())) != len(labels):
                raise ShapeMismatch("numeric labels must be injective")
            object.__setattr__(self, "numeric_labels", labels)

    def __call__(self, *symbols: str) -> str:
        return self.table[tuple(symbols)]

    @classmethod
    def identity(cls, alphabet: Alphabet, target_name: str | None = None,
                 numeric: bool = False) -> "DeterministicMap":
        target = Alphabet(target_name or alphabet.name, alphabet.symbols)
        labels = (
            {s: float(i) for i, s in enumerate(alphabet.symbols)} if numeric else None
        )
        return cls((alphabet,), target, {s: s for s in alphabet.symbols}, labels)


_INFO_KINDS = (
    "entropy",
    "conditional-entropy",
    "mutual-information",
    "conditional-mutual-information",
)


@dataclass(frozen=True)
class InfoValue:
    """An information quantity in bits, tagged by kind."""

    value: float
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in _INFO_KINDS:
            raise ShapeMismatch(f"unknown info kind {self.kind!r}")
        if not math.isfinite(self.value):
            raise ShapeMismatch(f"non-finite information value {self.value!r}")
        if self.kind in ("entropy", "mutual-information") and self.value < -1e-12:
            raise ShapeMismatch(
                f"{self.kind} must be nonnegative, got {self.value!r}"
            )

    def __float__(self) -> float:
        return self.value


def _strides(shape: Sequence[int]) -> list[int]:
    strides = [1] * len(shape)
    for a in range(len(shape) - 2, -1, -1):
        strides[a] = strides[a + 1] * shape[a + 1]
    return strides


def _symbol_product(alphabets: Sequence[Alphabet]) -> Iterable[tuple[str, ...]]:
    if not alphabets:
        return
    combos: list[tuple[str, ...]] = [()]
    for a in alphabets:
        combos = [c + (s,) for c in combos for s in a.symbols]
    yield from combos


def entropy_bits(p: np.ndarray | Sequence[float]) -> float:
    """-sum p log2 p over a float mass vector, with 0 log 0 = 0."""
    arr = np.asarray(p, dtype=float).ravel()
    positive = arr[arr > 0.0]
    return float(-np.sum(positive * np.log2(positive)))


def validate_joint(
    raw: Sequence[Fraction | float | int],
    variables: Sequence[Alphabet],
) -> JointDistribution:
    """Check a raw row-major mass table against its alphabets.

    Integers and Fractions make an exact table, floats a double one; mixing
    the two is rejected.  The table must be nonnegative and sum to one
    (exactly for rationals, within 1e-12 for doubles).
    """
    variables = tuple(variables)
    if not variables:
        raise ShapeMismatch("a joint needs at least one variable")
    expected = math.prod(v.size for v in variables)
    if expected > MAX_CELLS:
        raise TableTooLarge(
            f"dense table of {expected} cells exceeds the {MAX_CELLS} cell budget"
        )
    entries = list(raw)
    if len(entries) != expected:
        raise ShapeMismatch(
            f"mass table has {len(entries)} entries, alphabets imply {expected}"
        )
    has_float = any(isinstance(e, float) for e in entries)
    has_exact = any(isinstance(e, (Fraction, int)) and not isinstance(e, bool)
                    for e in entries)
    if has_float and has_exact:
        # A literal 0 or 1 among floats is harmless; only true mixing fails.
        exact_entries = [e for e in entries
                         if isinstance(e, (Fraction, int)) and e not in (0, 1)]
        if exact_entries:
            raise MixedRepresentation(
                "mass table mixes exact rationals with doubles"
            )
        has_exact = False
    exact = not has_float
    if exact:
        mass_exact = tuple(Fraction(e) for e in entries)
        for i, m in enumerate(mass_exact):
            if m < 0:
                raise NegativeMass(f"mass[{i}] = {m} is negative")
        total = sum(mass_exact, Fraction(0))
        if total != 1:
            raise MassNotOne(f"exact mass sums to {total}, deficit {1 - total}")
        return JointDistribution(variables, mass_exact, True)
    mass_float = tuple(float(e) for e in entries)
    for i, m in enumerate(mass_float):
        if m < 0:
            raise NegativeMass(f"mass[{i}] = {m} is negative")
    total_f = math.fsum(mass_float)
    if abs(total_f - 1.0) > DOUBLE_MASS_TOL:
        raise MassNotOne(f"double mass sums to {total_f!r}, deficit {1.0 - total_f!r}")
    return JointDistribution(variables, mass_float, False)


def _subset_axes(j: JointDistribution, names: Sequence[str]) -> tuple[int, ...]:
    axes = tuple(j.axis(n) for n in names)
    if len(set(axes)) != len(axes):
        raise OverlappingSubsets(f"repeated variable in subset {tuple(names)}")
    return axes


def _marginal_entropy(j: JointDistribution, names: Sequence[str]) -> float:
    """Entropy of the float marginal over `names` (all variables if empty)."""
    if not names:
        return 0.0
    axes = _subset_axes(j, names)
    drop = tuple(a for a in range(len(j.variables)) if a not in axes)
    table = j.dense().sum(axis=drop) if drop else j.dense()
    return entropy_bits(table)


def entropy(j: JointDistribution, variables: Sequence[str] | None = None) -> InfoValue:
    """H of the marginal over `variables` (default: all), in bits."""
    names = tuple(variables) if variables is not None else j.var_names
    return InfoValue(_marginal_entropy(j, names), "entropy")


def conditional_entropy(
    j: JointDistribution, target: Sequence[str], given: Sequence[str]
) -> InfoValue:
    """H(target | given) = H(target, given) - H(given), in bits."""
    target = tuple(target)
    given = tuple(given)
    if set(target) & set(given):
        raise OverlappingSubsets("conditional entropy subsets must be disjoint")
    _subset_axes(j, target + given)
    value = _marginal_entropy(j, target + given) - _marginal_entropy(j, given)
    return InfoValue(value, "conditional-entropy")


def _union(*groups: Sequence[str]) -> tuple[str, ...]:
    seen: list[str] = []
    for g in groups:
        for n in g:
            if n not in seen:
                seen.append(n)
    return tuple(seen)


def mutual_information(
    j: JointDistribution,
    a: Sequence[str],
    b: Sequence[str],
    given: Sequence[str] = (),
) -> InfoValue:
    """I(A;B|C) in bits via the four-entropy expansion; empty A or B gives 0.

    A and B must be disjoint; the conditioning set may overlap either (for
    example I(A;B|B) is 0), since the entropy expansion is taken over unions.
    """
    a, b, c = tuple(a), tuple(b), tuple(given)
    kind = "conditional-mutual-information" if c else "mutual-information"
    if not a or not b:
        return InfoValue(0.0, kind)
    if set(a) & set(b):
        raise OverlappingSubsets(
            f"information subsets must be disjoint: {a} overlaps {b}"
        )
    _subset_axes(j, _union(a, b, c))
    value = (
        _marginal_entropy(j, _union(a, c))
        + _marginal_entropy(j, _union(b, c))
        - _marginal_entropy(j, _union(a, b, c))
        - _marginal_entropy(j, c)
    )
    if kind == "mutual-information" and -1e-12 < value < 0.0:
        value = 0.0
    return InfoValue(value, kind)


def apply_map(
    j: JointDistribution, m: DeterministicMap, new_name: str
) -> JointDistribution:
    """Extend `j` with a new variable carrying the image of `m`.

    The map's source alphabets are matched to variables of `j` by name; the
    new variable is appended as the innermost axis and the old marginal is
    unchanged (exactly so for rational tables).
    """
    if new_name in j.var_names:
        raise NameCollision(f"variable {new_name!r} already present")
    source_axes = []
    for alpha in m.source:
        axis = j.axis(alpha.name)
        if j.variables[axis].symbols != alpha.symbols:
            raise SourceMismatch(
                f"map source {alpha.name!r} disagrees with the joint's alphabet"
            )
        source_axes.append(axis)
    new_alpha = Alphabet(new_name, m.target.symbols)
    if j.cells * new_alpha.size > MAX_CELLS:
        raise TableTooLarge("extended table would exceed the dense cell budget")
    zero: Fraction | float = Fraction(0) if j.exact else 0.0
    out = [zero] * (j.cells * new_alpha.size)
    shape = j.shape
    strides = _strides(shape)
    for flat, mass in enumerate(j.mass):
        key = tuple(
            j.variables[a].symbols[(flat // strides[a]) % shape[a]]
            for a in source_axes
        )
        t = new_alpha.index(m.table[key])
        out[flat * new_alpha.size + t] = mass
    return JointDistribution(j.variables + (new_alpha,), tuple(out), j.exact)


def product_compose(parts: Sequence[JointDistribution]) -> JointDistribution:
    """Independent product of joints with disjoint variable names."""
    parts = list(parts)
    if not parts:
        raise ShapeMismatch("product_compose needs at least one part")
    if len(parts) == 1:
        return parts[0]
    seen: set[str] = set()
    for p in parts:
        overlap = seen & set(p.var_names)
        if overlap:
            raise NameCollision(f"variable names shared across parts: {sorted(overlap)}")
        seen |= set(p.var_names)
    exact = all(p.exact for p in parts)
    if not exact and any(p.exact for p in parts):
        raise MixedRepresentation(
            "cannot compose exact and double parts; convert explicitly first"
        )
    cells = math.prod(p.cells for p in parts)
    if cells > MAX_CELLS:
        raise TableTooLarge(f"product table of {cells} cells exceeds the budget")
    mass: list[Fraction | float] = list(parts[0].mass)
    for p in parts[1:]:
        mass = [m1 * m2 for m1 in mass for m2 in p.mass]
    variables = tuple(v for p in parts for v in p.variables)
    return JointDistribution(variables, tuple(mass), exact)


def key_identity_residual(
    j: JointDistribution, s: str = "S", x: str = "X", u: str = "U"
) -> float:
    """Residual of I(X;U) - [I(S;U) + H(X|S) - H(X|U,S) - I(S;U|X)].

    The bracket is an algebraic identity, so the residual is zero for every
    valid joint up to floating-point evaluation (|residual| <= 1e-9).
    """
    lhs = mutual_information(j, (x,), (u,)).value
    rhs = (
        mutual_information(j, (s,), (u,)).value
        + conditional_entropy(j, (x,), (s,)).value
        - conditional_entropy(j, (x,), (u, s)).value
        - mutual_information(j, (s,), (u,), (x,)).value
    )
    return lhs - rhs


def random_joint(
    shape: Sequence[int],
    seed: int,
    zero_fraction: float = 0.0,
    names: Sequence[str] | None = None,
    exact: bool = True,
) -> JointDistribution:
    """Reproducible random joint with rational masses by default.

    Cell weights are integers drawn uniformly from 1..999 and normalized by
    their sum, so the exact table is a true pmf by construction.  A
    `zero_fraction` in [0, 1) knocks cells to zero independently (at least
    one cell always survives).
    """
    shape = tuple(int(n) for n in shape)
    if any(n < 1 for n in shape):
        raise ShapeMismatch(f"alphabet sizes must be >= 1, got {shape}")
    if not 0.0 <= zero_fraction < 1.0:
        raise ShapeMismatch("zero_fraction must lie in [0, 1)")
    if names is None:
        names = tuple(f"V{i + 1}" for i in range(len(shape)))
    variables = tuple(
        Alphabet(name, tuple(str(k) for k in range(n)))
        for name, n in zip(names, shape)
    )
    rng = random.Random(seed)
    cells = math.prod(shape)
    weights = [rng.randint(1, 999) for _ in range(cells)]
    if zero_fraction > 0.0:
        for i in range(cells):
            if rng.random() < zero_fraction:
                weights[i] = 0
        if not any(weights):
            weights[rng.randrange(cells)] = 1
    total = sum(weights)
    if exact:
        mass = tuple(Fraction(w, total) for w in weights)
        return validate_joint(mass, variables)
    return validate_joint([w / total for w in weights], variables)

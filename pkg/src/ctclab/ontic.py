"""Classical finite ontologies: reversible dynamics and epistemic distributions.

A system has a finite set of ontic states (labeled 0..size-1 internally;
cycle notation is 1-based, matching the usual convention). Reversible
dynamics are permutations; an observer's knowledge is a probability
distribution over ontic states, kept as exact rationals so stationarity
checks are exact rather than approximate.

A closed timelike curve identifies the post-interaction ontic state of the
chronology-violating system with its pre-interaction state: consistency
requires a fixed point of the (restricted) dynamics. A scenario with no
fixed point is a consistency paradox; a paradox whose *distribution*-level
dynamics nevertheless has a stationary solution is a concealed paradox.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction


class Permutation:
    """Bijection on {0, .., size-1}, stored as its image tuple."""

    __slots__ = ("image",)

    def __init__(self, image):
        img = tuple(int(i) for i in image)
        if sorted(img) != list(range(len(img))):
            raise ValueError(f"not a bijection on 0..{len(img) - 1}: {img}")
        self.image = img

    @property
    def size(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.image == other.image

    def __hash__(self) -> int:
        return hash(self.image)

    def __repr__(self) -> str:
        return f"Permutation({self.cycle_string()!r}, size={self.size})"

    @classmethod
    def identity(cls, size: int) -> "Permutation":
        return cls(range(size))

    @classmethod
    def from_cycles(cls, spec: str, size: int) -> "Permutation":
        """Parse 1-based cycle notation, e.g. "(1 2 3)(4)".

        Elements not mentioned are fixed. Labels must lie in 1..size and
        may appear at most once.
        """
        if size < 1:
            raise ValueError("size must be positive")
        text = spec.strip()
        if text and not re.fullmatch(r"(\s*\(\s*\d+(\s+\d+)*\s*\)\s*)+", text):
            raise ValueError(f"malformed cycle notation: {spec!r}")
        image = list(range(size))
        seen = set()
        for group in re.findall(r"\(([^()]*)\)", text):
            labels = [int(tok) for tok in group.split()]
            for lab in labels:
                if not 1 <= lab <= size:
                    raise ValueError(f"cycle label {lab} out of range 1..{size}")
                if lab in seen:
                    raise ValueError(f"cycle label {lab} repeated in {spec!r}")
                seen.add(lab)
            for k, lab in enumerate(labels):
                image[lab - 1] = labels[(k + 1) % len(labels)] - 1
        return cls(image)

    @classmethod
    def from_json(cls, obj) -> "Permutation":
        """Parse {"size": n, "cycles": "(1 2)"} or {"size": n, "image": [..]}."""
        try:
            size = int(obj["size"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed permutation object: {exc}") from exc
        if "cycles" in obj:
            return cls.from_cycles(obj["cycles"], size)
        if "image" in obj:
            img = obj["image"]
            if len(img) != size:
                raise ValueError(f"image length {len(img)} != size {size}")
            return cls(img)
        raise ValueError("permutation object needs a 'cycles' or 'image' field")

    def to_json(self) -> dict:
        return {"size": self.size, "image": list(self.image)}

    def compose(self, other: "Permutation") -> "Permutation":
        """Composition self o other (``other`` acts first)."""
        if other.size != self.size:
            raise ValueError(f"size mismatch: {self.size} vs {other.size}")
        return Permutation(self.image[other.image[i]] for i in range(self.size))

    def inverse(self) -> "Permutation":
        inv = [0] * self.size
        for i, j in enumerate(self.image):
            inv[j] = i
        return Permutation(inv)

    def cycles(self) -> tuple:
        """Cycle decomposition (0-based), each cycle starting at its minimum."""
        seen = [False] * self.size
        out = []
        for start in range(self.size):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self.image[start]
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = self.image[j]
            out.append(tuple(cyc))
        return tuple(out)

    def fixed_points(self) -> frozenset:
        return frozenset(i for i in range(self.size) if self.image[i] == i)

    def cycle_string(self) -> str:
        """1-based cycle notation for display."""
        return "".join(
            "(" + " ".join(str(i + 1) for i in cyc) + ")" for cyc in self.cycles())


class EpistemicDistribution:
    """Probability distribution over ontic states, with exact rational weights."""

    __slots__ = ("probs",)

    def __init__(self, probs):
        vals = tuple(Fraction(p) for p in probs)
        if not vals:
            raise ValueError("distribution over an empty state space")
        if any(p < 0 for p in vals):
            raise ValueError(f"negative probability in {vals}")
        total = sum(vals)
        if abs(total - 1) > Fraction(1, 10 ** 12):
            raise ValueError(f"probabilities sum to {total}, not 1")
        self.probs = vals

    @property
    def size(self) -> int:
        return len(self.probs)

    def __eq__(self, other) -> bool:
        return isinstance(other, EpistemicDistribution) and self.probs == other.probs

    def __hash__(self) -> int:
        return hash(self.probs)

    def __repr__(self) -> str:
        return f"EpistemicDistribution({[str(p) for p in self.probs]})"

    @classmethod
    def uniform(cls, size: int) -> "EpistemicDistribution":
        return cls([Fraction(1, size)] * size)

    @classmethod
    def point_mass(cls, state: int, size: int) -> "EpistemicDistribution":
        if not 0 <= state < size:
            raise ValueError(f"state {state} out of range for size {size}")
        return cls([Fraction(int(i == state)) for i in range(size)])

    @classmethod
    def uniform_on(cls, states, size: int) -> "EpistemicDistribution":
        members = set(states)
        if not members:
            raise ValueError("support must be non-empty")
        w = Fraction(1, len(members))
        return cls([w if i in members else Fraction(0) for i in range(size)])

    def support(self) -> frozenset:
        return frozenset(i for i, p in enumerate(self.probs) if p > 0)

    def as_floats(self) -> tuple:
        return tuple(float(p) for p in self.probs)


def pushforward(dist: EpistemicDistribution, perm: Permutation) -> EpistemicDistribution:
    """Distribution after the dynamics: probs'[p(i)] = probs[i], exactly."""
    if dist.size != perm.size:
        raise ValueError(f"size mismatch: distribution {dist.size}, permutation {perm.size}")
    out = [Fraction(0)] * dist.size
    for i, p in enumerate(dist.probs):
        out[perm(i)] = p
    return EpistemicDistribution(out)


@dataclass(frozen=True)
class StationaryFamily:
    """Stationary distributions of a permutation: the convex hull of the basis.

    A distribution is stationary iff it is constant on every cycle, so the
    extreme points are exactly the uniform distributions on single cycles.
    """

    basis: tuple
    cycles: tuple
    description: str


def stationary_distributions(perm: Permutation) -> StationaryFamily:
    """Extreme stationary distributions, one per cycle of the permutation."""
    cycles = perm.cycles()
    basis = tuple(EpistemicDistribution.uniform_on(cyc, perm.size) for cyc in cycles)
    desc = (f"convex hull of {len(basis)} per-cycle uniform distribution(s) "
            f"on cycles {perm.cycle_string()}")
    return StationaryFamily(basis=basis, cycles=cycles, description=desc)


@dataclass(frozen=True)
class ConcealmentReport:
    """Ontic paradox vs. epistemic self-consistency for one permutation."""

    size: int
    fixed_points: frozenset
    paradox: bool
    concealed_paradox: bool
    witnesses: tuple  # stationary distributions that hide the paradox


def concealment_report(perm: Permutation) -> ConcealmentReport:
    """Flag a concealed paradox: no consistent ontic state, yet consistent knowledge.

    Every permutation has stationary distributions, so a paradox (no fixed
    point) is always concealed at the distribution level; the witnesses are
    the per-cycle uniform stationary states.
    """
    fps = perm.fixed_points()
    paradox = not fps
    family = stationary_distributions(perm)
    return ConcealmentReport(
        size=perm.size,
        fixed_points=fps,
        paradox=paradox,
        concealed_paradox=paradox,
        witnesses=family.basis,
    )


@dataclass(frozen=True)
class JointConsistencyResult:
    """Consistency analysis of one CR system interacting with a CTC system.

    States are 0-based; a pair (a, c) is consistent when the CTC component
    of the joint dynamics returns c to itself.
    """

    cr_size: int
    ctc_size: int
    consistent_pairs: frozenset   # {(cr_state, ctc_state)}
    boundary_cr_states: frozenset
    paradox: bool
    cr_outputs: dict              # (cr, ctc) -> post-interaction cr state


def pair_index(cr_state: int, ctc_state: int, ctc_size: int) -> int:
    """Product-space index with CR major: index = cr * ctc_size + ctc."""
    return cr_state * ctc_size + ctc_state


def index_pair(index: int, ctc_size: int) -> tuple:
    return index // ctc_size, index % ctc_size


def joint_consistency(perm: Permutation, cr_size: int, ctc_size: int,
                      cr_constraint=None) -> JointConsistencyResult:
    """All jointly consistent (cr, ctc) ontic pairs under the CTC condition.

    ``perm`` acts on the product space (CR-major indexing); the optional
    ``cr_constraint`` restricts the CR states considered (e.g. the support
    of a pre-interaction measurement outcome).
    """
    if perm.size != cr_size * ctc_size:
        raise ValueError(
            f"permutation size {perm.size} != cr_size * ctc_size = {cr_size * ctc_size}")
    allowed = None if cr_constraint is None else set(cr_constraint)
    pairs = set()
    outputs = {}
    for a in range(cr_size):
        if allowed is not None and a not in allowed:
            continue
        for c in range(ctc_size):
            a2, c2 = index_pair(perm(pair_index(a, c, ctc_size)), ctc_size)
            if c2 == c:
                pairs.add((a, c))
                outputs[(a, c)] = a2
    return JointConsistencyResult(
        cr_size=cr_size,
        ctc_size=ctc_size,
        consistent_pairs=frozenset(pairs),
        boundary_cr_states=frozenset(a for a, _ in pairs),
        paradox=not pairs,
        cr_outputs=outputs,
    )

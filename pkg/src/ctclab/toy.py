"""Toybit engine: knowledge-balanced epistemic states and valid transformations.

A toybit has four ontic states labeled 1..4. An observer may know at most
half of what would pin the ontic state down, so the valid epistemic states
of one toybit are the six two-element supports plus the full set. Each label
carries a (z, x) bit pair:

    1 -> (0, 0)    2 -> (0, 1)    3 -> (1, 0)    4 -> (1, 1)

The three binary measurements partition the ontic space along z ({1,2} vs
{3,4}), x ({1,3} vs {2,4}) and z xor x ({1,4} vs {2,3}); the reversible
transformations of one toybit are the 24 permutations of the labels, with
(12)(34), (13)(24) and (14)(23) playing the roles of the Pauli z, x and y
rotations. Two-toybit dynamics are generated by local permutations together
with the correlating map ``tcn`` (the toy controlled-NOT):

    z_target ^= z_control        x_control ^= x_target

For CTC analyses the chronology-violating toybit must return to the ontic
state it left with; this module reports the consistent joint states, the
boundary conditions they impose on chronology-respecting systems, paradoxes
(no consistent state), knowledge-balance violations (a forced singleton),
and epistemic concealment (an invariant valid epistemic state despite an
ontic paradox).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .ontic import EpistemicDistribution, JointConsistencyResult, Permutation, joint_consistency

LABELS = (1, 2, 3, 4)

#: Measurement partitions of a single toybit, by analog basis name.
PARTITIONS = {
    "z": (frozenset({1, 2}), frozenset({3, 4})),
    "x": (frozenset({1, 3}), frozenset({2, 4})),
    "y": (frozenset({1, 4}), frozenset({2, 3})),
}


def zx_encoding(label: int) -> tuple:
    """(z, x) bit pair of an ontic label."""
    if label not in LABELS:
        raise ValueError(f"ontic label must be 1..4, got {label}")
    return (label - 1) >> 1, (label - 1) & 1


def label_from_zx(z: int, x: int) -> int:
    return 1 + 2 * (z & 1) + (x & 1)


def _as_ontic(state, n_toybits: int) -> tuple:
    """Normalize an ontic state to a tuple of labels."""
    if isinstance(state, int):
        state = (state,)
    t = tuple(int(v) for v in state)
    if len(t) != n_toybits:
        raise ValueError(f"expected {n_toybits} labels, got {t}")
    for v in t:
        if v not in LABELS:
            raise ValueError(f"ontic label must be 1..4, got {v}")
    return t


def _pair_index(pair) -> int:
    """Product-space index of a label pair, first factor major (0-based)."""
    a, b = pair
    return 4 * (a - 1) + (b - 1)


def _index_pair(i: int) -> tuple:
    return i // 4 + 1, i % 4 + 1


# ---------------------------------------------------------------------------
# epistemic states

def _projections(support):
    pa = frozenset(s[0] for s in support)
    pb = frozenset(s[1] for s in support)
    return pa, pb


def is_valid_epistemic(support, n_toybits: int) -> bool:
    """Whether a support set satisfies the knowledge-balance restriction.

    One toybit: any two-element support, or the full set. Two toybits:
    products of valid single-toybit states, graphs of label permutations
    (maximal correlation), and the correlated half-supports
    (B x B') u (B^c x B'^c) for two-element blocks B, B' (one answered
    question about the joint system). The last class is what ``tcn``
    produces from a product of a two-element state with a full one.
    """
    states = {(_as_ontic(s, n_toybits)) for s in support}
    if not states:
        return False
    if n_toybits == 1:
        return len(states) in (2, 4)
    if n_toybits != 2:
        raise ValueError("only 1 or 2 toybits are supported")
    n = len(states)
    pa, pb = _projections(states)
    if n == 4 and len(pa) == 4 and len(pb) == 4:
        # four states hitting every label on both sides: graph of a bijection
        return True
    if states == {(a, b) for a in pa for b in pb}:
        return len(pa) in (2, 4) and len(pb) in (2, 4)
    if n == 8:
        # (B x B') u (B^c x B'^c) with two-element blocks
        for b_a in map(frozenset, itertools.combinations(LABELS, 2)):
            part = {b for a, b in states if a in b_a}
            comp = {b for a, b in states if a not in b_a}
            if len(part) == 2 and comp == set(LABELS) - part:
                block = {(a, b) for a in b_a for b in part}
                other = {(a, b) for a in set(LABELS) - b_a for b in comp}
                if states == block | other:
                    return True
    return False


class ToyEpistemicState:
    """Valid epistemic state: a knowledge-balanced support set of ontic states."""

    __slots__ = ("support", "n_toybits")

    def __init__(self, support, n_toybits: int):
        states = frozenset(_as_ontic(s, n_toybits) for s in support)
        if not is_valid_epistemic(states, n_toybits):
            raise ValueError(
                f"support {sorted(states)} violates the knowledge-balance restriction")
        self.support = states
        self.n_toybits = n_toybits

    def __eq__(self, other) -> bool:
        return (isinstance(other, ToyEpistemicState)
                and self.support == other.support
                and self.n_toybits == other.n_toybits)

    def __hash__(self) -> int:
        return hash((self.support, self.n_toybits))

    def __contains__(self, state) -> bool:
        return _as_ontic(state, self.n_toybits) in self.support

    def __len__(self) -> int:
        return len(self.support)

    def __str__(self) -> str:
        if self.n_toybits == 1:
            return "∨".join(str(s[0]) for s in sorted(self.support))
        return "∨".join(
            ".".join(str(v) for v in s) for s in sorted(self.support))

    def __repr__(self) -> str:
        return f"ToyEpistemicState({self})"

    @classmethod
    def single(cls, labels) -> "ToyEpistemicState":
        return cls({(v,) for v in labels}, 1)

    @classmethod
    def full(cls, n_toybits: int) -> "ToyEpistemicState":
        if n_toybits == 1:
            return cls({(v,) for v in LABELS}, 1)
        return cls(set(itertools.product(LABELS, LABELS)), 2)

    @classmethod
    def product(cls, a: "ToyEpistemicState", b: "ToyEpistemicState") -> "ToyEpistemicState":
        pairs = {(s[0], t[0]) for s in a.support for t in b.support}
        return cls(pairs, 2)

    def labels(self) -> frozenset:
        """Label set of a single-toybit state."""
        if self.n_toybits != 1:
            raise ValueError("labels() applies to single-toybit states")
        return frozenset(s[0] for s in self.support)

    def uniform_distribution(self) -> EpistemicDistribution:
        """Uniform distribution on the support, over the 0-based product space."""
        size = 4 ** self.n_toybits
        if self.n_toybits == 1:
            idx = {s[0] - 1 for s in self.support}
        else:
            idx = {_pair_index(s) for s in self.support}
        return EpistemicDistribution.uniform_on(idx, size)


def parse_epistemic(labels, n_toybits: int = 1) -> ToyEpistemicState:
    """Build a state from bare labels (ints for one toybit, pairs for two)."""
    if n_toybits == 1:
        return ToyEpistemicState.single(labels)
    return ToyEpistemicState(labels, 2)


def prepare_correlated(pi: Permutation) -> ToyEpistemicState:
    """Graph state {(o, pi(o))}: maximal correlation between two toybits.

    ``pi`` is a permutation of 4 elements (0-based internally).
    """
    if pi.size != 4:
        raise ValueError("correlating permutation must act on 4 labels")
    return ToyEpistemicState({(o + 1, pi(o) + 1) for o in range(4)}, 2)


@lru_cache(maxsize=None)
def valid_state_catalog(n_toybits: int) -> tuple:
    """All valid epistemic states, sorted for deterministic iteration."""
    if n_toybits == 1:
        supports = [frozenset({(a,), (b,)}) for a, b in itertools.combinations(LABELS, 2)]
        supports.append(frozenset((v,) for v in LABELS))
    elif n_toybits == 2:
        seen = set()
        singles = [frozenset({a, b}) for a, b in itertools.combinations(LABELS, 2)]
        singles.append(frozenset(LABELS))
        for sa in singles:
            for sb in singles:
                seen.add(frozenset((a, b) for a in sa for b in sb))
        for perm in itertools.permutations(LABELS):
            seen.add(frozenset(zip(LABELS, perm)))
        for ba in singles[:6]:
            for bb in singles[:6]:
                ca, cb = frozenset(LABELS) - ba, frozenset(LABELS) - bb
                seen.add(frozenset((a, b) for a in ba for b in bb)
                         | frozenset((a, b) for a in ca for b in cb))
        supports = sorted(seen, key=lambda s: (len(s), sorted(s)))
    else:
        raise ValueError("only 1 or 2 toybits are supported")
    return tuple(ToyEpistemicState(s, n_toybits) for s in supports)


# ---------------------------------------------------------------------------
# transformations

class ToyTransformation:
    """Valid reversible dynamics: a permutation of the ontic product space.

    Single-toybit transformations are arbitrary label permutations; pairs
    must lie in the group generated by local permutations and ``tcn``
    (membership is checked against the generated group).
    """

    __slots__ = ("perm", "n_toybits")

    def __init__(self, perm: Permutation, n_toybits: int, _checked: bool = False):
        if n_toybits not in (1, 2):
            raise ValueError("only 1 or 2 toybits are supported")
        if perm.size != 4 ** n_toybits:
            raise ValueError(
                f"permutation size {perm.size} != {4 ** n_toybits} for {n_toybits} toybit(s)")
        if n_toybits == 2 and not _checked and perm.image not in two_toybit_group():
            raise ValueError("permutation is not a valid two-toybit transformation")
        self.perm = perm
        self.n_toybits = n_toybits

    def __eq__(self, other) -> bool:
        return (isinstance(other, ToyTransformation) and self.perm == other.perm
                and self.n_toybits == other.n_toybits)

    def __hash__(self) -> int:
        return hash((self.perm, self.n_toybits))

    def __repr__(self) -> str:
        return f"ToyTransformation({self.perm.cycle_string()!r}, n_toybits={self.n_toybits})"

    @classmethod
    def from_cycles(cls, spec: str) -> "ToyTransformation":
        """Single-toybit transformation from 1-based cycle notation."""
        return cls(Permutation.from_cycles(spec, 4), 1)

    @classmethod
    def local(cls, first: "ToyTransformation", second: "ToyTransformation") -> "ToyTransformation":
        """Product of independent single-toybit transformations."""
        if first.n_toybits != 1 or second.n_toybits != 1:
            raise ValueError("local() takes two single-toybit transformations")
        image = [0] * 16
        for i in range(16):
            a, b = _index_pair(i)
            image[i] = _pair_index((first.perm(a - 1) + 1, second.perm(b - 1) + 1))
        return cls(Permutation(image), 2, _checked=True)

    @classmethod
    def tcn(cls, control: int = 0, target: int = 1) -> "ToyTransformation":
        """Toy controlled-NOT: z_target ^= z_control, x_control ^= x_target."""
        if {control, target} != {0, 1}:
            raise ValueError("control and target must be factors 0 and 1")
        image = [0] * 16
        for i in range(16):
            labels = list(_index_pair(i))
            z = [zx_encoding(v)[0] for v in labels]
            x = [zx_encoding(v)[1] for v in labels]
            z[target] ^= z[control]
            x[control] ^= x[target]
            image[i] = _pair_index((label_from_zx(z[0], x[0]), label_from_zx(z[1], x[1])))
        return cls(Permutation(image), 2, _checked=True)

    @classmethod
    def swap(cls) -> "ToyTransformation":
        """Exchange the ontic states of the two toybits."""
        image = [_pair_index(_index_pair(i)[::-1]) for i in range(16)]
        return cls(Permutation(image), 2, _checked=True)

    def compose(self, other: "ToyTransformation") -> "ToyTransformation":
        """Composition self o other (``other`` acts first)."""
        if self.n_toybits != other.n_toybits:
            raise ValueError("cannot compose transformations on different systems")
        return ToyTransformation(self.perm.compose(other.perm), self.n_toybits,
                                 _checked=True)

    def inverse(self) -> "ToyTransformation":
        return ToyTransformation(self.perm.inverse(), self.n_toybits, _checked=True)

    def apply(self, state) -> tuple:
        """Image of an ontic state (tuple of labels)."""
        t = _as_ontic(state, self.n_toybits)
        if self.n_toybits == 1:
            return (self.perm(t[0] - 1) + 1,)
        return _index_pair(self.perm(_pair_index(t)))

    def apply_state(self, e: ToyEpistemicState) -> ToyEpistemicState:
        """Image of an epistemic state (validity is preserved by valid maps)."""
        if e.n_toybits != self.n_toybits:
            raise ValueError("system mismatch between transformation and state")
        return ToyEpistemicState({self.apply(s) for s in e.support}, self.n_toybits)

    def fixed_points(self) -> frozenset:
        """Ontic states returned to themselves, as label tuples."""
        if self.n_toybits == 1:
            return frozenset((i + 1,) for i in self.perm.fixed_points())
        return frozenset(_index_pair(i) for i in self.perm.fixed_points())

    def cycle_string(self) -> str:
        """Cycle notation over labels: "(1 2)" or pair form "(1.2 2.1)"."""
        if self.n_toybits == 1:
            return self.perm.cycle_string()
        parts = []
        for cyc in self.perm.cycles():
            labels = [".".join(str(v) for v in _index_pair(i)) for i in cyc]
            parts.append("(" + " ".join(labels) + ")")
        return "".join(parts)


def standard_transformations() -> dict:
    """Named catalog: the Pauli analogs, the swap, and the toy controlled-NOT.

    The ``tcn`` entry takes the second factor as control, matching the CTC
    scenarios where the chronology-violating toybit controls the kick on
    the chronology-respecting one.
    """
    return {
        "(12)(34)": ToyTransformation.from_cycles("(1 2)(3 4)"),
        "(13)(24)": ToyTransformation.from_cycles("(1 3)(2 4)"),
        "(14)(23)": ToyTransformation.from_cycles("(1 4)(2 3)"),
        "swap": ToyTransformation.swap(),
        "tcn": ToyTransformation.tcn(control=1, target=0),
    }


class TwoToybitGroup:
    """The closure of local permutations and ``tcn`` under composition."""

    def __init__(self, elements: frozenset, generators: tuple):
        self.elements = elements
        self.generators = generators

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, item) -> bool:
        if isinstance(item, ToyTransformation):
            item = item.perm.image
        elif isinstance(item, Permutation):
            item = item.image
        return tuple(item) in self.elements


@lru_cache(maxsize=None)
def _two_toybit_elements() -> frozenset:
    id1 = ToyTransformation.from_cycles("(1)")
    gens = [
        ToyTransformation.local(ToyTransformation.from_cycles("(1 2)"), id1),
        ToyTransformation.local(ToyTransformation.from_cycles("(1 2 3 4)"), id1),
        ToyTransformation.local(id1, ToyTransformation.from_cycles("(1 2)")),
        ToyTransformation.local(id1, ToyTransformation.from_cycles("(1 2 3 4)")),
        ToyTransformation.tcn(control=0, target=1),
    ]
    gen_images = [g.perm.image for g in gens]
    elements = {tuple(range(16))}
    elements.update(gen_images)
    frontier = list(elements)
    while frontier:
        fresh = []
        for g in gen_images:
            for h in frontier:
                c = tuple(g[h[i]] for i in range(16))
                if c not in elements:
                    elements.add(c)
                    fresh.append(c)
        frontier = fresh
    return frozenset(elements)


def two_toybit_group() -> frozenset:
    """Image tuples of every valid two-toybit transformation."""
    return _two_toybit_elements()


def generate_two_toybit_group() -> TwoToybitGroup:
    """Group object with membership test over the generated closure."""
    id1 = ToyTransformation.from_cycles("(1)")
    gens = (
        ToyTransformation.local(ToyTransformation.from_cycles("(1 2)"), id1),
        ToyTransformation.local(ToyTransformation.from_cycles("(1 2 3 4)"), id1),
        ToyTransformation.local(id1, ToyTransformation.from_cycles("(1 2)")),
        ToyTransformation.local(id1, ToyTransformation.from_cycles("(1 2 3 4)")),
        ToyTransformation.tcn(control=0, target=1),
    )
    return TwoToybitGroup(elements=_two_toybit_elements(), generators=gens)


# ---------------------------------------------------------------------------
# measurement

class ToyMeasurement:
    """Partition of the ontic space into disjoint valid epistemic blocks.

    ``factor`` is None for a whole-system measurement; for a pair it names
    the measured toybit, and only that toybit's ontic state is disturbed.
    """

    __slots__ = ("blocks", "n_toybits", "factor", "name")

    def __init__(self, blocks, n_toybits: int, factor=None, name: str = ""):
        blocks = tuple(blocks)
        if not blocks:
            raise ValueError("measurement needs at least one block")
        union = set()
        for b in blocks:
            if not isinstance(b, ToyEpistemicState) or b.n_toybits != n_toybits:
                raise ValueError("blocks must be epistemic states on the measured system")
            if union & b.support:
                raise ValueError("measurement blocks overlap")
            union |= b.support
        full = set(itertools.product(LABELS, repeat=n_toybits))
        if union != full:
            raise ValueError("measurement blocks do not cover the ontic space")
        self.blocks = blocks
        self.n_toybits = n_toybits
        self.factor = factor
        self.name = name

    @classmethod
    def standard(cls, basis: str) -> "ToyMeasurement":
        """Single-toybit measurement along the z, x or y partition."""
        if basis not in PARTITIONS:
            raise ValueError(f"unknown measurement basis {basis!r} (want z, x or y)")
        blocks = tuple(ToyEpistemicState.single(b) for b in PARTITIONS[basis])
        return cls(blocks, 1, name=basis)

    @classmethod
    def on_factor(cls, basis: str, factor: int) -> "ToyMeasurement":
        """Measurement of one toybit of a pair, lifted to the joint space."""
        if factor not in (0, 1):
            raise ValueError("factor must be 0 or 1")
        single = cls.standard(basis)
        full = ToyEpistemicState.full(1)
        blocks = []
        for b in single.blocks:
            if factor == 0:
                blocks.append(ToyEpistemicState.product(b, full))
            else:
                blocks.append(ToyEpistemicState.product(full, b))
        return cls(tuple(blocks), 2, factor=factor, name=basis)

    def block_of(self, state) -> int:
        t = _as_ontic(state, self.n_toybits)
        for k, b in enumerate(self.blocks):
            if t in b:
                return k
        raise ValueError(f"state {t} not covered by measurement")


@dataclass(frozen=True)
class MeasurementOutcome:
    outcome: int                      # index of the observed block
    block: ToyEpistemicState          # observed epistemic state
    new_ontic: tuple                  # post-measurement ontic state
    updated_epistemic: ToyEpistemicState


def measure(ontic, m: ToyMeasurement, rng) -> MeasurementOutcome:
    """Perform a measurement with the knowledge-balance update rule.

    The outcome is the block containing the current ontic state; the ontic
    state is then resampled uniformly within the observed block (for a
    factor measurement, only the measured toybit is resampled), and the
    observer's updated epistemic state is the observed block.
    """
    t = _as_ontic(ontic, m.n_toybits)
    k = m.block_of(t)
    block = m.blocks[k]
    if m.factor is None:
        new = rng.choice(sorted(block.support))
    else:
        labels = sorted({s[m.factor] for s in block.support})
        pick = rng.choice(labels)
        new = tuple(pick if i == m.factor else v for i, v in enumerate(t))
    return MeasurementOutcome(outcome=k, block=block, new_ontic=tuple(new),
                              updated_epistemic=block)


# ---------------------------------------------------------------------------
# CTC consistency

@dataclass(frozen=True)
class ToyCtcResult:
    """Consistency verdict for a two-toybit interaction across a CTC.

    All states are 1-based label tuples/sets; ``cr_outputs`` maps each
    consistent (cr, ctc) pair to the post-interaction CR label.
    """

    transformation: ToyTransformation
    ctc_factor: int
    consistent_pairs: frozenset       # {(cr_label, ctc_label)}
    boundary_cr_states: frozenset     # CR labels admitting a consistent CTC state
    consistent_ctc_states: frozenset  # CTC labels appearing in consistent pairs
    forced_cr_states: frozenset       # boundary under the given constraint
    paradox: bool
    kb_violation: bool
    cr_outputs: dict
    joint: JointConsistencyResult


def ctc_consistent_states(t: ToyTransformation, ctc_factor: int = 1,
                          cr_constraint=None) -> ToyCtcResult:
    """Joint ontic states satisfying the CTC condition on one factor.

    The chronology-violating toybit sits on ``ctc_factor``; consistency
    requires the interaction to return it to its incoming ontic state. A
    knowledge-balance violation is flagged when the consistent CTC labels
    form an invalid epistemic state (e.g. a forced singleton).
    """
    if t.n_toybits != 2:
        raise ValueError("CTC consistency analysis needs a two-toybit interaction")
    if ctc_factor not in (0, 1):
        raise ValueError("ctc_factor must be 0 or 1")
    perm = t.perm
    if ctc_factor == 0:
        swap = ToyTransformation.swap().perm
        perm = swap.compose(perm.compose(swap))
    constraint = None
    if cr_constraint is not None:
        if isinstance(cr_constraint, ToyEpistemicState):
            labels = cr_constraint.labels()
        else:
            labels = {int(v) for v in cr_constraint}
        constraint = {v - 1 for v in labels}
    joint = joint_consistency(perm, 4, 4, cr_constraint=constraint)
    pairs = frozenset((a + 1, c + 1) for a, c in joint.consistent_pairs)
    boundary = frozenset(a + 1 for a in joint.boundary_cr_states)
    ctc_states = frozenset(c for _, c in pairs)
    kb = bool(ctc_states) and not is_valid_epistemic({(c,) for c in ctc_states}, 1)
    outputs = {(a + 1, c + 1): a2 + 1 for (a, c), a2 in joint.cr_outputs.items()}
    return ToyCtcResult(
        transformation=t,
        ctc_factor=ctc_factor,
        consistent_pairs=pairs,
        boundary_cr_states=boundary,
        consistent_ctc_states=ctc_states,
        forced_cr_states=boundary if cr_constraint is not None else frozenset(),
        paradox=joint.paradox,
        kb_violation=kb,
        cr_outputs=outputs,
        joint=joint,
    )


@dataclass(frozen=True)
class SingleCtcResult:
    """Consistency verdict for a lone toybit traversing a CTC."""

    transformation: ToyTransformation
    consistent_states: frozenset      # 1-based labels with t(o) = o
    paradox: bool
    kb_violation: bool                # consistent labels form an invalid state


def single_toybit_ctc(t: ToyTransformation) -> SingleCtcResult:
    """Fixed-point analysis of a single-toybit transformation on a CTC."""
    if t.n_toybits != 1:
        raise ValueError("single_toybit_ctc needs a single-toybit transformation")
    states = frozenset(s[0] for s in t.fixed_points())
    kb = bool(states) and not is_valid_epistemic({(v,) for v in states}, 1)
    return SingleCtcResult(transformation=t, consistent_states=states,
                           paradox=not states, kb_violation=kb)


# ---------------------------------------------------------------------------
# epistemic-level analyses

def invariant_epistemic_states(t: ToyTransformation) -> tuple:
    """Valid epistemic states mapped to themselves as sets, in catalog order."""
    return tuple(e for e in valid_state_catalog(t.n_toybits)
                 if t.apply_state(e) == e)


@dataclass(frozen=True)
class ToyConcealmentReport:
    """Ontic paradox vs. invariant-knowledge consistency for one transformation."""

    transformation: ToyTransformation
    paradox: bool
    concealed: bool
    witnesses: tuple                  # invariant valid epistemic states
    zero_knowledge_witness: bool      # the full-support state is always invariant


def epistemic_concealment_report(t: ToyTransformation) -> ToyConcealmentReport:
    """Detect a concealed paradox: invariant knowledge without a consistent ontic state.

    The zero-knowledge (full-support) state is invariant under every
    permutation, so any ontic paradox is concealed from an observer who
    applies the consistency condition to epistemic states; minimizing
    knowledge (the analog of maximizing entropy) always lands on such a
    witness.
    """
    witnesses = invariant_epistemic_states(t)
    paradox = not t.fixed_points()
    full = ToyEpistemicState.full(t.n_toybits)
    return ToyConcealmentReport(
        transformation=t,
        paradox=paradox,
        concealed=paradox and bool(witnesses),
        witnesses=witnesses,
        zero_knowledge_witness=full in witnesses,
    )


# ---------------------------------------------------------------------------
# scenario analyses

@dataclass(frozen=True)
class PrimedInteractionReport:
    """Two candidate interactions, each forcing a different CR ontic state.

    With the toy controlled-NOT the chronology-respecting toybit measured
    into 1 v 2 must be in ontic state 1; composing a prior (12) kick on
    that toybit forces 2 instead. An observer who cannot know which
    interaction will occur mixes the branches and correctly keeps 1 v 2.
    """

    plain_forced: frozenset
    primed_forced: frozenset
    mixture: dict                     # label -> Fraction
    mixture_state: ToyEpistemicState
    mixture_valid: bool


def primed_interaction_analysis() -> PrimedInteractionReport:
    """Mixture over the plain and primed controlled-NOT branches, exactly."""
    constraint = ToyEpistemicState.single({1, 2})
    plain = ToyTransformation.tcn(control=1, target=0)
    kick = ToyTransformation.local(ToyTransformation.from_cycles("(1 2)"),
                                   ToyTransformation.from_cycles("(1)"))
    primed = plain.compose(kick)   # kick the CR toybit first, then couple
    res_plain = ctc_consistent_states(plain, ctc_factor=1, cr_constraint=constraint)
    res_primed = ctc_consistent_states(primed, ctc_factor=1, cr_constraint=constraint)
    half = Fraction(1, 2)
    mixture = {}
    for res in (res_plain, res_primed):
        forced = sorted(res.forced_cr_states)
        for lab in forced:
            mixture[lab] = mixture.get(lab, Fraction(0)) + half * Fraction(1, len(forced))
    support = {lab for lab, p in mixture.items() if p > 0}
    valid = is_valid_epistemic({(v,) for v in support}, 1)
    state = ToyEpistemicState.single(support) if valid else None
    return PrimedInteractionReport(
        plain_forced=res_plain.forced_cr_states,
        primed_forced=res_primed.forced_cr_states,
        mixture=mixture,
        mixture_state=state,
        mixture_valid=valid,
    )


@dataclass(frozen=True)
class RetrodictionTable:
    """Pre/post-selection probabilities for one measurement on one toybit."""

    outcome_probs: dict               # block index -> Fraction
    conditional: dict                 # block index -> {label -> Fraction}
    marginal: dict                    # label -> Fraction


def retrodiction(e: ToyEpistemicState, m: ToyMeasurement) -> RetrodictionTable:
    """Conditional ontic probabilities given a future measurement outcome.

    Post-selecting an outcome can pin the earlier ontic state down exactly,
    but the marginal over outcomes reproduces the uniform distribution on
    the prepared support, so present knowledge never beats the balance.
    """
    if e.n_toybits != 1 or m.n_toybits != 1:
        raise ValueError("retrodiction is defined for a single toybit")
    support = {s[0] for s in e.support}
    size = len(support)
    outcome_probs = {}
    conditional = {}
    for k, block in enumerate(m.blocks):
        overlap = support & {s[0] for s in block.support}
        outcome_probs[k] = Fraction(len(overlap), size)
        conditional[k] = {
            lab: (Fraction(1, len(overlap)) if lab in overlap else Fraction(0))
            for lab in LABELS}
    marginal = {lab: Fraction(0) for lab in LABELS}
    for k in conditional:
        for lab in LABELS:
            marginal[lab] += conditional[k][lab] * outcome_probs[k]
    return RetrodictionTable(outcome_probs=outcome_probs, conditional=conditional,
                             marginal=marginal)


@dataclass(frozen=True)
class SwapCorrelationReport:
    """Correlated pair passing one member through an interaction with a CTC toybit."""

    consistent_pairs: frozenset       # {(b, c)} consistency pairs for toybit B
    ab_state_before: ToyEpistemicState
    ab_state_after: ToyEpistemicState
    decorrelated: bool


def correlation_scenario(prepared: ToyEpistemicState, t: ToyTransformation,
                         ctc_factor: int = 1) -> SwapCorrelationReport:
    """Pass toybit B of a correlated pair (A, B) through a CTC interaction.

    Toybit A is a spectator; ``t`` couples B with the chronology-violating
    toybit C. The post-interaction (A, B) support collects every consistent
    evolution of B, restricted by the boundary condition that (b, c) be
    consistent.
    """
    if prepared.n_toybits != 2:
        raise ValueError("prepared state must describe the (A, B) pair")
    res = ctc_consistent_states(t, ctc_factor=ctc_factor)
    after_support = set()
    for a, b in prepared.support:
        for bb, c in res.consistent_pairs:
            if bb == b:
                after_support.add((a, res.cr_outputs[(b, c)]))
    after = ToyEpistemicState(after_support, 2)
    return SwapCorrelationReport(
        consistent_pairs=res.consistent_pairs,
        ab_state_before=prepared,
        ab_state_after=after,
        decorrelated=after != prepared,
    )


def swap_correlation_scenario() -> SwapCorrelationReport:
    """Swap between a CTC toybit and one half of a maximally correlated pair.

    Consistency forces the chronology-violating toybit to carry exactly the
    ontic state of the toybit it swaps with, which therefore re-emerges
    unchanged: the correlation with the spectator toybit survives. This is
    the sharp contrast with the maximally mixed washout of the quantum
    fixed-point treatment.
    """
    before = prepare_correlated(Permutation.identity(4))
    return correlation_scenario(before, ToyTransformation.swap(), ctc_factor=1)

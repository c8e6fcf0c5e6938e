"""Round-based executor for multi-party protocols that consume non-local boxes.

A non-local box (NLB) is a two-port resource: each port receives one input
bit from its party, and the two output bits XOR to the AND of the inputs.
Which of the two solutions is realised is decided by one free bit, so a run
is fully determined by (strategy, input, seed) and exact output statistics
can be obtained by enumerating the finite seed space.

Locality is structural: a party program is only ever handed its own input,
the shared-randomness component, and resource outputs delivered to its own
NLB ports and channel endpoints. Execution is bulk-synchronous: each round
collects every party's resource requests, then resolves NLBs whose two ports
are both fed and delivers channel bits, all visible from the next round on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, NamedTuple

DEFAULT_MAX_SEED_BITS = 24


class ProtocolError(Exception):
    """A party program broke the resource discipline during a run."""


class UndeclaredResourceError(ProtocolError):
    pass


class ResourceReuseError(ProtocolError):
    pass


class DeadlockError(ProtocolError):
    """An NLB was fed on one port while the counterpart never arrived."""


class MissingOutputError(ProtocolError):
    pass


class EnumerationLimitError(Exception):
    """An exact enumeration would exceed the configured limit; callers may
    fall back to sampled mode."""


def nlb_evaluate(a: int, b: int, r: int) -> tuple[int, int]:
    """One NLB firing: inputs (a, b), free bit r.

    Port 0 receives r, port 1 receives r XOR (a AND b), so the outputs
    always XOR to a AND b and each port's marginal is uniform over r.
    """
    return r, r ^ (a & b)


@dataclass(frozen=True)
class NlbInstance:
    """A single-use NLB wired between two distinct parties."""

    id: str
    port0_party: int
    port1_party: int

    def __post_init__(self):
        if self.port0_party == self.port1_party:
            raise ValueError(f"NLB {self.id!r}: ports must belong to distinct parties")


@dataclass(frozen=True)
class Channel:
    """A directed one-bit communication channel, usable at most once."""

    id: str
    src: int
    dst: int

    def __post_init__(self):
        if self.src == self.dst:
            raise ValueError(f"channel {self.id!r}: src and dst must differ")


@dataclass(frozen=True)
class SharedDomain:
    """Finite domain of shared-randomness values declared by a strategy."""

    label: str
    values: tuple

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def describe(self) -> dict:
        return {"label": self.label, "size": len(self.values)}


TRIVIAL_SHARED = SharedDomain("trivial", (None,))


def bit_domain(k: int, label: str = "shared-bits") -> SharedDomain:
    return SharedDomain(label, tuple(itertools.product((0, 1), repeat=k)))


@dataclass(frozen=True)
class Seed:
    """One point of a strategy's randomness space: a free bit per declared
    NLB (in declaration order) plus an index into the shared domain."""

    nlb_bits: tuple[int, ...]
    shared_index: int = 0

    def to_json(self) -> dict:
        return {"nlb_bits": list(self.nlb_bits), "shared_index": self.shared_index}

    @classmethod
    def from_json(cls, data: dict) -> "Seed":
        return cls(tuple(data["nlb_bits"]), data["shared_index"])


class View:
    """What one party may see at the start of a round.

    ``nlb`` maps instance id -> the output bit delivered to this party's
    port, cumulatively over all previous rounds; ``received`` likewise for
    channel bits. Programs must treat views as read-only.
    """

    __slots__ = ("party", "own_input", "shared", "nlb", "received")

    def __init__(self, party, own_input, shared, nlb, received):
        self.party = party
        self.own_input = own_input
        self.shared = shared
        self.nlb = nlb
        self.received = received


@dataclass(slots=True)
class Action:
    """One round's requests: NLB inputs to submit, channel bits to send,
    and (in a program's final round) the party's output bit-string."""

    nlb_inputs: dict | None = None
    sends: dict | None = None
    output: tuple | None = None


RoundFn = Callable[[View], Action]


@dataclass(frozen=True)
class PartyProgram:
    """A per-party protocol: one pure function per round, View -> Action."""

    rounds: tuple[RoundFn, ...]


class NlbFiring(NamedTuple):
    id: str
    round: int
    inputs: tuple[int, int]
    outputs: tuple[int, int]


class ChannelSend(NamedTuple):
    id: str
    round: int
    src: int
    dst: int
    bit: int


@dataclass(frozen=True)
class Transcript:
    """Complete ledger of one run; a pure function of (strategy, input, seed)."""

    firings: tuple[NlbFiring, ...]
    sends: tuple[ChannelSend, ...]
    outputs: tuple[tuple[int, ...], ...]

    @property
    def nlb_uses(self) -> int:
        return len(self.firings)

    @property
    def comm_bits(self) -> int:
        return len(self.sends)

    def to_json(self) -> dict:
        return {
            "nlb_firings": [
                {"id": f.id, "round": f.round, "inputs": list(f.inputs),
                 "outputs": list(f.outputs)}
                for f in self.firings
            ],
            "channel_sends": [
                {"id": s.id, "round": s.round, "from": s.src, "to": s.dst,
                 "bit": s.bit}
                for s in self.sends
            ],
            "outputs": [list(o) for o in self.outputs],
        }


@dataclass(frozen=True)
class Strategy:
    """An executable protocol: programs plus the declared resource wiring.

    ``game_id`` names the game the strategy is built for (registry id), and
    ``dry_run_input`` is a canonical input used for resource accounting.
    """

    name: str
    n_parties: int
    programs: tuple[PartyProgram, ...]
    nlbs: tuple[NlbInstance, ...] = ()
    channels: tuple[Channel, ...] = ()
    shared_domain: SharedDomain = TRIVIAL_SHARED
    dry_run_input: tuple = ()
    game_id: str = ""

    def __post_init__(self):
        if len(self.programs) != self.n_parties:
            raise ValueError("one program per party required")
        ids = [x.id for x in self.nlbs] + [c.id for c in self.channels]
        if len(set(ids)) != len(ids):
            raise ValueError("resource ids must be unique")
        for x in self.nlbs:
            if not (0 <= x.port0_party < self.n_parties
                    and 0 <= x.port1_party < self.n_parties):
                raise ValueError(f"NLB {x.id!r} wired to an unknown party")
        for c in self.channels:
            if not (0 <= c.src < self.n_parties and 0 <= c.dst < self.n_parties):
                raise ValueError(f"channel {c.id!r} wired to an unknown party")
        object.__setattr__(self, "_nlb_index",
                           {x.id: (k, x) for k, x in enumerate(self.nlbs)})
        object.__setattr__(self, "_channel_index",
                           {c.id: c for c in self.channels})
        object.__setattr__(self, "_max_rounds",
                           max(len(p.rounds) for p in self.programs))

    def seed_count(self) -> int:
        return (2 ** len(self.nlbs)) * len(self.shared_domain)

    def trivial_seed(self) -> Seed:
        return Seed((0,) * len(self.nlbs), 0)


def execute(strategy: Strategy, input_tuple: tuple, seed: Seed,
            record: bool = True) -> tuple[tuple[tuple[int, ...], ...], Transcript]:
    """Run the strategy on one input under one seed.

    Returns (outcome, transcript) where outcome is the tuple of per-party
    output bit-strings. Deterministic: identical arguments give identical
    transcripts. With ``record=False`` the transcript carries only outputs
    (a fast path for bulk seed enumeration); all validity checks still run.
    """
    n = strategy.n_parties
    if len(input_tuple) != n:
        raise ValueError(f"expected {n} inputs, got {len(input_tuple)}")
    if len(seed.nlb_bits) != len(strategy.nlbs):
        raise ValueError("seed has wrong number of NLB bits")
    shared = strategy.shared_domain[seed.shared_index]

    nlb_index = strategy._nlb_index
    channel_index = strategy._channel_index
    n_nlbs = len(strategy.nlbs)
    pend0: list = [None] * n_nlbs
    pend1: list = [None] * n_nlbs
    fired = [False] * n_nlbs
    nlb_out: list[dict] = [{} for _ in range(n)]
    received: list[dict] = [{} for _ in range(n)]
    used_channels: set[str] = set()
    outputs: list = [None] * n
    firings: list[NlbFiring] = []
    sends: list[ChannelSend] = []
    programs = strategy.programs
    nlb_bits = seed.nlb_bits

    for rnd in range(strategy._max_rounds):
        to_fire: list[int] = []
        deliveries: list[tuple[int, str, int]] = []
        for i in range(n):
            rounds = programs[i].rounds
            if rnd >= len(rounds) or outputs[i] is not None:
                continue
            action = rounds[rnd](View(i, input_tuple[i], shared,
                                      nlb_out[i], received[i]))

            feeds = action.nlb_inputs
            if feeds:
                for nid, bit in feeds.items():
                    entry = nlb_index.get(nid)
                    if entry is None:
                        raise UndeclaredResourceError(
                            f"party {i} fed undeclared NLB {nid!r}")
                    idx, inst = entry
                    if i == inst.port0_party:
                        if fired[idx] or pend0[idx] is not None:
                            raise ResourceReuseError(
                                f"NLB {nid!r} fed more than once")
                        pend0[idx] = bit & 1
                    elif i == inst.port1_party:
                        if fired[idx] or pend1[idx] is not None:
                            raise ResourceReuseError(
                                f"NLB {nid!r} fed more than once")
                        pend1[idx] = bit & 1
                    else:
                        raise UndeclaredResourceError(
                            f"party {i} holds no port of NLB {nid!r}")
                    if pend0[idx] is not None and pend1[idx] is not None:
                        to_fire.append(idx)

            if action.sends:
                for cid, bit in action.sends.items():
                    chan = channel_index.get(cid)
                    if chan is None:
                        raise UndeclaredResourceError(
                            f"party {i} sent on undeclared channel {cid!r}")
                    if chan.src != i:
                        raise UndeclaredResourceError(
                            f"party {i} is not the source of channel {cid!r}")
                    if cid in used_channels:
                        raise ResourceReuseError(f"channel {cid!r} used twice")
                    used_channels.add(cid)
                    deliveries.append((chan.dst, cid, bit & 1))
                    if record:
                        sends.append(ChannelSend(cid, rnd, chan.src, chan.dst,
                                                 bit & 1))

            if action.output is not None:
                outputs[i] = tuple(action.output)

        # bulk-synchronous resolution: nothing submitted this round is
        # visible before the next one
        for idx in to_fire:
            a = pend0[idx]
            b = pend1[idx]
            inst = strategy.nlbs[idx]
            # inlined nlb_evaluate; tests pin the two paths to each other
            r = nlb_bits[idx]
            z1 = r ^ (a & b)
            fired[idx] = True
            nlb_out[inst.port0_party][inst.id] = r
            nlb_out[inst.port1_party][inst.id] = z1
            if record:
                firings.append(NlbFiring(inst.id, rnd, (a, b), (r, z1)))
        for dst, cid, bit in deliveries:
            received[dst][cid] = bit

    for i, out in enumerate(outputs):
        if out is None:
            raise MissingOutputError(f"party {i} ended without an output")
    for idx in range(n_nlbs):
        if not fired[idx] and (pend0[idx] is not None or pend1[idx] is not None):
            raise DeadlockError(
                f"NLB {strategy.nlbs[idx].id!r} fed on one port only")

    if not record:
        return tuple(outputs), Transcript((), (), tuple(outputs))
    return tuple(outputs), Transcript(tuple(firings), tuple(sends), tuple(outputs))


def enumerate_seeds(strategy: Strategy, max_seed_bits: int = DEFAULT_MAX_SEED_BITS):
    """Yield every seed exactly once; raises EnumerationLimitError when the
    cardinality 2^(#NLBs) * |shared domain| exceeds 2**max_seed_bits."""
    total = strategy.seed_count()
    if total > 2 ** max_seed_bits:
        raise EnumerationLimitError(
            f"seed space of {strategy.name} has {total} points "
            f"(limit 2**{max_seed_bits}); use sampled mode")
    nb = len(strategy.nlbs)
    for shared_index in range(len(strategy.shared_domain)):
        for bits in itertools.product((0, 1), repeat=nb):
            yield Seed(bits, shared_index)


def sample_seed(strategy: Strategy, rng) -> Seed:
    """Draw one uniform seed from the strategy's randomness space."""
    bits = tuple(rng.randrange(2) for _ in strategy.nlbs)
    return Seed(bits, rng.randrange(len(strategy.shared_domain)))

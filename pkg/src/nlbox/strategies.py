"""Constructors for the built-in strategies, one per registry id.

Registry ids: ``chsh-nlb``, ``ms-comm``, ``ms-comm-sim``, ``ms-nlb``,
``ms-nlb-sim``, ``mermin-comm``, ``mermin-comm-sim``, ``mermin-nlb``,
``mermin-nlb-sim``, ``multi-mermin-nlb:<n>``, ``dj-nlb:<n>``,
``bmaj-nlb:<n>``, ``nlb-via-comm``.

Every constructor returns an immutable Strategy runnable by the engine; the
"-sim" variants additionally declare the shared-randomness domain that makes
their exact outcome distribution uniform over the winning outcomes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .distbit import cross_pairs, flatten, majority_formula
from .engine import (Action, Channel, NlbInstance, PartyProgram, SharedDomain,
                     Strategy, TRIVIAL_SHARED, bit_domain)
from .games import EVEN_TRIPLES, ODD_TRIPLES


class StrategyError(Exception):
    pass


# --- magic square matrices ---------------------------------------------------

def alice_valid(m) -> bool:
    """Row player's matrices: every row has even parity."""
    return all(sum(row) % 2 == 0 for row in m)


def bob_valid(m) -> bool:
    """Column player's matrices: every column has odd parity."""
    return all(sum(m[i][j] for i in range(3)) % 2 == 1 for j in range(3))


def all_alice_matrices():
    return [m for m in itertools.product(EVEN_TRIPLES, repeat=3)]


def all_bob_matrices():
    out = []
    for cols in itertools.product(ODD_TRIPLES, repeat=3):
        out.append(tuple(tuple(cols[j][i] for j in range(3)) for i in range(3)))
    return out


def pair_wins_off_corner(a, b) -> bool:
    """True when the (row, column) pair answers correctly on every input
    except possibly (3,3): the matrices agree on all cells but the corner."""
    return all(a[i][j] == b[i][j]
               for i in range(3) for j in range(3) if (i, j) != (2, 2))


# A known-good pair agreeing off the corner, plus the matching column matrix
# whose bottom row equals the row player's (so the column player can switch
# to it for every "row is 3" input).
REF_ALICE = ((0, 1, 1), (1, 1, 0), (0, 1, 1))
REF_BOB0 = ((0, 1, 1), (1, 1, 0), (0, 1, 0))
REF_BOB1 = ((0, 1, 1), (1, 1, 1), (0, 1, 1))


@dataclass(frozen=True)
class MagicSquareQuadruple:
    """Matrices (a0, b0) and (a1, b1) each winning every input but (3,3),
    with a0/b1 and a1/b0 sharing their bottom-right corner entry, so the
    mismatched pairings still agree on input (3,3)."""

    a0: tuple
    a1: tuple
    b0: tuple
    b1: tuple

    def __post_init__(self):
        for m in (self.a0, self.a1):
            if not alice_valid(m):
                raise StrategyError("row matrix must have even-parity rows")
        for m in (self.b0, self.b1):
            if not bob_valid(m):
                raise StrategyError("column matrix must have odd-parity columns")
        if not pair_wins_off_corner(self.a0, self.b0):
            raise StrategyError("(a0, b0) must win every input but (3,3)")
        if not pair_wins_off_corner(self.a1, self.b1):
            raise StrategyError("(a1, b1) must win every input but (3,3)")
        if self.a0[2][2] != self.b1[2][2] or self.a1[2][2] != self.b0[2][2]:
            raise StrategyError("corner entries must be cross-coordinated")


def enumerate_quadruples() -> tuple[MagicSquareQuadruple, ...]:
    """Every quadruple satisfying the invariants, filtered from the 64x64
    matrix space, in a fixed lexicographic order."""
    pairs = [(a, b) for a in all_alice_matrices() for b in all_bob_matrices()
             if pair_wins_off_corner(a, b)]
    quads = []
    for a0, b0 in pairs:
        for a1, b1 in pairs:
            if a0[2][2] == b1[2][2] and a1[2][2] == b0[2][2]:
                quads.append(MagicSquareQuadruple(a0, a1, b0, b1))
    return tuple(quads)


def default_quadruple() -> MagicSquareQuadruple:
    for q in enumerate_quadruples():
        if q.a0 == REF_ALICE:
            return q
    raise StrategyError("no quadruple extends the reference matrices")


def comm_strategy_pairs() -> tuple:
    """All (alice, bob0, bob1) triples usable by the one-bit protocol:
    (alice, bob0) wins off the corner and bob1's bottom row equals alice's,
    so switching on the "row input is 3" flag wins everywhere."""
    out = []
    bobs = all_bob_matrices()
    for a in all_alice_matrices():
        for b0 in bobs:
            if not pair_wins_off_corner(a, b0):
                continue
            for b1 in bobs:
                if all(a[2][j] == b1[2][j] for j in range(3)):
                    out.append((a, b0, b1))
    return tuple(out)


# --- bipartite strategies ----------------------------------------------------

def chsh_nlb() -> Strategy:
    """Both parties relay their input bit into one shared NLB and answer with
    its output; the outputs XOR to the AND of the inputs for every seed."""
    box = NlbInstance("box", 0, 1)

    def feed(view):
        return Action(nlb_inputs={"box": view.own_input})

    def answer(view):
        return Action(output=(view.nlb["box"],))

    prog = PartyProgram((feed, answer))
    return Strategy(name="chsh-nlb", n_parties=2, programs=(prog, prog),
                    nlbs=(box,), dry_run_input=(0, 0), game_id="chsh")


def _check_comm_pairs(s0, s1):
    a, b0 = s0
    a1, b1 = s1
    if a != a1:
        raise StrategyError("the row player's matrix must be shared by both pairs")
    if not alice_valid(a):
        raise StrategyError("row matrix must have even-parity rows")
    if not (bob_valid(b0) and bob_valid(b1)):
        raise StrategyError("column matrices must have odd-parity columns")
    if not pair_wins_off_corner(a, b0):
        raise StrategyError("pair 0 must win every input except (3,3)")
    # the switch depends on the row input alone, so pair 1 must win every
    # input whose row is 3, i.e. bob1's bottom row equals the row matrix's
    if any(a[2][j] != b1[2][j] for j in range(3)):
        raise StrategyError("pair 1 must win every input with row input 3")
    return a, b0, b1


def _ms_comm_programs(pick):
    """pick(view) -> (alice, bob0, bob1) matrices for this run."""

    def alice_round(view):
        a, _, _ = pick(view)
        flag = 1 if view.own_input == 3 else 0
        return Action(sends={"row-is-3": flag}, output=a[view.own_input - 1])

    def bob_wait(view):
        return Action()

    def bob_answer(view):
        _, b0, b1 = pick(view)
        m = b1 if view.received["row-is-3"] else b0
        c = view.own_input - 1
        return Action(output=tuple(m[i][c] for i in range(3)))

    return (PartyProgram((alice_round,)), PartyProgram((bob_wait, bob_answer)))


def magic_square_comm(s0=None, s1=None) -> Strategy:
    """Row player announces whether her input is 3 (one bit); the column
    player answers from matrix b0 or b1 accordingly. Wins all 9 inputs."""
    if s0 is None:
        s0 = (REF_ALICE, REF_BOB0)
    if s1 is None:
        s1 = (s0[0], REF_BOB1)
    a, b0, b1 = _check_comm_pairs(s0, s1)
    fixed = (a, b0, b1)
    programs = _ms_comm_programs(lambda view: fixed)
    return Strategy(name="ms-comm", n_parties=2, programs=programs,
                    channels=(Channel("row-is-3", 0, 1),),
                    dry_run_input=(1, 1), game_id="magic-square")


def magic_square_comm_sim() -> Strategy:
    """The one-bit protocol with the matrix triple drawn uniformly from the
    whole family, which makes the outcome distribution uniform over the 8
    winning outcomes of each input."""
    dom = SharedDomain("ms-comm-pairs", comm_strategy_pairs())
    programs = _ms_comm_programs(lambda view: view.shared)
    return Strategy(name="ms-comm-sim", n_parties=2, programs=programs,
                    channels=(Channel("row-is-3", 0, 1),), shared_domain=dom,
                    dry_run_input=(1, 1), game_id="magic-square")


def _ms_nlb_programs(pick):
    """pick(view) -> MagicSquareQuadruple for this run."""

    def feed(view):
        flag = 1 if view.own_input == 3 else 0
        return Action(nlb_inputs={"pick": flag})

    def alice_answer(view):
        q = pick(view)
        a = q.a1 if view.nlb["pick"] else q.a0
        return Action(output=a[view.own_input - 1])

    def bob_answer(view):
        q = pick(view)
        b = q.b1 if view.nlb["pick"] else q.b0
        c = view.own_input - 1
        return Action(output=tuple(b[i][c] for i in range(3)))

    return (PartyProgram((feed, alice_answer)), PartyProgram((feed, bob_answer)))


def magic_square_nlb(quadruple: MagicSquareQuadruple | None = None) -> Strategy:
    """Both parties feed "my input is 3" into one NLB and play the matrix the
    output selects. The outputs match unless both inputs are 3, where the
    mismatched pairs still agree on the corner; wins all 9 inputs, 1 NLB."""
    q = quadruple if quadruple is not None else default_quadruple()
    programs = _ms_nlb_programs(lambda view: q)
    return Strategy(name="ms-nlb", n_parties=2, programs=programs,
                    nlbs=(NlbInstance("pick", 0, 1),),
                    dry_run_input=(1, 1), game_id="magic-square")


def magic_square_nlb_sim() -> Strategy:
    """Single-NLB magic square play with the quadruple drawn uniformly from
    the full family; exactly uniform over the 8 winning outcomes per input."""
    dom = SharedDomain("ms-quadruples", enumerate_quadruples())
    programs = _ms_nlb_programs(lambda view: view.shared)
    return Strategy(name="ms-nlb-sim", n_parties=2, programs=programs,
                    nlbs=(NlbInstance("pick", 0, 1),), shared_domain=dom,
                    dry_run_input=(1, 1), game_id="magic-square")


# --- Mermin-GHZ strategies ---------------------------------------------------

def _mermin_comm_strategy(name, shared_domain, constants):
    """constants(view) -> (b, c): the pre-agreed output bits of parties 1, 2."""

    def alice_wait(view):
        return Action()

    def alice_answer(view):
        b, c = constants(view)
        y = view.own_input | view.received["x-bob"]
        return Action(output=(b ^ c ^ y,))

    def bob_round(view):
        b, _ = constants(view)
        return Action(sends={"x-bob": view.own_input}, output=(b,))

    def charlie_round(view):
        _, c = constants(view)
        return Action(output=(c,))

    return Strategy(
        name=name, n_parties=3,
        programs=(PartyProgram((alice_wait, alice_answer)),
                  PartyProgram((bob_round,)), PartyProgram((charlie_round,))),
        channels=(Channel("x-bob", 1, 0),), shared_domain=shared_domain,
        dry_run_input=(0, 0, 0), game_id="mermin")


def mermin_comm() -> Strategy:
    """Parties 1 and 2 answer fixed bits; party 1 sends its input to party 0,
    who answers the OR of the two inputs (XOR the fixed bits)."""
    return _mermin_comm_strategy("mermin-comm", TRIVIAL_SHARED, lambda v: (0, 0))


def mermin_comm_sim() -> Strategy:
    """Same protocol with the two fixed bits drawn uniformly at random,
    spreading the outcome uniformly over the 4 winning outcomes."""
    return _mermin_comm_strategy("mermin-comm-sim", bit_domain(2, "fixed-bits"),
                                 lambda v: v.shared)


def _mermin_nlb_strategy(name, shared_domain, flip):
    """flip(view) -> bit; parties 1 and 2 both XOR it into their answers."""

    def feed(view):
        return Action(nlb_inputs={"or-box": view.own_input ^ 1})

    def alice_answer(view):
        return Action(output=(view.nlb["or-box"],))

    def bob_answer(view):
        return Action(output=(view.nlb["or-box"] ^ flip(view),))

    def charlie_round(view):
        return Action(output=(1 ^ flip(view),))

    return Strategy(
        name=name, n_parties=3,
        programs=(PartyProgram((feed, alice_answer)),
                  PartyProgram((feed, bob_answer)),
                  PartyProgram((charlie_round,))),
        nlbs=(NlbInstance("or-box", 0, 1),), shared_domain=shared_domain,
        dry_run_input=(0, 0, 0), game_id="mermin")


def mermin_nlb() -> Strategy:
    """Parties 0 and 1 feed their negated inputs into one NLB, so their
    answers XOR to NOT(x0 OR x1); party 2 answers 1. On the even-sum promise
    the total parity is exactly the required value, for both seeds."""
    return _mermin_nlb_strategy("mermin-nlb", TRIVIAL_SHARED, lambda v: 0)


def mermin_nlb_sim() -> Strategy:
    """Adds one shared random bit telling parties 1 and 2 whether to flip
    both their answers; with the NLB's free bit this spans the 4 winning
    outcomes uniformly."""
    return _mermin_nlb_strategy("mermin-nlb-sim", bit_domain(1, "flip"),
                                lambda v: v.shared[0])


def multi_mermin_pairwise(n: int) -> Strategy:
    """Every pair of parties shares one NLB; each party feeds its input bit
    to all its boxes and answers the parity of the bits it receives."""
    if n < 3:
        raise StrategyError("multi-mermin-nlb needs n >= 3")
    nlbs = tuple(NlbInstance(f"pair:{i}-{j}", i, j)
                 for i, j in itertools.combinations(range(n), 2))
    my_ids = [[x.id for x in nlbs if p in (x.port0_party, x.port1_party)]
              for p in range(n)]

    def make_program(p):
        ids = tuple(my_ids[p])

        def feed(view):
            return Action(nlb_inputs={i: view.own_input for i in ids})

        def answer(view):
            par = 0
            for i in ids:
                par ^= view.nlb[i]
            return Action(output=(par,))

        return PartyProgram((feed, answer))

    return Strategy(name=f"multi-mermin-nlb:{n}", n_parties=n,
                    programs=tuple(make_program(p) for p in range(n)),
                    nlbs=nlbs, dry_run_input=(0,) * n,
                    game_id=f"multi-mermin:{n}")


# --- distributed Deutsch-Jozsa -----------------------------------------------

def dj_nlb(n: int) -> Strategy:
    """Halving protocol for 2^n-bit inputs: party 0 flips her string, then the
    two run rounds of parallel two-NLB gadgets that map position pairs
    (2j, 2j+1) to one bit whose cross-XOR is (a_2j XOR b_2j) AND
    (a_2j+1 XOR b_2j+1). Each round halves the strings and preserves whether
    they differ everywhere or agree somewhere. After n - floor(lg n) rounds
    the strings are padded to length n with diametric constants (party 0
    appends 1s, party 1 appends 0s) and party 0 flips her result.
    Uses 2^(n+1) - 2^(floor(lg n)+1) NLBs."""
    if n < 1:
        raise StrategyError("dj-nlb needs n >= 1")
    length = 2 ** n
    n_rounds = n - (n.bit_length() - 1)
    final_len = 2 ** (n.bit_length() - 1)

    nlbs = []
    size = length
    for t in range(n_rounds):
        for j in range(size // 2):
            nlbs.append(NlbInstance(f"r{t}g{j}a", 0, 1))
            nlbs.append(NlbInstance(f"r{t}g{j}b", 0, 1))
        size //= 2

    def current_string(view, party, rounds_done):
        if party == 0:
            s = tuple(b ^ 1 for b in view.own_input)
        else:
            s = tuple(view.own_input)
        for t in range(rounds_done):
            nxt = []
            for j in range(len(s) // 2):
                local = s[2 * j] & s[2 * j + 1]
                nxt.append(local ^ view.nlb[f"r{t}g{j}a"] ^ view.nlb[f"r{t}g{j}b"])
            s = tuple(nxt)
        return s

    def make_program(party):
        def submit_round(t):
            def fn(view):
                s = current_string(view, party, t)
                feeds = {}
                for j in range(len(s) // 2):
                    if party == 0:
                        feeds[f"r{t}g{j}a"] = s[2 * j]
                        feeds[f"r{t}g{j}b"] = s[2 * j + 1]
                    else:
                        feeds[f"r{t}g{j}a"] = s[2 * j + 1]
                        feeds[f"r{t}g{j}b"] = s[2 * j]
                return Action(nlb_inputs=feeds)
            return fn

        def final(view):
            s = current_string(view, party, n_rounds)
            if party == 0:
                padded = s + (1,) * (n - final_len)
                return Action(output=tuple(b ^ 1 for b in padded))
            return Action(output=s + (0,) * (n - final_len))

        return PartyProgram(tuple(submit_round(t) for t in range(n_rounds)) + (final,))

    zeros = (0,) * length
    return Strategy(name=f"dj-nlb:{n}", n_parties=2,
                    programs=(make_program(0), make_program(1)),
                    nlbs=tuple(nlbs), dry_run_input=(zeros, zeros),
                    game_id=f"dj:{n}")


# --- biased majority ---------------------------------------------------------

BMAJ_DEFAULT_LIMIT = 6


def bmaj_nlb(n: int, max_n: int = BMAJ_DEFAULT_LIMIT) -> Strategy:
    """Evaluates the biased majority as a NOT/AND formula over XOR-shared
    bits, one engine round per AND gate. Gate k consumes one NLB per ordered
    party pair: party i feeds its left-operand share, party j its
    right-operand share, and each party's new share is its local conjunction
    XOR everything it received. The total output parity equals the majority
    bit for every seed."""
    if n < 2:
        raise StrategyError("bmaj-nlb needs n >= 2")
    if n > max_n:
        raise StrategyError(f"bmaj-nlb limited to n <= {max_n}")
    flat = flatten(majority_formula(n))
    gates = [node for node in flat if node[0] == "and"]
    n_gates = len(gates)
    pairs = cross_pairs(n)

    nlbs = tuple(NlbInstance(f"g{k}:{i}-{j}", i, j)
                 for k in range(n_gates) for (i, j) in pairs)
    # per (gate, party): the box ids whose outputs enter that party's share
    gate_ids = [[tuple(f"g{k}:{i}-{j}" for (i, j) in pairs if p in (i, j))
                 for p in range(n)] for k in range(n_gates)]

    def shares_pass(view, party, gates_done):
        shares = []
        for node in flat:
            kind = node[0]
            if kind == "leaf":
                shares.append(view.own_input if node[1] == party else 0)
            elif kind == "const":
                shares.append(node[1] if party == 0 else 0)
            elif kind == "not":
                c = shares[node[1]]
                shares.append(None if c is None else
                              (c ^ 1 if party == 0 else c))
            else:
                _, l, r, k = node
                if k >= gates_done or shares[l] is None or shares[r] is None:
                    shares.append(None)
                    continue
                acc = shares[l] & shares[r]
                for nid in gate_ids[k][party]:
                    acc ^= view.nlb[nid]
                shares.append(acc)
        return shares

    def make_program(party):
        def gate_round(k):
            _, l, r, _ = gates[k]

            def fn(view):
                shares = shares_pass(view, party, k)
                feeds = {}
                for i, j in pairs:
                    if i == party:
                        feeds[f"g{k}:{i}-{j}"] = shares[l]
                    elif j == party:
                        feeds[f"g{k}:{i}-{j}"] = shares[r]
                return Action(nlb_inputs=feeds)
            return fn

        def final(view):
            shares = shares_pass(view, party, n_gates)
            return Action(output=(shares[-1],))

        return PartyProgram(tuple(gate_round(k) for k in range(n_gates)) + (final,))

    return Strategy(name=f"bmaj-nlb:{n}", n_parties=n,
                    programs=tuple(make_program(p) for p in range(n)),
                    nlbs=nlbs, dry_run_input=(0,) * n, game_id=f"bmaj:{n}")


# --- NLB from one bit of communication ----------------------------------------

def nlb_via_comm() -> Strategy:
    """Replaces one NLB by one shared random bit r and one communication bit:
    party 0 reveals her input and answers r; party 1 answers
    r XOR (a AND b). The joint output distribution over r equals the NLB's
    for every input pair."""
    dom = bit_domain(1, "free-bit")

    def alice(view):
        return Action(sends={"reveal": view.own_input}, output=(view.shared[0],))

    def bob_wait(view):
        return Action()

    def bob_answer(view):
        r = view.shared[0]
        return Action(output=(r ^ (view.received["reveal"] & view.own_input),))

    return Strategy(name="nlb-via-comm", n_parties=2,
                    programs=(PartyProgram((alice,)),
                              PartyProgram((bob_wait, bob_answer))),
                    channels=(Channel("reveal", 0, 1),), shared_domain=dom,
                    dry_run_input=(0, 0), game_id="chsh")


# --- registry ----------------------------------------------------------------

STRATEGY_FAMILIES = {
    "chsh-nlb": (chsh_nlb, None),
    "ms-comm": (magic_square_comm, None),
    "ms-comm-sim": (magic_square_comm_sim, None),
    "ms-nlb": (magic_square_nlb, None),
    "ms-nlb-sim": (magic_square_nlb_sim, None),
    "mermin-comm": (mermin_comm, None),
    "mermin-comm-sim": (mermin_comm_sim, None),
    "mermin-nlb": (mermin_nlb, None),
    "mermin-nlb-sim": (mermin_nlb_sim, None),
    "multi-mermin-nlb": (multi_mermin_pairwise, "n"),
    "dj-nlb": (dj_nlb, "n"),
    "bmaj-nlb": (bmaj_nlb, "n"),
    "nlb-via-comm": (nlb_via_comm, None),
}


def get_strategy(strategy_id: str) -> Strategy:
    """Resolve a registry id like ``ms-nlb`` or ``dj-nlb:3``."""
    base, sep, param = strategy_id.partition(":")
    entry = STRATEGY_FAMILIES.get(base)
    if entry is None:
        raise StrategyError(f"unknown strategy {strategy_id!r}")
    factory, wants_n = entry
    if wants_n is None:
        if sep:
            raise StrategyError(f"strategy {base!r} takes no parameter")
        return factory()
    if not sep:
        raise StrategyError(f"strategy {base!r} needs a parameter, e.g. {base}:3")
    try:
        n = int(param)
    except ValueError:
        raise StrategyError(f"bad parameter in {strategy_id!r}") from None
    return factory(n)

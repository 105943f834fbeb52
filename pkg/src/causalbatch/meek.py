"""Orientation engine: cut-edge orientation and Meek-rule closure.

The composite `r_oriented` mirrors the two-step procedure for scoring a
batch of interventions against a ground-truth DAG: first orient every
undirected edge cut by an intervention (exactly one endpoint targeted),
then propagate with the four Meek rules until no rule fires.
"""

from __future__ import annotations

from .graphs import Batch, Dag, Intervention, Pdag, PatternMismatchError


class _State:
    """Mutable adjacency view of a Pdag used while orienting edges."""

    __slots__ = ("p", "par", "ch", "und")

    def __init__(self, pd: Pdag):
        self.p = pd.p
        self.par = [set(s) for s in pd.parents]
        self.ch = [set(s) for s in pd.children]
        self.und = [set(s) for s in pd.neighbors]

    def adjacent(self, i, j):
        return j in self.und[i] or j in self.par[i] or j in self.ch[i]

    def orient(self, i, j):
        """Turn undirected edge i-j into i->j."""
        self.und[i].discard(j)
        self.und[j].discard(i)
        self.par[j].add(i)
        self.ch[i].add(j)

    def to_pdag(self) -> Pdag:
        directed = [(i, j) for i in range(self.p) for j in self.ch[i]]
        undirected = [(i, j) for i in range(self.p) for j in self.und[i] if i < j]
        return Pdag(self.p, directed, undirected)


def _check_refines(ess: Pdag, g: Dag):
    for i, j in ess.directed:
        if (i, j) not in g.edges:
            raise PatternMismatchError(
                f"directed edge {i}->{j} not present in the supplied DAG")
    for i, j in ess.undirected:
        if not g.adjacent(i, j):
            raise PatternMismatchError(
                f"undirected edge {i}-{j} not present in the supplied DAG")


def orient_by_intervention(ess: Pdag, g: Dag, targets: Intervention) -> Pdag:
    """Orient every undirected edge of ess cut by the intervention, as in g.

    An edge i-j is cut when exactly one of its endpoints is targeted.
    """
    _check_refines(ess, g)
    st = _State(ess)
    for i, j in ess.undirected:
        if (i in targets) != (j in targets):
            if (i, j) in g.edges:
                st.orient(i, j)
            else:
                st.orient(j, i)
    return st.to_pdag()


def _rule_fires(st: _State, a, b) -> bool:
    """True if some Meek rule orients undirected a-b as a->b."""
    # R1: w->a, a-b, w and b nonadjacent  =>  a->b
    for w in st.par[a]:
        if not st.adjacent(w, b):
            return True
    # R2: a->w->b with a-b  =>  a->b
    if st.ch[a] & st.par[b]:
        return True
    # R3: a-c, a-d, c->b, d->b with c, d nonadjacent  =>  a->b
    cand = sorted(st.und[a] & st.par[b])
    for x in range(len(cand)):
        for y in range(x + 1, len(cand)):
            if not st.adjacent(cand[x], cand[y]):
                return True
    # R4: a-w, w->u, u->b, w and b nonadjacent, a adjacent u  =>  a->b
    # (the a~u edge may be undirected or directed either way)
    for w in st.und[a]:
        if st.adjacent(w, b):
            continue
        for u in st.ch[w]:
            if b in st.ch[u] and st.adjacent(a, u):
                return True
    return False


def _close(st: _State, shuffle_rng=None):
    """Apply Meek rules to a fixpoint, mutating st."""
    while True:
        pending = [(i, j) for i in range(st.p) for j in st.und[i] if i < j]
        if shuffle_rng is not None:
            shuffle_rng.shuffle(pending)
        changed = False
        for i, j in pending:
            if j not in st.und[i]:
                continue  # oriented earlier in this pass
            if _rule_fires(st, i, j):
                st.orient(i, j)
                changed = True
            elif _rule_fires(st, j, i):
                st.orient(j, i)
                changed = True
        if not changed:
            return


def meek_closure(pd: Pdag, shuffle_rng=None) -> Pdag:
    """Meek-rule fixpoint of pd.

    The caller guarantees pd is extendable (arises from a ground-truth DAG
    with its v-structures oriented); under that precondition the rules are
    sound and the fixpoint does not depend on scan order.  `shuffle_rng`
    randomizes the scan order and exists for order-independence tests.
    """
    st = _State(pd)
    _close(st, shuffle_rng)
    return st.to_pdag()


def r_oriented(b: Batch, g: Dag, ess: Pdag) -> frozenset:
    """Edges newly oriented by the batch relative to the essential graph.

    Applies cut-edge orientation for every intervention in the batch, then
    Meek closure, and returns closure.directed minus ess.directed.
    """
    _check_refines(ess, g)
    st = _State(ess)
    for targets in b:
        for i, j in ess.undirected:
            if j in st.und[i] and (i in targets) != (j in targets):
                if (i, j) in g.edges:
                    st.orient(i, j)
                else:
                    st.orient(j, i)
    _close(st)
    new = []
    for i in range(st.p):
        for j in st.ch[i]:
            if (i, j) not in ess.directed:
                new.append((i, j))
    return frozenset(new)

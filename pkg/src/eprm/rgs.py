"""Directed-graph focal elements and the graph surgery used during fusion.

Graphs carry at most one node per sample, so everything here favours
clarity and determinism over asymptotics; the longest-path scores used by
cycle removal are computed exhaustively.  Node labels must be mutually
orderable (sorting them is what makes canonical forms and tie-breaks
deterministic).
"""

from __future__ import annotations


class GraphEvent:
    """Immutable directed graph over sample labels.

    An edge ``u -> v`` reads "u precedes v".  A graph with neither nodes
    nor edges is the empty event (falsy), a transient fusion state only.
    Edgeless graphs encode plain combinations; single directed chains
    encode permutations.
    """

    __slots__ = ("nodes", "edges", "_hash")

    def __init__(self, nodes=(), edges=()):
        nodes = frozenset(nodes)
        edges = frozenset((u, v) for u, v in edges)
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop on {u!r}")
            if u not in nodes or v not in nodes:
                raise ValueError(f"edge ({u!r}, {v!r}) has an endpoint outside the node set")
        self.nodes = nodes
        self.edges = edges
        self._hash = hash((nodes, edges))

    @classmethod
    def from_edges(cls, edges):
        """Build a graph whose node set is exactly the edge endpoints."""
        edges = tuple((u, v) for u, v in edges)
        nodes = {u for u, _ in edges} | {v for _, v in edges}
        return cls(nodes, edges)

    def __bool__(self):
        return bool(self.nodes or self.edges)

    def __eq__(self, other):
        if not isinstance(other, GraphEvent):
            return NotImplemented
        return self.nodes == other.nodes and self.edges == other.edges

    def __hash__(self):
        return self._hash

    def __repr__(self):
        nodes = ",".join(repr(n) for n in sorted(self.nodes))
        edges = ",".join(f"{u!r}->{v!r}" for u, v in sorted(self.edges))
        return f"GraphEvent([{nodes}] [{edges}])"

    def sort_key(self):
        """Canonical ordering key: sorted node tuple, then sorted edge tuple."""
        return (tuple(sorted(self.nodes)), tuple(sorted(self.edges)))

    def successors(self):
        """Adjacency map node -> sorted tuple of successors."""
        succ = {u: [] for u in self.nodes}
        for u, v in self.edges:
            succ[u].append(v)
        return {u: tuple(sorted(vs)) for u, vs in succ.items()}

    def in_degrees(self):
        deg = {u: 0 for u in self.nodes}
        for _, v in self.edges:
            deg[v] += 1
        return deg

    def out_degrees(self):
        deg = {u: 0 for u in self.nodes}
        for u, _ in self.edges:
            deg[u] += 1
        return deg


def from_set(members):
    """Encode a combination: the members as nodes, no edges."""
    return GraphEvent(members, ())


def from_perm(sequence):
    """Encode an ordered sequence as a single directed chain."""
    seq = tuple(sequence)
    if len(set(seq)) != len(seq):
        raise ValueError("repeated label in permutation event")
    return GraphEvent(seq, zip(seq, seq[1:]))


def to_set(graph):
    """Decode an edgeless graph back to its member set."""
    if graph.edges:
        raise ValueError("graph carries order information; not a plain combination")
    return graph.nodes


def to_perm(graph):
    """Decode a single directed chain (or a <=1-node edgeless graph) to a sequence.

    Raises ValueError for anything that is not a chain covering all nodes.
    """
    if not graph.edges:
        if len(graph.nodes) > 1:
            raise ValueError("edgeless multi-node graph is not a chain")
        return tuple(graph.nodes)
    succ = {}
    seen_targets = set()
    for u, v in graph.edges:
        if u in succ:
            raise ValueError(f"node {u!r} has two outgoing edges; not a chain")
        if v in seen_targets:
            raise ValueError(f"node {v!r} has two incoming edges; not a chain")
        succ[u] = v
        seen_targets.add(v)
    starts = [u for u in graph.nodes if u not in seen_targets and u in succ]
    if len(starts) != 1:
        raise ValueError("graph is not a single chain")
    walk = [starts[0]]
    while walk[-1] in succ:
        nxt = succ[walk[-1]]
        if nxt in walk:
            raise ValueError("graph contains a cycle; not a chain")
        walk.append(nxt)
    if len(walk) != len(graph.nodes):
        raise ValueError("chain does not cover every node")
    return tuple(walk)


def classify(graph):
    """Classify a graph event: 'edgeless', 'chain', 'cyclic' or 'dag'."""
    if not graph.edges:
        return "edgeless"
    if _find_cycle(graph.nodes, graph.edges) is not None:
        return "cyclic"
    try:
        to_perm(graph)
    except ValueError:
        return "dag"
    return "chain"


def has_cycle(graph):
    return _find_cycle(graph.nodes, graph.edges) is not None


def _find_cycle(nodes, edges):
    """Return one directed cycle as a node list, or None.

    Deterministic: nodes that cannot lie on a cycle are trimmed, then the
    residue is walked from its smallest label along smallest successors
    until a node repeats.
    """
    succ = {u: set() for u in nodes}
    pred = {u: set() for u in nodes}
    for u, v in edges:
        succ[u].add(v)
        pred[v].add(u)
    remaining = set(nodes)
    changed = True
    while changed:
        changed = False
        for u in list(remaining):
            if not (succ[u] & remaining) or not (pred[u] & remaining):
                remaining.discard(u)
                changed = True
    if not remaining:
        return None
    cur = min(remaining)
    seen = {}
    path = []
    while cur not in seen:
        seen[cur] = len(path)
        path.append(cur)
        cur = min(succ[cur] & remaining)
    return path[seen[cur]:]


def _longest_path_from(start, succ, allowed_edges):
    """Length (edge count) of the longest simple path from start that only
    uses edges in ``allowed_edges``.  Exhaustive; graphs here are tiny."""
    best = 0

    def walk(u, visited, depth):
        nonlocal best
        if depth > best:
            best = depth
        for v in succ.get(u, ()):
            if (u, v) in allowed_edges and v not in visited:
                visited.add(v)
                walk(v, visited, depth + 1)
                visited.discard(v)

    walk(start, {start}, 0)
    return best


def remove_cycles(graph):
    """Break every directed cycle, preserving as much chain length as possible.

    Each round finds one cycle deterministically and deletes the cycle edge
    leaving the node with the longest escape path (the longest simple path
    avoiding the cycle's own edges); ties go to the smallest source label,
    then the smallest target label.  Callers are expected to have removed
    bidirectional edge pairs already (a two-node cycle is still broken
    deterministically, just without a meaningful escape score).
    """
    edges = set(graph.edges)
    while True:
        cycle = _find_cycle(graph.nodes, edges)
        if cycle is None:
            break
        cycle_edges = list(zip(cycle, cycle[1:] + cycle[:1]))
        escape = edges - set(cycle_edges)
        succ = {}
        for u, v in escape:
            succ.setdefault(u, []).append(v)
        succ = {u: tuple(sorted(vs)) for u, vs in succ.items()}
        best = None
        best_key = None
        for u, v in cycle_edges:
            score = _longest_path_from(u, succ, escape)
            key = (-score, u, v)
            if best_key is None or key < best_key:
                best_key = key
                best = (u, v)
        edges.remove(best)
    return GraphEvent(graph.nodes, edges)


def _topological_order(graph):
    """Kahn's algorithm with sorted tie-breaks; raises on cycles."""
    indeg = graph.in_degrees()
    succ = graph.successors()
    ready = sorted(u for u, d in indeg.items() if d == 0)
    order = []
    while ready:
        u = ready.pop(0)
        order.append(u)
        inserted = False
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                ready.append(v)
                inserted = True
        if inserted:
            ready.sort()
    if len(order) != len(graph.nodes):
        raise ValueError("graph contains a cycle")
    return order


def _descendants(graph):
    """Strict descendant sets per node, via reverse topological sweep."""
    succ = graph.successors()
    reach = {u: set() for u in graph.nodes}
    for u in reversed(_topological_order(graph)):
        for v in succ[u]:
            reach[u].add(v)
            reach[u] |= reach[v]
    return reach


def longest_path_reduce(graph):
    """Drop every edge that has an alternative path of two or more edges.

    On a DAG this keeps exactly the longest route between any two nodes
    (the transitive reduction), preserves reachability, and is idempotent.
    """
    reach = _descendants(graph)
    succ = graph.successors()
    kept = []
    for u, v in graph.edges:
        shortcut = any(w != v and v in reach[w] for w in succ[u])
        if not shortcut:
            kept.append((u, v))
    return GraphEvent(graph.nodes, kept)


def merge_overlay(graphs):
    """Plain node and edge union, before any conflict handling."""
    nodes = set()
    edges = set()
    for g in graphs:
        nodes |= g.nodes
        edges |= g.edges
    return GraphEvent(nodes, edges)


def enumerate_paths(graph, start, end):
    """All simple directed paths from start to end, as node tuples.

    Deterministic (successors visited in ascending label order); returns
    ``[(start,)]`` when start == end, and an empty list when unreachable.
    """
    if start not in graph.nodes or end not in graph.nodes:
        return []
    if start == end:
        return [(start,)]
    succ = graph.successors()
    paths = []

    def walk(u, trail):
        for v in succ[u]:
            if v == end:
                paths.append(trail + (v,))
            elif v not in trail:
                walk(v, trail + (v,))

    walk(start, (start,))
    return paths


def graph_to_json(graph):
    """Canonical JSON form: sorted node list, sorted ``[u, v]`` edge pairs."""
    return {
        "nodes": sorted(graph.nodes),
        "edges": [list(e) for e in sorted(graph.edges)],
    }


def graph_from_json(obj):
    return GraphEvent(obj["nodes"], obj["edges"])

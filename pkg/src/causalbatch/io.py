"""Edge-list and batch serialization.

The edge-list format follows the DREAM gold-standard convention:
`SRC<sep>DST<sep>WEIGHT` per line, tab- or space-separated, weight
optional (0 means "no edge" and is skipped).  Node labels may be
arbitrary strings; purely numeric labels are used as node ids directly,
anything else is assigned dense ids in first-appearance order.  An
optional `# nodes N` header pins the node count (preserves isolated
nodes on round trips).
"""

from __future__ import annotations

from .graphs import Dag, GraphError, is_acyclic


class EdgeListParseError(ValueError):
    def __init__(self, path, lineno, message):
        super().__init__(f"{path}:{lineno}: {message}")
        self.lineno = lineno


class CyclicInputError(ValueError):
    pass


def load_edge_list(path) -> Dag:
    raw = []
    declared_p = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            if text.startswith("#"):
                parts = text[1:].split()
                if len(parts) == 2 and parts[0] == "nodes":
                    declared_p = int(parts[1])
                continue
            fields = text.split()
            if len(fields) not in (2, 3):
                raise EdgeListParseError(
                    path, lineno, f"expected 'SRC DST [WEIGHT]', got {text!r}")
            src, dst = fields[0], fields[1]
            if len(fields) == 3:
                try:
                    weight = float(fields[2])
                except ValueError:
                    raise EdgeListParseError(
                        path, lineno, f"bad weight {fields[2]!r}") from None
                if weight == 0:
                    continue
            if src == dst:
                raise EdgeListParseError(path, lineno,
                                         f"self-loop on {src!r}")
            raw.append((src, dst))

    if all(s.isdigit() and d.isdigit() for s, d in raw):
        edges = [(int(s), int(d)) for s, d in raw]
        p = max((max(i, j) for i, j in edges), default=-1) + 1
    else:
        ids = {}
        for s, d in raw:
            for name in (s, d):
                if name not in ids:
                    ids[name] = len(ids)
        edges = [(ids[s], ids[d]) for s, d in raw]
        p = len(ids)
    if declared_p is not None:
        p = max(p, declared_p)
    if not is_acyclic(edges, p):
        raise CyclicInputError(f"{path}: edge list contains a cycle")
    try:
        return Dag(p, edges)
    except GraphError as exc:
        raise EdgeListParseError(path, 0, str(exc)) from exc


def save_edge_list(dag: Dag, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# nodes {dag.p}\n")
        for i, j in sorted(dag.edges):
            fh.write(f"{i}\t{j}\t1\n")


def save_batch(b, path):
    """One intervention per line, node ids sorted, lines sorted."""
    lines = sorted(" ".join(str(v) for v in sorted(i)) for i in b)
    with open(path, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line + "\n")


def load_batch(path):
    out = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                out.add(frozenset(int(tok) for tok in text.split()))
            except ValueError:
                raise EdgeListParseError(
                    path, lineno, f"bad intervention line {text!r}") from None
    return frozenset(out)

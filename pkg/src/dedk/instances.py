"""Plain-text instance format and seeded instance generators.

Format (ASCII, ``\\n`` line endings, whitespace separated)::

    # comments and blank lines are ignored
    n m k
    u v c      (m lines, 0-based endpoints, decimal cost)
"""

import numpy as np

from .errors import BadParams, ParseError
from .graph import build_instance


def parse_instance_text(text):
    header = None
    edges = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if header is None:
            if len(fields) != 3:
                raise ParseError(f"header needs 'n m k', got {line!r}", lineno)
            try:
                header = tuple(int(f) for f in fields)
            except ValueError:
                raise ParseError(f"header fields must be integers: {line!r}", lineno) from None
            continue
        if len(fields) != 3:
            raise ParseError(f"edge line needs 'u v c', got {line!r}", lineno)
        try:
            u, v, c = int(fields[0]), int(fields[1]), float(fields[2])
        except ValueError:
            raise ParseError(f"cannot read edge {line!r}", lineno) from None
        if len(edges) == header[1]:
            raise ParseError(f"more than the declared {header[1]} edges", lineno)
        edges.append((u, v, c))
    if header is None:
        raise ParseError("empty instance file", 1)
    n, m, k = header
    if len(edges) != m:
        raise ParseError(f"header declares {m} edges, found {len(edges)}")
    return build_instance(n, edges, k)


def parse_instance(path):
    with open(path, encoding="ascii") as fh:
        return parse_instance_text(fh.read())


def format_instance(inst):
    lines = [f"{inst.n} {inst.m} {inst.k}"]
    lines += [f"{u} {v} {c!r}" for u, v, c in inst.edges]
    return "\n".join(lines) + "\n"


def write_instance(inst, path):
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_instance(inst))


def _cost(rng):
    return round(float(rng.uniform(1.0, 10.0)), 3)


def layered(L, width, density=1.0, seed=0, k=None):
    """L layers of ``width`` vertices; edges only between consecutive layers."""
    _check(L >= 2 and width >= 1 and 0 < density <= 1, f"bad layered params L={L} width={width} density={density}")
    rng = np.random.default_rng(seed)
    edges = []
    for layer in range(L - 1):
        for i in range(width):
            for j in range(width):
                if rng.random() < density:
                    edges.append((layer * width + i, (layer + 1) * width + j, _cost(rng)))
    n = L * width
    k = L - 1 if k is None else k
    even = tuple(v for v in range(n) if (v // width) % 2 == 0)
    odd = tuple(v for v in range(n) if (v // width) % 2 == 1)
    return build_instance(n, edges, k, bipartite_parts=(even, odd))


def bipartite(a, b, density=1.0, seed=0, k=1, orient="forward"):
    """Two parts A' = 0..a-1 and B' = a..a+b-1.

    ``orient="forward"`` sends every edge A' -> B'.  ``orient="mixed"`` directs
    each edge along a random vertex ranking instead, which still gives a
    bipartite DAG but one with long alternating paths.
    """
    _check(a >= 1 and b >= 1 and 0 < density <= 1, f"bad bipartite params a={a} b={b} density={density}")
    _check(orient in ("forward", "mixed"), f"orient must be forward or mixed, got {orient!r}")
    rng = np.random.default_rng(seed)
    rank = rng.permutation(a + b) if orient == "mixed" else np.arange(a + b)
    edges = []
    for u in range(a):
        for j in range(b):
            v = a + j
            if rng.random() < density:
                c = _cost(rng)
                edges.append((u, v, c) if rank[u] < rank[v] else (v, u, c))
    return build_instance(a + b, edges, k, bipartite_parts=(tuple(range(a)), tuple(range(a, a + b))))


def path(k):
    _check(k >= 1, f"path needs k >= 1, got {k}")
    return build_instance(k + 1, [(i, i + 1, 1.0) for i in range(k)], k)


def random_dag(n, density=0.3, seed=0, k=2):
    """Edges i -> j (i < j) of a random vertex ranking, each with the given probability."""
    _check(n >= 2 and 0 < density <= 1, f"bad dag params n={n} density={density}")
    rng = np.random.default_rng(seed)
    rank = rng.permutation(n)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                edges.append((int(rank[i]), int(rank[j]), _cost(rng)))
    return build_instance(n, edges, k)


GENERATORS = {"layered": layered, "bipartite": bipartite, "path": path, "dag": random_dag}
_PARAM_TYPES = {"L": int, "width": int, "a": int, "b": int, "k": int, "n": int, "seed": int, "density": float, "orient": str}


def generate(recipe):
    """Build an instance from ``"kind:key=value,..."``, e.g. ``"path:k=3"``."""
    kind, _, rest = recipe.partition(":")
    if kind not in GENERATORS:
        raise BadParams(f"unknown generator {kind!r}; choose from {sorted(GENERATORS)}")
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, value = item.partition("=")
        if not eq or key not in _PARAM_TYPES:
            raise BadParams(f"bad generator parameter {item!r}")
        try:
            params[key] = _PARAM_TYPES[key](value)
        except ValueError:
            raise BadParams(f"bad value for {key}: {value!r}") from None
    try:
        return GENERATORS[kind](**params)
    except TypeError as exc:
        raise BadParams(f"{kind}: {exc}") from None


def _check(ok, message):
    if not ok:
        raise BadParams(message)

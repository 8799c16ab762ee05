"""Graphs, vertex sets, G(n,p) sampling, edge deletion and domination checks.

A :class:`Graph` stores its edges once, as a canonical (lexicographically
sorted, ``u < v``) pair of index arrays. Bit-packed adjacency rows (Python
ints, bit ``v`` of row ``u`` set iff ``uv`` is an edge) are materialised on
first use; the exact solver works on those, while the vectorised operations
here work on the edge arrays so that sparse graphs with tens of thousands of
vertices stay cheap.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainError,
    DuplicateEdgeError,
    EdgeCountError,
    MalformedEdgeError,
    MalformedHeaderError,
    SelfLoopError,
    VertexRangeError,
)
from .rng import generator

# below this edge probability sample_gnp jumps between edges geometrically
SPARSE_THRESHOLD = 0.1
# dense-matrix route for building bit rows is used up to this many vertices
_MATRIX_ROWS_LIMIT = 4096


@dataclass(frozen=True)
class VertexSet:
    """A subset of ``{0, ..., n-1}`` held as an integer bitmask."""

    n: int
    bits: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise DomainError(f"universe size must be non-negative, got {self.n}")
        if self.bits < 0 or self.bits >> self.n:
            raise DomainError(f"members outside universe of size {self.n}")

    @classmethod
    def from_indices(cls, n, indices):
        bits = 0
        for i in indices:
            i = int(i)
            if not 0 <= i < n:
                raise DomainError(f"vertex {i} outside universe of size {n}")
            bits |= 1 << i
        return cls(n, bits)

    @classmethod
    def from_mask(cls, mask):
        mask = np.asarray(mask, dtype=bool)
        packed = np.packbits(mask, bitorder="little").tobytes()
        return cls(len(mask), int.from_bytes(packed, "little"))

    @classmethod
    def full(cls, n):
        return cls(n, (1 << n) - 1)

    def mask(self):
        raw = np.frombuffer(self.bits.to_bytes((self.n + 7) // 8, "little"), dtype=np.uint8)
        return np.unpackbits(raw, count=self.n, bitorder="little").astype(bool)

    def indices(self):
        return np.flatnonzero(self.mask()).tolist()

    def __len__(self):
        return self.bits.bit_count()

    def __iter__(self):
        return iter(self.indices())

    def __contains__(self, v):
        return 0 <= v < self.n and (self.bits >> v) & 1 == 1

    def _check(self, other):
        if not isinstance(other, VertexSet) or other.n != self.n:
            raise DomainError("vertex sets over different universes")

    def __or__(self, other):
        self._check(other)
        return VertexSet(self.n, self.bits | other.bits)

    def __and__(self, other):
        self._check(other)
        return VertexSet(self.n, self.bits & other.bits)

    def __sub__(self, other):
        self._check(other)
        return VertexSet(self.n, self.bits & ~other.bits)

    def isdisjoint(self, other):
        self._check(other)
        return self.bits & other.bits == 0

    def __repr__(self):
        shown = self.indices()
        if len(shown) > 12:
            shown = shown[:12] + ["..."]
        return f"VertexSet(n={self.n}, {{{', '.join(map(str, shown))}}})"


@dataclass(frozen=True)
class GnpParams:
    n: int
    p: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n}")
        if not 0.0 <= self.p <= 1.0 or math.isnan(self.p):
            raise DomainError(f"p must lie in [0, 1], got {self.p}")

    @property
    def q_defined(self):
        return self.p < 1.0

    @property
    def q(self):
        """1/(1-p); ``None`` at p = 1 where it is undefined."""
        if not self.q_defined:
            return None
        return 1.0 / (1.0 - self.p)

    @property
    def d(self):
        return self.n * self.p

    @property
    def sampling_path(self):
        return "geometric" if 0.0 < self.p < SPARSE_THRESHOLD else "bernoulli"


def _pair_offsets(n):
    u = np.arange(n, dtype=np.int64)
    return u * (2 * n - u - 1) // 2


def _pairs_from_index(n, k):
    """Map lexicographic pair indices over ``u < v`` to endpoint arrays."""
    offsets = _pair_offsets(n)
    u = np.searchsorted(offsets, k, side="right") - 1
    v = k - offsets[u] + u + 1
    return u.astype(np.int64), v.astype(np.int64)


class Graph:
    """Simple undirected graph on vertices ``0..n-1``; immutable."""

    __slots__ = ("n", "_u", "_v", "_rows", "_csr")

    def __init__(self, n, edges=()):
        if int(n) != n or n < 0:
            raise DomainError(f"vertex count must be a non-negative integer, got {n}")
        n = int(n)
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(0, 2)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise DomainError("edges must be a sequence of vertex pairs")
        if (arr < 0).any() or (arr >= n).any():
            raise DomainError(f"edge endpoint outside 0..{n - 1}")
        if (arr[:, 0] == arr[:, 1]).any():
            raise DomainError("self-loops are not allowed")
        lo = np.minimum(arr[:, 0], arr[:, 1])
        hi = np.maximum(arr[:, 0], arr[:, 1])
        order = np.lexsort((hi, lo))
        lo, hi = lo[order], hi[order]
        if len(lo) > 1 and ((lo[1:] == lo[:-1]) & (hi[1:] == hi[:-1])).any():
            raise DomainError("duplicate edge")
        self._init(n, lo, hi)

    def _init(self, n, u, v):
        self.n = n
        u = np.ascontiguousarray(u, dtype=np.int64)
        v = np.ascontiguousarray(v, dtype=np.int64)
        u.flags.writeable = False
        v.flags.writeable = False
        self._u, self._v = u, v
        self._rows = None
        self._csr = None

    @classmethod
    def _canonical(cls, n, u, v):
        # trusted path: u < v, sorted, unique
        g = cls.__new__(cls)
        g._init(n, u, v)
        return g

    @classmethod
    def empty(cls, n):
        return cls._canonical(n, np.empty(0, np.int64), np.empty(0, np.int64))

    @classmethod
    def complete(cls, n):
        total = n * (n - 1) // 2
        u, v = _pairs_from_index(n, np.arange(total, dtype=np.int64))
        return cls._canonical(n, u, v)

    @classmethod
    def from_adjacency(cls, matrix):
        a = np.asarray(matrix, dtype=bool)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DomainError("adjacency matrix must be square")
        if (a != a.T).any():
            raise DomainError("adjacency matrix must be symmetric")
        if a.diagonal().any():
            raise DomainError("self-loops are not allowed")
        u, v = np.nonzero(np.triu(a, 1))
        return cls._canonical(a.shape[0], u, v)

    @property
    def edge_count(self):
        return len(self._u)

    @property
    def edges(self):
        """Edges as an ``(m, 2)`` array, rows ``(u, v)`` with ``u < v``, sorted."""
        return np.column_stack((self._u, self._v))

    def edge_list(self):
        return list(zip(self._u.tolist(), self._v.tolist()))

    @property
    def endpoints(self):
        return self._u, self._v

    def has_edge(self, a, b):
        if a == b:
            return False
        if a > b:
            a, b = b, a
        return bool((self.rows[a] >> b) & 1)

    def degrees(self):
        return np.bincount(self._u, minlength=self.n) + np.bincount(self._v, minlength=self.n)

    def adjacency_matrix(self):
        a = np.zeros((self.n, self.n), dtype=bool)
        a[self._u, self._v] = True
        a[self._v, self._u] = True
        return a

    @property
    def rows(self):
        """Open-neighbourhood bitmasks, one Python int per vertex."""
        if self._rows is None:
            if self.n <= _MATRIX_ROWS_LIMIT:
                packed = np.packbits(self.adjacency_matrix(), axis=1, bitorder="little")
                rows = tuple(int.from_bytes(r.tobytes(), "little") for r in packed)
            else:
                acc = [0] * self.n
                for a, b in zip(self._u.tolist(), self._v.tolist()):
                    acc[a] |= 1 << b
                    acc[b] |= 1 << a
                rows = tuple(acc)
            self._rows = rows
        return self._rows

    def closed_rows(self):
        return [r | (1 << i) for i, r in enumerate(self.rows)]

    def csr(self):
        """(indptr, indices) of the symmetric adjacency, neighbours sorted."""
        if self._csr is None:
            src = np.concatenate((self._u, self._v))
            dst = np.concatenate((self._v, self._u))
            order = np.lexsort((dst, src))
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            np.cumsum(np.bincount(src, minlength=self.n), out=indptr[1:])
            self._csr = (indptr, dst[order])
        return self._csr

    def neighbors(self, v):
        indptr, indices = self.csr()
        return indices[indptr[v]:indptr[v + 1]]

    def add_edge(self, a, b):
        """Return a new graph with edge ``ab`` added (no-op if present)."""
        if self.has_edge(a, b):
            return self
        return Graph(self.n, self.edge_list() + [(a, b)])

    def remove_edge(self, a, b):
        a, b = min(a, b), max(a, b)
        keep = ~((self._u == a) & (self._v == b))
        return Graph._canonical(self.n, self._u[keep], self._v[keep])

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self._u, other._u)
            and np.array_equal(self._v, other._v)
        )

    def __hash__(self):
        return hash((self.n, self._u.tobytes(), self._v.tobytes()))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.edge_count})"


def sample_gnp(params, seed):
    """Draw G(n, p) deterministically from ``seed``.

    For ``0 < p < 0.1`` the pair indices of the C(n,2) slots are visited by
    geometric jumps of length ``floor(ln U / ln(1-p))``; otherwise every pair
    gets its own uniform draw. The two routes consume the stream differently,
    so the same seed gives different (equally distributed) graphs on either
    side of the threshold; ``params.sampling_path`` names the route.
    """
    if not isinstance(params, GnpParams):
        raise DomainError("sample_gnp expects GnpParams")
    n, p = int(params.n), float(params.p)
    total = n * (n - 1) // 2
    if p == 0.0 or total == 0:
        return Graph.empty(n)
    rng = generator(seed)
    if params.sampling_path == "bernoulli":
        k = np.flatnonzero(rng.random(total) < p)
    else:
        log_keep = math.log1p(-p)
        batch = max(256, int(total * p * 1.1) + 64)
        chunks = []
        pos = -1
        while True:
            # tiny p overflows to inf; the clamp below makes that "past the end"
            with np.errstate(over="ignore", divide="ignore"):
                jumps = np.floor(np.log1p(-rng.random(batch)) / log_keep)
            jumps = np.minimum(jumps, total).astype(np.int64)
            positions = pos + np.cumsum(jumps + 1)
            inside = positions[positions < total]
            chunks.append(inside)
            if len(inside) < batch:
                break
            pos = int(positions[-1])
        k = np.concatenate(chunks)
    u, v = _pairs_from_index(n, k)
    return Graph._canonical(n, u, v)


def delete_edges(g, p_del, seed):
    """Keep each edge of ``g`` independently with probability ``1 - p_del``."""
    if not 0.0 <= p_del <= 1.0:
        raise DomainError(f"deletion probability must lie in [0, 1], got {p_del}")
    u, v = g.endpoints
    keep = generator(seed).random(len(u)) >= p_del
    return Graph._canonical(g.n, u[keep], v[keep])


def _member_mask(g, s):
    if not isinstance(s, VertexSet) or s.n != g.n:
        raise DomainError(f"vertex set universe does not match graph on {g.n} vertices")
    return s.mask()


def _neighbours_in(g, inside):
    """Per-vertex count of neighbours inside the boolean mask ``inside``."""
    u, v = g.endpoints
    return np.bincount(u[inside[v]], minlength=g.n) + np.bincount(v[inside[u]], minlength=g.n)


def is_dominating(g, s):
    inside = _member_mask(g, s)
    if g.n == 0:
        return True
    return bool(np.all(inside | (_neighbours_in(g, inside) > 0)))


def crucial_set(g, s):
    """Vertices outside ``s`` with exactly one neighbour in ``s``.

    Each such vertex owns exactly one crucial edge, so the size of the result
    is the number of crucial edges of ``s``.
    """
    inside = _member_mask(g, s)
    return VertexSet.from_mask(~inside & (_neighbours_in(g, inside) == 1))


def read_edge_list(stream):
    """Parse ``"n m"`` followed by ``m`` lines ``"u v"`` (0-based)."""
    if isinstance(stream, str):
        raise TypeError("read_edge_list expects a text stream; wrap strings in io.StringIO")
    lines = [(i, ln.strip()) for i, ln in enumerate(stream, start=1)]
    lines = [(i, ln) for i, ln in lines if ln]
    if not lines:
        raise MalformedHeaderError("missing header line 'n m'")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or not all(_is_int(t) for t in parts):
        raise MalformedHeaderError(f"header must be two integers 'n m', got {header!r}", lineno)
    n, m = int(parts[0]), int(parts[1])
    if n < 0 or m < 0:
        raise MalformedHeaderError("header values must be non-negative", lineno)
    body = lines[1:]
    if len(body) != m:
        raise EdgeCountError(f"header announces {m} edges, found {len(body)}")
    seen = set()
    pairs = []
    for lineno, text in body:
        parts = text.split()
        if len(parts) != 2 or not all(_is_int(t) for t in parts):
            raise MalformedEdgeError(f"expected 'u v', got {text!r}", lineno)
        a, b = int(parts[0]), int(parts[1])
        for w in (a, b):
            if not 0 <= w < n:
                raise VertexRangeError(f"vertex {w} out of range 0..{n - 1}", lineno)
        if a == b:
            raise SelfLoopError(f"self-loop at vertex {a}", lineno)
        key = (min(a, b), max(a, b))
        if key in seen:
            raise DuplicateEdgeError(f"duplicate edge {key[0]} {key[1]}", lineno)
        seen.add(key)
        pairs.append(key)
    return Graph(n, pairs)


def write_edge_list(g, stream=None):
    """Canonical serialisation: header then edges sorted lexicographically."""
    out = io.StringIO()
    out.write(f"{g.n} {g.edge_count}\n")
    for a, b in g.edge_list():
        out.write(f"{a} {b}\n")
    text = out.getvalue()
    if stream is not None:
        stream.write(text)
    return text


def _is_int(token):
    try:
        int(token)
    except ValueError:
        return False
    return True

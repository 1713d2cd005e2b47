"""Declared splits of a fusion frame into a Riesz part plus excess vectors.

Two placements of an excess vector ``x`` are supported:

hosted
    ``x`` sits inside a Riesz item: ``V_l = W_l (+) span{hosted vectors}``.
    Unless an explicit basis for ``W_l`` is declared, ``W_l`` is taken as the
    orthogonal complement of the hosted vectors inside ``V_l``.
standalone
    ``x`` belongs to a non-Riesz item, and that item is exactly the span of
    the excess vectors assigned to it (``span{x}`` for a single vector).

Every declared vector is rescaled to unit norm. Its components ``x_i in W_i``
come from the Riesz decomposition and, when declared, must agree with it.
"""

from dataclasses import dataclass

import numpy as np

from .errors import MalformedDecomposition, OverlappingSubspaces, ZeroSubspace
from .fusion import FusionFrame, classify, excess, riesz_decompose
from .numerics import DEFAULT_RANK_TOL, as_vector, numerical_rank
from .subspace import Subspace, containment_gap

COMPONENT_TOL = 1e-8
CONTAINMENT_TOL = 1e-8


@dataclass(frozen=True)
class ExcessSpec:
    """User-facing declaration of one excess vector.

    ``host`` and ``item`` are frame item indices; at most one may be given.
    With neither, the vector is standalone and is assigned to the first
    non-Riesz item that contains it. ``components`` maps Riesz item indices to
    declared ``x_i`` (omitted indices mean zero).
    """

    vector: tuple
    host: int = None
    item: int = None
    components: dict = None


@dataclass(frozen=True)
class ExcessElement:
    vector: np.ndarray
    host: int
    item: int
    components: np.ndarray  # (len(riesz_indices), n), aligned with riesz_indices
    declared_norm: float

    @property
    def hosted(self):
        return self.host is not None

    def support(self, tol=COMPONENT_TOL):
        """Riesz positions ``i`` with ``x_i != 0``."""
        return [p for p, v in enumerate(self.components) if np.linalg.norm(v) > tol]


@dataclass(frozen=True)
class ExcessDecomposition:
    frame: FusionFrame
    riesz_indices: tuple
    riesz_subspaces: tuple
    elements: tuple

    @classmethod
    def declare(cls, F, riesz, excess_specs, riesz_bases=None, rank_tol=DEFAULT_RANK_TOL):
        """Validate a declaration and build the decomposition.

        Parameters
        ----------
        F : FusionFrame
        riesz : sequence of int
            Item indices forming the Riesz part.
        excess_specs : sequence of ExcessSpec
        riesz_bases : dict, optional
            ``{item index: spanning vectors}`` overriding the default ``W_l``
            of a hosting item.

        Raises
        ------
        MalformedDecomposition
        """
        return _build(F, riesz, list(excess_specs), dict(riesz_bases or {}), rank_tol)

    def position(self, item):
        """Position of a Riesz item inside ``riesz_indices``."""
        return self.riesz_indices.index(item)

    def riesz_frame(self):
        w = self.frame.weights
        return FusionFrame(self.riesz_subspaces, [w[i] for i in self.riesz_indices])

    def hosted_by(self, item):
        return [e for e in self.elements if e.host == item]

    def hosts(self):
        return sorted({e.host for e in self.elements if e.hosted})

    def standalone_items(self):
        return sorted({e.item for e in self.elements if not e.hosted})

    def transformed(self, frame, U):
        """The same declaration carried over to ``frame``, the image of this frame under ``U``."""
        U = np.asarray(U, dtype=float)
        specs = [ExcessSpec(U @ e.vector, host=e.host, item=e.item) for e in self.elements]
        bases = {
            i: list((U @ W.basis).T)
            for i, W in zip(self.riesz_indices, self.riesz_subspaces)
            if self.hosted_by(i)
        }
        return ExcessDecomposition.declare(frame, self.riesz_indices, specs, bases)

    @property
    def normalized(self):
        """Whether any declared vector had to be rescaled to unit norm."""
        return any(abs(e.declared_norm - 1.0) > 1e-12 for e in self.elements)


def _fail(msg):
    raise MalformedDecomposition(msg)


def _hosted_complement(V, X, rank_tol):
    # W = {v in V : v orthogonal to every hosted vector}
    C = V.basis.T @ X.T  # d x h coordinates of the hosted vectors
    _, s, Vt = np.linalg.svd(C.T, full_matrices=True)
    r = int(np.sum(s > rank_tol * s[0])) if s.size else 0
    coords = Vt[r:].T
    if coords.shape[1] == 0:
        _fail("hosted vectors fill the whole item; its Riesz subspace would be zero")
    return Subspace.span(list((V.basis @ coords).T), rank_tol)


def _build(F, riesz, specs, riesz_bases, rank_tol):
    n = F.ambient_dim
    k = len(F)
    riesz = tuple(int(i) for i in riesz)
    if not riesz:
        _fail("the Riesz part is empty")
    if len(set(riesz)) != len(riesz) or any(not 0 <= i < k for i in riesz):
        _fail("Riesz indices must be distinct item indices")
    rset = set(riesz)

    vectors = []
    for s in specs:
        try:
            x = as_vector(s.vector, "excess vector")
        except ValueError as exc:
            _fail(str(exc))
        if x.shape[0] != n:
            _fail(f"excess vector has length {x.shape[0]}, expected {n}")
        nrm = float(np.linalg.norm(x))
        if nrm == 0.0:
            _fail("excess vector is zero")
        if s.host is not None and s.item is not None:
            _fail("an excess vector is either hosted or standalone, not both")
        if s.host is not None and s.host not in rset:
            _fail(f"host {s.host} is not part of the Riesz part")
        if s.item is not None and (s.item in rset or not 0 <= s.item < k):
            _fail(f"standalone item {s.item} must be a non-Riesz item")
        vectors.append((x / nrm, nrm))

    for i in riesz_bases:
        if i not in rset:
            _fail(f"explicit basis given for item {i}, which is not in the Riesz part")

    # Riesz subspaces
    W = {}
    for i in riesz:
        V = F.subspaces[i]
        X = np.array([v for (v, _), s in zip(vectors, specs) if s.host == i]).reshape(-1, n)
        for x in X:
            if containment_gap(V, x) > CONTAINMENT_TOL:
                _fail(f"hosted excess vector does not lie in item {i}")
        if i in riesz_bases:
            try:
                Wi = Subspace.span(riesz_bases[i], rank_tol)
            except (ValueError, ZeroSubspace) as exc:
                _fail(f"explicit basis of item {i}: {exc}")
            if any(containment_gap(V, q) > CONTAINMENT_TOL for q in Wi.basis.T):
                _fail(f"explicit Riesz subspace of item {i} is not inside the item")
        elif len(X):
            Wi = _hosted_complement(V, X, rank_tol)
        else:
            Wi = V
        if len(X):
            if numerical_rank(X, rank_tol) < len(X):
                _fail(f"hosted vectors of item {i} are linearly dependent")
            if Wi.dim + len(X) != V.dim:
                _fail(f"item {i} is not W (+) span(hosted): dimensions {Wi.dim} + {len(X)} != {V.dim}")
            try:
                _direct(Wi, X, rank_tol)
            except OverlappingSubspaces:
                _fail(f"hosted vectors of item {i} intersect its Riesz subspace")
        elif Wi.dim != V.dim:
            _fail(f"explicit Riesz subspace of item {i} is smaller than the item but hosts nothing")
        W[i] = Wi

    # standalone assignment
    # explicit items first, then each remaining vector goes to the lowest-index
    # non-Riesz item that contains it and still has room
    items = [s.item for s in specs]
    load = {j: 0 for j in range(k) if j not in rset}
    for (x, _), s in zip(vectors, specs):
        if s.item is not None:
            if containment_gap(F.subspaces[s.item], x) > CONTAINMENT_TOL:
                _fail(f"excess vector does not lie in its declared item {s.item}")
            load[s.item] += 1
    for t, ((x, _), s) in enumerate(zip(vectors, specs)):
        if s.host is not None or s.item is not None:
            continue
        cand = [
            j for j in load
            if load[j] < F.subspaces[j].dim and containment_gap(F.subspaces[j], x) <= CONTAINMENT_TOL
        ]
        if not cand:
            _fail("standalone excess vector lies in no non-Riesz item with room left")
        items[t] = cand[0]
        load[cand[0]] += 1
    for j in range(k):
        if j in rset:
            continue
        X = np.array([x for (x, _), it in zip(vectors, items) if it == j]).reshape(-1, n)
        d = F.subspaces[j].dim
        if len(X) != d or numerical_rank(X, rank_tol) != d:
            _fail(f"non-Riesz item {j} (dim {d}) must be spanned by exactly {d} declared excess vectors, got {len(X)}")

    riesz_subspaces = tuple(W[i] for i in riesz)
    rframe = FusionFrame(riesz_subspaces, [F.weights[i] for i in riesz])
    if not classify(rframe).is_riesz_basis:
        _fail("the declared Riesz part is not a fusion Riesz basis of the ambient space")

    e, _ = excess(F, rank_tol)
    if e != len(specs):
        _fail(f"frame excess is {e} but {len(specs)} excess vectors were declared")

    elements = []
    pos = {i: p for p, i in enumerate(riesz)}
    for (x, nrm), s, it in zip(vectors, specs, items):
        comps = np.array(riesz_decompose(rframe, x))
        if s.components is not None:
            declared = np.zeros_like(comps)
            for i, v in s.components.items():
                if i not in pos:
                    _fail(f"component declared for item {i}, which is not in the Riesz part")
                v = np.asarray(v, dtype=float) / nrm
                if v.shape != (n,):
                    _fail("component vector has the wrong length")
                if containment_gap(W[i], v) > CONTAINMENT_TOL:
                    _fail(f"declared component for item {i} does not lie in its Riesz subspace")
                declared[pos[i]] = v
            if np.linalg.norm(declared.sum(axis=0) - x) > COMPONENT_TOL:
                _fail("declared components do not sum to the excess vector")
            if np.linalg.norm(declared - comps) > COMPONENT_TOL:
                _fail("declared components disagree with the Riesz decomposition")
        comps.setflags(write=False)
        x.setflags(write=False)
        elements.append(ExcessElement(vector=x, host=s.host, item=it, components=comps, declared_norm=nrm))

    return ExcessDecomposition(frame=F, riesz_indices=riesz, riesz_subspaces=riesz_subspaces, elements=tuple(elements))


def _direct(Wi, X, rank_tol):
    M = np.hstack([Wi.basis, X.T])
    s = np.linalg.svd(M, compute_uv=False)
    if s[-1] <= rank_tol * s[0]:
        raise OverlappingSubspaces("hosted vectors meet the Riesz subspace")

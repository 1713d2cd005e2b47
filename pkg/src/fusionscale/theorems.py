"""Checkers for the structural scalability results on decomposed fusion frames.

Every checker evaluates named conditions at an absolute tolerance of 1e-8 and
returns a :class:`TheoremReport`. Conditions carry a ``role``:

``necessary``
    Must hold whenever the frame is strictly scalable. Conditions that depend
    on the scaling coefficients are only evaluated when the solver found a
    strictly positive solution.
``equivalent``
    One of several statements claimed to be equivalent; they must agree.
``hypothesis``
    Decides whether a structural rule applies; drives the prediction.

A report's ``prediction`` is ``True`` (scalable), ``False`` (not scalable) or
``None`` (no rule decides). The verdict is consistent with the solver when a
definite prediction matches whether the solver returned ``StrictlyScalable``
and, in the strictly scalable case, every necessary condition holds. A frame
that is feasible only with some zero coefficient counts as not scalable.

Quantified statements "for all f" are checked on the standard basis, which
suffices by linearity. Coefficients are ``c_i = (w_i g_i)^2``; they do not
depend on the frame weights.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import MalformedDecomposition, NotRieszBasis, UnknownTheoremId, WrongAmbientDimension
from .fusion import FusionFrame, classify, frame_operator, max_orthogonality_gap
from .scaling import Status, solve_scaling, verify_scaling
from .subspace import Subspace, containment_gap, orthogonality_gap, subspace_sum

THEOREM_TOL = 1e-8


@dataclass(frozen=True)
class Condition:
    name: str
    holds: bool
    witness: float
    role: str = "necessary"

    def to_dict(self):
        return {"name": self.name, "holds": self.holds, "witness": self.witness, "role": self.role}


@dataclass(frozen=True)
class TheoremReport:
    theorem_id: str
    conditions: tuple
    prediction: object
    solver_status: Status
    verdict_consistent_with_solver: bool
    notes: tuple = field(default=())

    def failed(self, role=None):
        return [c for c in self.conditions if not c.holds and (role is None or c.role == role)]

    def condition(self, name):
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self):
        return {
            "theorem_id": self.theorem_id,
            "conditions": [c.to_dict() for c in self.conditions],
            "prediction": self.prediction,
            "solver_status": self.solver_status.value,
            "verdict_consistent_with_solver": self.verdict_consistent_with_solver,
            "notes": list(self.notes),
        }


class _Audit:
    def __init__(self, theorem_id, sol):
        self.theorem_id = theorem_id
        self.sol = sol
        self.conditions = []
        self.notes = []

    @property
    def strict(self):
        return self.sol.status is Status.STRICTLY_SCALABLE

    def zero(self, name, residual, role="necessary"):
        """Condition ``residual == 0`` (within tolerance)."""
        return self._add(name, residual <= THEOREM_TOL, residual, role)

    def nonzero(self, name, magnitude, role="necessary"):
        return self._add(name, magnitude > THEOREM_TOL, magnitude, role)

    def flag(self, name, holds, witness, role="necessary"):
        return self._add(name, holds, witness, role)

    def _add(self, name, holds, witness, role):
        self.conditions.append(Condition(name, bool(holds), float(witness), role))
        return bool(holds)

    def necessary_ok(self):
        return all(c.holds for c in self.conditions if c.role == "necessary")

    def report(self, prediction, agree=True):
        strict = self.strict
        ok = agree
        if prediction is False and strict:
            ok = False
        if prediction is True and not strict:
            ok = False
        if strict and not self.necessary_ok():
            ok = False
        return TheoremReport(
            theorem_id=self.theorem_id,
            conditions=tuple(self.conditions),
            prediction=prediction,
            solver_status=self.sol.status,
            verdict_consistent_with_solver=bool(ok),
            notes=tuple(self.notes),
        )


def _solution(F, sol):
    return solve_scaling(F) if sol is None else sol


def _check_frame(F, dec):
    if dec.frame is not F:
        same = len(dec.frame) == len(F) and all(
            a.same_as(b, 1e-12) for a, b in zip(dec.frame.subspaces, F.subspaces)
        )
        if not same:
            raise MalformedDecomposition("decomposition was declared for a different frame")


def _common_notes(audit, dec):
    if dec.normalized:
        audit.notes.append("declared excess vectors were rescaled to unit norm before checking")
    if audit.sol.selection == "max-min":
        audit.notes.append("scaling solution is not unique; the max-min point was used")


def identity_gap(dec, c):
    """Largest entry-wise violation of the Riesz-component identity.

    With ``E = sum_l c_l (P_{V_l} - P_{W_l})`` over Riesz items plus
    ``sum c_m P_{V_m}`` over the other items, the identity reads, for every
    Riesz position ``j`` and every ``f``::

        component_i(E P_{W_j} f) = (delta_ij - c_i P_{W_i}) P_{W_j} f.

    It holds exactly when ``sum_all c P = I``. The single-, two- and
    many-excess forms of this statement are special cases.
    """
    F = dec.frame
    n = F.ambient_dim
    c = np.asarray(c, dtype=float)
    riesz = dec.riesz_indices
    W = dict(zip(riesz, dec.riesz_subspaces))
    E = np.zeros((n, n))
    for idx, V in enumerate(F.subspaces):
        E += c[idx] * V.projector()
        if idx in W:
            E -= c[idx] * W[idx].projector()
    T = np.hstack([S.basis for S in dec.riesz_subspaces])
    Tinv = np.linalg.inv(T)
    P = [S.projector() for S in dec.riesz_subspaces]
    offsets = np.cumsum([0] + [S.dim for S in dec.riesz_subspaces])
    I = np.eye(n)
    gap = 0.0
    for j, Pj in enumerate(P):
        Z = Tinv @ (E @ Pj)
        for i, (S, Pi) in enumerate(zip(dec.riesz_subspaces, P)):
            comp = S.basis @ Z[offsets[i]:offsets[i + 1]]
            target = ((I if i == j else 0.0) - c[riesz[i]] * Pi) @ Pj
            gap = max(gap, float(np.abs(comp - target).max()))
    return gap


def _max_or_zero(values):
    return max(values, default=0.0)


def _cleanly_hosted(dec, el):
    """Hosted vector orthogonal to its host's Riesz subspace, with no component there."""
    p = dec.position(el.host)
    W = dec.riesz_subspaces[p]
    return (
        np.linalg.norm(W.basis.T @ el.vector) <= THEOREM_TOL
        and np.linalg.norm(el.components[p]) <= THEOREM_TOL
    )


# -- Riesz bases ---------------------------------------------------------------


def check_riesz_scalable(F, sol=None):
    """Scalable Riesz basis: inverse-weight scaling, operator identity and orthogonality agree.

    Raises
    ------
    NotRieszBasis
    """
    if not classify(F).is_riesz_basis:
        raise NotRieszBasis("check_riesz_scalable needs a fusion Riesz basis")
    sol = _solution(F, sol)
    audit = _Audit("riesz-scalable", sol)
    w = F.weights
    r_inv = verify_scaling(F, 1.0 / w)
    Sinv = np.linalg.inv(frame_operator(F))
    op = max(
        float(np.linalg.norm(Sinv @ W.projector() - W.projector() / (wi * wi))) for W, wi in F
    )
    orth = max_orthogonality_gap(F.subspaces)
    a = audit.zero("inverse weights give a Parseval frame", r_inv, "equivalent")
    b = audit.zero("inverse frame operator acts as w_i^-2 on each subspace", op, "equivalent")
    o = audit.zero("subspaces pairwise orthogonal", orth, "equivalent")
    return audit.report(prediction=o, agree=(a == b == o))


# -- one excess vector ---------------------------------------------------------------


def _single(dec):
    if len(dec.elements) != 1:
        raise MalformedDecomposition(f"expected one excess vector, got {len(dec.elements)}")
    return dec.elements[0]


def check_one_excess(F, dec, sol=None):
    """Necessary conditions for a single excess vector.

    A hosted excess vector (``V_l = W_l (+) span{x}`` with nonzero ``W_l``)
    rules out scalability. For ``V_0 = span{x}`` the support ``s`` of the
    components drives the conditions: off the support ``x`` and ``W_j`` are
    orthogonal to everything, on it ``W_j`` is a line not orthogonal to ``x``.
    With an orthogonal Riesz part, scalability holds exactly when ``V_0``
    coincides with one of the ``W_j``.
    """
    _check_frame(F, dec)
    el = _single(dec)
    sol = _solution(F, sol)
    audit = _Audit("one-excess", sol)
    _common_notes(audit, dec)

    if el.hosted:
        audit.flag("excess vector spans its own one-dimensional item", False, F.subspaces[el.host].dim)
        return audit.report(prediction=False)

    x = el.vector
    W = dec.riesz_subspaces
    P = [S.projector() for S in W]
    comps = el.components
    sig = el.support()
    r = len(W)
    label = [f"W[{i}]" for i in dec.riesz_indices]

    for j in range(r):
        if j in sig:
            audit.nonzero(f"x not orthogonal to {label[j]}", np.linalg.norm(P[j] @ x))
            audit.flag(f"{label[j]} is one-dimensional", W[j].dim == 1, W[j].dim - 1)
        else:
            audit.zero(f"x orthogonal to {label[j]}", np.linalg.norm(P[j] @ x))
            audit.zero(
                f"{label[j]} orthogonal to the other Riesz subspaces",
                _max_or_zero(orthogonality_gap(W[j], W[i]) for i in range(r) if i != j),
            )
    structural = audit.necessary_ok()

    prediction = None if structural else False
    if max_orthogonality_gap(W) <= THEOREM_TOL:
        V0 = F.subspaces[el.item]
        match = min(float(np.linalg.norm(V0.projector() - Pj)) for Pj in P)
        gen = audit.zero("Riesz part orthogonal and span{x} equals one of its subspaces", match, "hypothesis")
        prediction = gen

    if audit.strict:
        c = sol.coefficients
        c0 = c[el.item]
        cr = [c[i] for i in dec.riesz_indices]
        S_c = sum(ci * Pi for ci, Pi in zip(cr, P))
        audit.nonzero("c_0 < 1", 1.0 - c0)
        audit.zero("x is an eigenvector of sum c_i P_i with eigenvalue 1 - c_0", np.linalg.norm(S_c @ x - (1 - c0) * x))
        for j in range(r):
            if j in sig:
                xj = comps[j]
                audit.zero(f"<x_j, x> = (1 - c_j)/c_0 for {label[j]}", abs(xj @ x - (1 - cr[j]) / c0))
                audit.zero(
                    f"P_i x_j = (c_j - 1)/c_i x_i for {label[j]}",
                    _max_or_zero(
                        np.linalg.norm(P[i] @ xj - (cr[j] - 1) / cr[i] * comps[i]) for i in range(r) if i != j
                    ),
                )
                audit.nonzero(f"c_j != 1 for {label[j]}", abs(cr[j] - 1))
            else:
                audit.zero(f"c_j = 1 for {label[j]}", abs(cr[j] - 1))
        audit.zero("Riesz-component identity on basis vectors", identity_gap(dec, c))
    return audit.report(prediction)


def check_one_excess_structure(F, dec, sol=None):
    """Structural characterization of scalable single-excess frames.

    Scalable exactly when the lines ``{x} u {x_j : j in s}`` form a strictly
    scalable frame of their span ``H_1`` (so every ``W_j`` on the support is a
    line) and the remaining ``W_j`` are an orthogonal family orthogonal to
    ``H_1``.
    """
    _check_frame(F, dec)
    el = _single(dec)
    sol = _solution(F, sol)
    audit = _Audit("one-excess-structure", sol)
    _common_notes(audit, dec)

    if el.hosted:
        audit.flag("excess vector spans its own one-dimensional item", False, F.subspaces[el.host].dim)
        return audit.report(prediction=False)

    x = el.vector
    W = dec.riesz_subspaces
    sig = el.support()
    rest = [j for j in range(len(W)) if j not in sig]
    label = [f"W[{i}]" for i in dec.riesz_indices]

    lines_ok = True
    for j in sig:
        lines_ok &= audit.flag(f"{label[j]} is one-dimensional", W[j].dim == 1, W[j].dim - 1)
    audit.zero(
        "off-support Riesz subspaces mutually orthogonal",
        _max_or_zero(orthogonality_gap(W[i], W[j]) for i in rest for j in rest if i < j),
    )
    if lines_ok:
        vecs = [x] + [el.components[j] for j in sig]
        H1 = Subspace.span(vecs)
        audit.zero("off-support Riesz subspaces orthogonal to span{x, x_j}", _max_or_zero(orthogonality_gap(W[j], H1) for j in rest))
        local = [H1.basis.T @ v for v in vecs]
        sub = solve_scaling(FusionFrame([Subspace.span([v]) for v in local]))
        audit.flag("lines {x, x_j} strictly scalable in their span", sub.strictly_scalable, sub.nnls_residual)
        audit.zero("lines {x, x_j} have excess one", abs(len(vecs) - H1.dim - 1))
    return audit.report(prediction=audit.necessary_ok())


# -- two excess vectors -------------------------------------------------------------


def _two_hosted(dec):
    if len(dec.elements) != 2:
        raise MalformedDecomposition(f"expected two excess vectors, got {len(dec.elements)}")
    x, y = dec.elements
    if not (x.hosted and y.hosted) or x.host == y.host:
        raise MalformedDecomposition("both excess vectors must be hosted, by two different Riesz items")
    return x, y


def check_two_excess(F, dec, sol=None):
    """Necessary conditions for two excess vectors hosted by two Riesz items.

    Requires ``V_1 = W_1 (+) span{x}``, ``V_2 = W_2 (+) span{y}`` with ``x``
    orthogonal to ``W_1`` and without a ``W_1`` component (likewise ``y``).

    Raises
    ------
    MalformedDecomposition
    """
    _check_frame(F, dec)
    xe, ye = _two_hosted(dec)
    for el in (xe, ye):
        if not _cleanly_hosted(dec, el):
            raise MalformedDecomposition(
                "each hosted vector must be orthogonal to, and have no component in, its host's Riesz subspace"
            )
    sol = _solution(F, sol)
    audit = _Audit("two-excess", sol)
    _common_notes(audit, dec)

    W = dec.riesz_subspaces
    P = [S.projector() for S in W]
    p1, p2 = dec.position(xe.host), dec.position(ye.host)
    others = [i for i in range(len(W)) if i not in (p1, p2)]
    x, y = xe.vector, ye.vector
    xc, yc = xe.components, ye.components
    x2, y1 = xc[p2], yc[p1]

    audit.nonzero("x has a component in the second host", np.linalg.norm(x2))
    audit.nonzero("y has a component in the first host", np.linalg.norm(y1))
    audit.zero("the two host Riesz subspaces are orthogonal", orthogonality_gap(W[p1], W[p2]))
    audit.flag("first host Riesz subspace is one-dimensional", W[p1].dim == 1, W[p1].dim - 1)
    audit.flag("second host Riesz subspace is one-dimensional", W[p2].dim == 1, W[p2].dim - 1)
    structural = audit.necessary_ok()

    x_out = _max_or_zero(np.linalg.norm(xc[i]) for i in others)
    y_out = _max_or_zero(np.linalg.norm(yc[i]) for i in others)
    lopsided = (x_out <= THEOREM_TOL < y_out) or (y_out <= THEOREM_TOL < x_out)
    audit.flag("exactly one excess vector reaches beyond the two hosts", lopsided, abs(x_out - y_out), "hypothesis")

    prediction = None if structural and not lopsided else False
    if x_out <= THEOREM_TOL and y_out <= THEOREM_TOL:
        # x in W_2 and y in W_1: both hosts must equal span{x, y}
        Pxy = Subspace.span([x, y]).projector()
        hosts_eq = max(
            float(np.linalg.norm(F.subspaces[xe.host].projector() - Pxy)),
            float(np.linalg.norm(F.subspaces[ye.host].projector() - Pxy)),
        )
        same = audit.zero("both hosts equal span{x, y}", hosts_eq)
        rest_gap = max(
            _max_or_zero(orthogonality_gap(W[i], W[j]) for i in others for j in others if i < j),
            _max_or_zero(orthogonality_gap(F.subspaces[xe.host], W[j]) for j in others),
        )
        rest_ok = audit.zero("remaining Riesz subspaces orthogonal to each other and to the hosts", rest_gap, "hypothesis")
        if not same:
            prediction = False
        elif rest_ok and prediction is None:
            prediction = True

    if audit.strict:
        c = sol.coefficients
        cr = [c[i] for i in dec.riesz_indices]
        c1, c2 = cr[p1], cr[p2]
        audit.zero("<x, y> = 0", abs(x @ y))
        audit.zero(
            "P_i x = (1 - c_1)/c_i x_i off the first host",
            _max_or_zero(np.linalg.norm(P[i] @ x - (1 - c1) / cr[i] * xc[i]) for i in range(len(W)) if i != p1),
        )
        audit.zero(
            "P_i y = (1 - c_2)/c_i y_i off the second host",
            _max_or_zero(np.linalg.norm(P[i] @ y - (1 - c2) / cr[i] * yc[i]) for i in range(len(W)) if i != p2),
        )
        ne1 = audit.nonzero("c_1 != 1", abs(c1 - 1))
        ne2 = audit.nonzero("c_2 != 1", abs(c2 - 1))
        audit.zero("<x_2, x> = (1 - c_2)/c_1", abs(x2 @ x - (1 - c2) / c1))
        audit.zero(
            "P_i x_2 = (c_2 - 1)/c_i x_i outside the hosts",
            _max_or_zero(np.linalg.norm(P[i] @ x2 - (c2 - 1) / cr[i] * xc[i]) for i in others),
        )
        audit.zero("<y_1, y> = (1 - c_1)/c_2", abs(y1 @ y - (1 - c1) / c2))
        audit.zero(
            "P_i y_1 = (c_1 - 1)/c_i y_i outside the hosts",
            _max_or_zero(np.linalg.norm(P[i] @ y1 - (c1 - 1) / cr[i] * yc[i]) for i in others),
        )
        nx2, ny1 = float(x2 @ x2), float(y1 @ y1)
        audit.zero("||x_2||^2 ||y_1||^2 = 1", abs(nx2 * ny1 - 1))
        if ne1 and ne2:
            ratio = c2 * (1 - c2) / (c1 * (1 - c1))
            audit.zero("||x_2||^2 = c_2(1 - c_2) / (c_1(1 - c_1))", abs(nx2 - ratio))
            audit.zero("||y_1||^-2 = c_2(1 - c_2) / (c_1(1 - c_1))", abs(1 / ny1 - ratio) if ny1 > 0 else np.inf)
        s = c1 + c2
        audit.flag("c_1 + c_2 >= 1", s >= 1 - THEOREM_TOL, s - 1)
        audit.flag("c_1 + c_2 < 2", s < 2 - THEOREM_TOL, 2 - s)
        audit.zero("Riesz-component identity on basis vectors", identity_gap(dec, c))
    return audit.report(prediction)


def check_two_excess_h3(F, dec, sol=None):
    """In three dimensions, scalability with two hosted excess vectors forces an orthogonal Riesz part.

    The converse fails, so an orthogonal Riesz part yields no prediction.

    Raises
    ------
    WrongAmbientDimension
    """
    if F.ambient_dim != 3:
        raise WrongAmbientDimension(f"this check applies in dimension 3, got {F.ambient_dim}")
    _check_frame(F, dec)
    _two_hosted(dec)
    sol = _solution(F, sol)
    audit = _Audit("two-excess-h3", sol)
    _common_notes(audit, dec)
    orth = audit.zero("Riesz part orthogonal", max_orthogonality_gap(dec.riesz_subspaces))
    if orth and not audit.strict:
        audit.notes.append("orthogonal Riesz part without strict scalability: the converse does not hold")
    return audit.report(prediction=None if orth else False)


# -- many excess vectors ------------------------------------------------------------


def check_k_excess(F, dec, sol=None):
    """Two or more excess vectors, all standalone or all hosted by a single item.

    All hosted by one item rules out scalability. When every standalone item
    repeats a Riesz subspace, scalability is equivalent to an orthogonal Riesz
    part, and each repeated group's coefficients sum to one (the max-min
    solution splits a single repeated group evenly).

    Raises
    ------
    MalformedDecomposition
    """
    _check_frame(F, dec)
    if len(dec.elements) < 2:
        raise MalformedDecomposition("expected at least two excess vectors")
    sol = _solution(F, sol)
    audit = _Audit("k-excess", sol)
    _common_notes(audit, dec)
    hosts = dec.hosts()
    hosted = [e for e in dec.elements if e.hosted]

    if hosted and len(hosted) == len(dec.elements) and len(hosts) == 1:
        audit.flag("all excess vectors hosted by one Riesz item", True, len(hosted), "hypothesis")
        audit.flag("excess vectors spread over more than one Riesz item", False, 1)
        return audit.report(prediction=False)
    if hosted:
        raise MalformedDecomposition("excess vectors must be all standalone or all hosted by one item")

    W = dec.riesz_subspaces
    P = [S.projector() for S in W]
    groups = {p: [dec.riesz_indices[p]] for p in range(len(W))}
    repeated = True
    for item in dec.standalone_items():
        Pv = F.subspaces[item].projector()
        dist = [float(np.linalg.norm(Pv - Pp)) for Pp in P]
        p = int(np.argmin(dist))
        if dist[p] <= THEOREM_TOL:
            groups[p].append(item)
        else:
            repeated = False
    prediction = None
    if audit.flag("every standalone item repeats a Riesz subspace", repeated, 0.0 if repeated else 1.0, "hypothesis"):
        prediction = audit.zero("Riesz part orthogonal", max_orthogonality_gap(W))
    if audit.strict:
        c = sol.coefficients
        if repeated:
            audit.zero(
                "coefficients of each repeated group sum to one",
                max(abs(sum(c[i] for i in g) - 1) for g in groups.values()),
            )
            multi = [g for g in groups.values() if len(g) > 1]
            if len(multi) == 1:
                g = multi[0]
                audit.zero(
                    "repeated group split evenly as 1/(copies + 1)",
                    max(abs(c[i] - 1 / len(g)) for i in g),
                )
        audit.zero("Riesz-component identity on basis vectors", identity_gap(dec, c))
    return audit.report(prediction)


def check_swap_structure(F, dec, sol=None):
    """Two hosting items whose extra parts are drawn from each other's Riesz subspace.

    With ``V_1 = W_1 + Z_2`` and ``V_2 = W_2 + Z_1`` (``Z_i`` inside ``W_i``),
    scalability forces ``Z_i = W_i`` and ``c_1 + c_2 = 1``; a full swap with
    the remaining Riesz subspaces orthogonal to each other and to
    ``W_1 + W_2`` is scalable. A coefficient equal to one on either host
    forces the other to one as well, along with orthogonality of that host.
    For cleanly hosted vectors (orthogonal to and without component in their
    own host's Riesz subspace) the two hosts' Riesz subspaces must also be
    orthogonal, and ``c_l != 1`` bounds ``dim W_l`` by the number of vectors
    hosted by the other item. Without clean hosting those two claims can fail:
    ``W_1 = span{e1}``, ``W_2 = span{e1 + e2}``, ``V_1 = V_2 = R^2`` is
    scalable with ``c = (1/2, 1/2)``.
    """
    _check_frame(F, dec)
    if dec.standalone_items():
        raise MalformedDecomposition("swap structure has no standalone excess vectors")
    hosts = dec.hosts()
    if len(hosts) != 2:
        raise MalformedDecomposition(f"swap structure needs exactly two hosting items, got {len(hosts)}")
    sol = _solution(F, sol)
    audit = _Audit("swap", sol)
    _common_notes(audit, dec)

    h1, h2 = hosts
    p1, p2 = dec.position(h1), dec.position(h2)
    W = dec.riesz_subspaces
    others = [i for i in range(len(W)) if i not in (p1, p2)]
    X1 = np.array([e.vector for e in dec.hosted_by(h1)])
    X2 = np.array([e.vector for e in dec.hosted_by(h2)])
    clean = all(_cleanly_hosted(dec, e) for e in dec.elements)

    if clean:
        audit.zero("the two host Riesz subspaces are orthogonal", orthogonality_gap(W[p1], W[p2]))
    swap_gap = max(
        max(containment_gap(W[p2], v) for v in X1),
        max(containment_gap(W[p1], v) for v in X2),
    )
    swap = audit.zero("hosted vectors lie in the other host's Riesz subspace", swap_gap, "hypothesis")
    prediction = None if audit.necessary_ok() else False
    if swap:
        Z2, Z1 = Subspace.span(list(X1)), Subspace.span(list(X2))
        full1 = audit.zero("Z_1 = W_1", float(np.linalg.norm(Z1.projector() - W[p1].projector())))
        full2 = audit.zero("Z_2 = W_2", float(np.linalg.norm(Z2.projector() - W[p2].projector())))
        W12 = subspace_sum([W[p1], W[p2]])
        rest_gap = max(
            _max_or_zero(orthogonality_gap(W[i], W[j]) for i in others for j in others if i < j),
            _max_or_zero(orthogonality_gap(W12, W[j]) for j in others),
        )
        rest_ok = audit.zero("remaining Riesz subspaces orthogonal to each other and to W_1 + W_2", rest_gap, "hypothesis")
        if not (full1 and full2):
            prediction = False
        elif rest_ok and prediction is None:
            prediction = True

    if audit.strict:
        c = sol.coefficients
        c1, c2 = c[h1], c[h2]
        if swap:
            audit.zero("c_1 + c_2 = 1", abs(c1 + c2 - 1))
        V1, V2 = F.subspaces[h1], F.subspaces[h2]
        if abs(c1 - 1) <= THEOREM_TOL:
            audit.zero("c_1 = 1 implies c_2 = 1", abs(c2 - 1))
            audit.zero("c_1 = 1 implies V_1 orthogonal to W_2", orthogonality_gap(V1, W[p2]))
            audit.zero(
                "c_1 = 1 implies W_2 orthogonal to the remaining Riesz subspaces",
                _max_or_zero(orthogonality_gap(W[p2], W[j]) for j in others),
            )
        elif clean:
            slack = len(X2) - W[p1].dim
            audit.flag("dim W_1 <= number of vectors hosted by V_2", slack >= 0, slack)
        if abs(c2 - 1) <= THEOREM_TOL:
            audit.zero("c_2 = 1 implies c_1 = 1", abs(c1 - 1))
            audit.zero("c_2 = 1 implies V_2 orthogonal to W_1", orthogonality_gap(V2, W[p1]))
            audit.zero(
                "c_2 = 1 implies W_1 orthogonal to the remaining Riesz subspaces",
                _max_or_zero(orthogonality_gap(W[p1], W[j]) for j in others),
            )
        elif clean:
            slack = len(X1) - W[p2].dim
            audit.flag("dim W_2 <= number of vectors hosted by V_1", slack >= 0, slack)
        audit.zero("Riesz-component identity on basis vectors", identity_gap(dec, c))
    return audit.report(prediction)


CHECKERS = {
    "riesz-scalable": check_riesz_scalable,
    "one-excess": check_one_excess,
    "one-excess-structure": check_one_excess_structure,
    "two-excess": check_two_excess,
    "two-excess-h3": check_two_excess_h3,
    "k-excess": check_k_excess,
    "swap": check_swap_structure,
}

NEEDS_DECOMPOSITION = frozenset(CHECKERS) - {"riesz-scalable"}


def run_check(theorem_id, F, dec=None, sol=None):
    """Dispatch by theorem id.

    Raises
    ------
    UnknownTheoremId
    MalformedDecomposition
        If the theorem needs a decomposition and none was given.
    """
    try:
        checker = CHECKERS[theorem_id]
    except KeyError:
        raise UnknownTheoremId(f"unknown theorem id {theorem_id!r}; known: {', '.join(CHECKERS)}") from None
    if theorem_id in NEEDS_DECOMPOSITION:
        if dec is None:
            raise MalformedDecomposition(f"theorem {theorem_id!r} needs a declared excess decomposition")
        return checker(F, dec, sol)
    return checker(F, sol)

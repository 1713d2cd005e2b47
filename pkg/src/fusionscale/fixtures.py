"""Named example frames, each with a declared excess decomposition.

Infinite-dimensional examples are truncated to a finite window of the
index set; the labels say which window. Every fixture records the theorem
checkers that apply to it and whether it is expected to be strictly
scalable.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .decomposition import ExcessDecomposition, ExcessSpec
from .errors import ParameterOutOfRange, UnknownExample
from .fusion import FusionFrame
from .subspace import Subspace


@dataclass(frozen=True)
class Fixture:
    name: str
    frame: FusionFrame
    decomposition: ExcessDecomposition = None
    theorems: tuple = ()
    expect_scalable: bool = None
    params: dict = field(default_factory=dict)
    note: str = ""


def _e(n, i):
    v = np.zeros(n)
    v[i] = 1.0
    return v


def _span(*vectors):
    return Subspace.span([np.asarray(v, dtype=float) for v in vectors])


def _frame(items):
    return FusionFrame([S for S, _ in items], labels=[lab for _, lab in items])


def _require(ok, msg):
    if not ok:
        raise ParameterOutOfRange(msg)


def _int_param(value, name, lo):
    _require(float(value) == int(value), f"{name} must be an integer")
    value = int(value)
    _require(value >= lo, f"{name} must be at least {lo}")
    return value


# -- builders -----------------------------------------------------------------------


def riesz_u(u=(1.0, 0.0, 0.0)):
    u = np.asarray(u, dtype=float)
    _require(u.shape == (3,), "u must have three entries")
    nrm = np.linalg.norm(u)
    _require(nrm > 0, "u must be nonzero")
    u = u / nrm
    _require(abs(u[0]) > 1e-12, "u_1 must be nonzero for a Riesz basis")
    F = _frame([(_span(u), "W1 = span{u}"), (_span(_e(3, 1), _e(3, 2)), "W2 = {0} x R^2")])
    scalable = abs(u[1]) <= 1e-12 and abs(u[2]) <= 1e-12
    return Fixture("riesz_u", F, None, ("riesz-scalable",), scalable, {"u": u.tolist()})


def one_excess_alpha(alpha=0.5, n=4):
    alpha = float(alpha)
    n = _int_param(n, "n", 4)
    _require(0 < alpha < math.sqrt(2) / 2, "alpha must lie in (0, sqrt(2)/2)")
    b = math.sqrt(1 - alpha * alpha)
    x = alpha * _e(n, 0) - b * _e(n, 1)
    F = _frame([
        (_span(x), "V0 = span{x}"),
        (_span(_e(n, 0)), "W1 = span{e1}"),
        (_span(_e(n, 0) + _e(n, 1)), "W2 = span{e1 + e2}"),
        (_span(*[_e(n, i) for i in range(2, n)]), "W3 = span{e3..en}"),
    ])
    dec = ExcessDecomposition.declare(F, [1, 2, 3], [ExcessSpec(x, item=0)])
    return Fixture(
        "one_excess_alpha", F, dec, ("one-excess", "one-excess-structure"), True, {"alpha": alpha, "n": n}
    )


def one_excess_alpha_coefficients(alpha):
    """Closed-form coefficients ``c = g^2`` (unit weights) for :func:`one_excess_alpha`."""
    b = math.sqrt(1 - alpha * alpha)
    D = 1 - alpha * alpha + alpha * b
    return np.array([1 / D, (1 - 2 * alpha * alpha) / D, 2 * alpha * b / D, 1.0])


def h4_beta(alpha1=0.0, alpha2=0.0, alpha3=1.0, alpha4=0.0, beta=0.0):
    a = np.array([alpha1, alpha2, alpha3, alpha4], dtype=float)
    beta = float(beta)
    _require(np.linalg.norm(a) > 0, "the alpha vector must be nonzero")
    n = 4
    F = _frame([
        (_span(a), "V0 = span{alpha}"),
        (_span(_e(n, 0), _e(n, 1)), "W1 = span{e1, e2}"),
        (_span(_e(n, 2) + beta * _e(n, 0)), "W2 = span{e3 + beta e1}"),
        (_span(_e(n, 3)), "W3 = span{e4}"),
    ])
    dec = ExcessDecomposition.declare(F, [1, 2, 3], [ExcessSpec(a, item=0)])
    V0 = F.subspaces[0]
    scalable = beta == 0.0 and (V0.same_as(F.subspaces[2]) or V0.same_as(F.subspaces[3]))
    params = {"alpha1": alpha1, "alpha2": alpha2, "alpha3": alpha3, "alpha4": alpha4, "beta": beta}
    return Fixture("h4_beta", F, dec, ("one-excess", "one-excess-structure"), scalable, params)


def two_excess_h3():
    n = 3
    F = _frame([
        (_span(_e(n, 0), _e(n, 1)), "V1 = W1 + W2"),
        (_span(_e(n, 1), _e(n, 0)), "V2 = W2 + W1"),
        (_span(_e(n, 2)), "W3 = span{e3}"),
    ])
    dec = ExcessDecomposition.declare(
        F, [0, 1, 2], [ExcessSpec(_e(n, 1), host=0), ExcessSpec(_e(n, 0), host=1)]
    )
    return Fixture("two_excess_h3", F, dec, ("two-excess", "two-excess-h3"), True)


def two_excess_h4():
    n = 4
    s = math.sqrt(3) / 2
    x = 0.5 * _e(n, 1) + s * _e(n, 3)
    y = 0.5 * _e(n, 0) + s * _e(n, 2)
    F = _frame([
        (_span(_e(n, 0), x), "V1 = W1 + span{e2/2 + sqrt(3)/2 e4}"),
        (_span(_e(n, 1), y), "V2 = W2 + span{e1/2 + sqrt(3)/2 e3}"),
        (_span(0.5 * _e(n, 1) - s * _e(n, 3)), "W3 = span{e2/2 - sqrt(3)/2 e4}"),
        (_span(0.5 * _e(n, 0) - s * _e(n, 2)), "W4 = span{e1/2 - sqrt(3)/2 e3}"),
    ])
    dec = ExcessDecomposition.declare(F, [0, 1, 2, 3], [ExcessSpec(x, host=0), ExcessSpec(y, host=1)])
    return Fixture("two_excess_h4", F, dec, ("two-excess",), True)


def nonscalable_h3():
    n = 3
    F = _frame([
        (_span(_e(n, 0), _e(n, 1)), "V1 = W1 + W2"),
        (_span(_e(n, 1), _e(n, 2)), "V2 = W2 + W3"),
        (_span(_e(n, 2)), "W3 = span{e3}"),
    ])
    dec = ExcessDecomposition.declare(
        F, [0, 1, 2], [ExcessSpec(_e(n, 1), host=0), ExcessSpec(_e(n, 2), host=1)]
    )
    return Fixture(
        "nonscalable_h3", F, dec, ("two-excess", "two-excess-h3"), False,
        note="feasible only with a zero coefficient on the second item",
    )


def big_h7(alpha1=1.0, alpha2=1.0, alpha3=1.0, alpha4=1.0, alpha5=1.0, alpha6=1.0, alpha7=1.0, beta=1.0):
    a = [None, alpha1, alpha2, alpha3, alpha4, alpha5, alpha6, alpha7]
    a = [None] + [float(v) for v in a[1:]]
    beta = float(beta)
    _require(a[4] != 0 and a[6] != 0, "alpha4 and alpha6 must be nonzero")
    n = 7

    def e(i):
        return _e(n, i - 1)

    y = a[1] * e(1) + a[2] * e(2) + beta * (a[3] * e(1) + a[4] * e(4)) + a[7] * e(6)
    _require(np.linalg.norm(y) > 0, "the second excess vector is zero for these parameters")
    F = _frame([
        (_span(e(1), e(2), e(3)), "V1 = span{e1, e2} + span{e3}"),
        (_span(e(3), y), "V2 = span{e3} + span{y}"),
        (_span(a[3] * e(1) + a[4] * e(4), a[5] * e(2) + a[6] * e(5), e(6)), "V3"),
        (_span(e(7)), "V4 = span{e7}, truncation of span{e_l : l >= 7}"),
    ])
    dec = ExcessDecomposition.declare(
        F, [0, 1, 2, 3], [ExcessSpec(e(3), host=0), ExcessSpec(y, host=1)],
        riesz_bases={0: [e(1), e(2)]},
    )
    params = {f"alpha{i}": a[i] for i in range(1, 8)}
    params["beta"] = beta
    return Fixture("big_h7", F, dec, ("two-excess",), False, params)


def shift_trunc(m=2):
    m = _int_param(m, "m", 1)
    n = 2 * m + 1

    def e(i):
        return _e(n, i + m)

    F = _frame([
        (_span(*[e(i) for i in range(0, m + 1)]), f"W1 = span{{e_i : 0 <= i <= {m}}}, truncation of span{{e_i : i >= 0}}"),
        (_span(*[e(i) for i in range(-m, 1)]), f"W2 = span{{e_i : -{m} <= i <= 0}}, truncation of span{{e_i : i <= 0}}"),
    ])
    dec = ExcessDecomposition.declare(F, [0, 1], [ExcessSpec(e(0), host=1)])
    return Fixture("shift_trunc", F, dec, ("one-excess", "one-excess-structure"), False, {"m": m})


def zdual_trunc(n=2, m=2, k=None):
    n = _int_param(n, "n", 1)
    m = _int_param(m, "m", 1)
    k = max(n, m) + 2 if k is None else _int_param(k, "k", max(n, m))
    dim = 2 * k + 1

    def e(i):
        return _e(dim, i + k)

    F = _frame([
        (_span(*[e(i) for i in range(-n, k + 1)]), f"Z1 = span{{e_i : -{n} <= i <= {k}}}, truncation of span{{e_i : i >= -{n}}}"),
        (_span(*[e(i) for i in range(-k, m + 1)]), f"Z2 = span{{e_i : -{k} <= i <= {m}}}, truncation of span{{e_i : i <= {m}}}"),
    ])
    specs = [ExcessSpec(e(i), host=0) for i in range(-n, 1)] + [ExcessSpec(e(i), host=1) for i in range(1, m + 1)]
    dec = ExcessDecomposition.declare(F, [0, 1], specs)
    return Fixture("zdual_trunc", F, dec, ("swap",), n == k and m == k, {"n": n, "m": m, "k": k})


def mercedes_benz():
    u = [np.array([math.cos(t), math.sin(t)]) for t in (math.pi / 2, math.pi / 2 + 2 * math.pi / 3, math.pi / 2 + 4 * math.pi / 3)]
    F = _frame([(_span(v), f"span{{u{i + 1}}}") for i, v in enumerate(u)])
    dec = ExcessDecomposition.declare(F, [0, 1], [ExcessSpec(u[2], item=2)])
    return Fixture("mercedes_benz", F, dec, ("one-excess", "one-excess-structure"), True)


def repeated_subspace(n=2, t=0.0):
    n = _int_param(n, "n", 1)
    t = float(t)
    items = [(_span([1.0, 0.0]), "W1 = span{e1}")]
    items += [(_span([1.0, 0.0]), f"copy {i} of W1") for i in range(1, n + 1)]
    items.append((_span([t, 1.0]), "W2 = span{t e1 + e2}"))
    F = _frame(items)
    specs = [ExcessSpec([1.0, 0.0], item=i) for i in range(1, n + 1)]
    dec = ExcessDecomposition.declare(F, [0, n + 1], specs)
    theorems = ("one-excess", "one-excess-structure") if n == 1 else ("k-excess",)
    return Fixture("repeated_subspace", F, dec, theorems, t == 0.0, {"n": n, "t": t})


def tight2_h9():
    n = 9

    def e(i):
        return _e(n, i - 1)

    r2 = math.sqrt(0.5)
    X1 = [e(2), e(3)] + [r2 * (e(2 * i) + e(2 * i + 1)) for i in (2, 3, 4)]
    X2 = [e(1)] + [r2 * (e(2 * i) - e(2 * i + 1)) for i in (2, 3, 4)]
    F = _frame([
        (_span(e(1), *X1), "V1 = W1 + span{e2, e3, e_2i + e_2i+1 : 2 <= i <= 4}, truncation at e9"),
        (_span(e(2), e(3), *X2), "V2 = W2 + span{e1, e_2i - e_2i+1 : 2 <= i <= 4}, truncation at e9"),
        (_span(*[e(i) for i in range(4, 10)]), "W3 = span{e4..e9}, truncation of span{e_i : i >= 4}"),
    ])
    specs = [ExcessSpec(v, host=0) for v in X1] + [ExcessSpec(v, host=1) for v in X2]
    dec = ExcessDecomposition.declare(F, [0, 1, 2], specs)
    return Fixture("tight2_h9", F, dec, ("swap",), True)


def one_subspace_excess():
    n = 4
    F = _frame([
        (_span(_e(n, 0), _e(n, 1) + _e(n, 2), _e(n, 2) + _e(n, 3)), "V1 = W1 + span{e2 + e3, e3 + e4}"),
        (_span(_e(n, 1)), "W2 = span{e2}"),
        (_span(_e(n, 2)), "W3 = span{e3}"),
        (_span(_e(n, 3)), "W4 = span{e4}"),
    ])
    specs = [ExcessSpec(_e(n, 1) + _e(n, 2), host=0), ExcessSpec(_e(n, 2) + _e(n, 3), host=0)]
    dec = ExcessDecomposition.declare(F, [0, 1, 2, 3], specs, riesz_bases={0: [_e(n, 0)]})
    return Fixture("one_subspace_excess", F, dec, ("k-excess",), False)


def orthonormal(n=3):
    n = _int_param(n, "n", 1)
    F = _frame([(_span(_e(n, i)), f"span{{e{i + 1}}}") for i in range(n)])
    return Fixture("orthonormal", F, None, ("riesz-scalable",), True, {"n": n})


def _floats(value):
    if isinstance(value, str):
        return [float(v) for v in value.split(",") if v.strip()]
    return [float(v) for v in value]


# name -> (builder, {parameter: converter})
_FLOAT = float
_REGISTRY = {
    "riesz_u": (riesz_u, {"u": _floats}),
    "one_excess_alpha": (one_excess_alpha, {"alpha": _FLOAT, "n": _FLOAT}),
    "h4_beta": (h4_beta, {**{f"alpha{i}": _FLOAT for i in range(1, 5)}, "beta": _FLOAT}),
    "two_excess_h3": (two_excess_h3, {}),
    "two_excess_h4": (two_excess_h4, {}),
    "nonscalable_h3": (nonscalable_h3, {}),
    "big_h7": (big_h7, {**{f"alpha{i}": _FLOAT for i in range(1, 8)}, "beta": _FLOAT}),
    "shift_trunc": (shift_trunc, {"m": _FLOAT}),
    "zdual_trunc": (zdual_trunc, {"n": _FLOAT, "m": _FLOAT, "k": _FLOAT}),
    "mercedes_benz": (mercedes_benz, {}),
    "repeated_subspace": (repeated_subspace, {"n": _FLOAT, "t": _FLOAT}),
    "tight2_h9": (tight2_h9, {}),
    "one_subspace_excess": (one_subspace_excess, {}),
    "orthonormal": (orthonormal, {"n": _FLOAT}),
}

FIXTURE_NAMES = tuple(_REGISTRY)


def fixture_parameters(name):
    return tuple(_lookup(name)[1])


def _lookup(name):
    try:
        return _REGISTRY[name]
    except KeyError:
        raise UnknownExample(f"unknown example {name!r}; known: {', '.join(_REGISTRY)}") from None


def build_fixture(name, **params):
    """Build a named fixture; parameter values may be strings.

    Raises
    ------
    UnknownExample
    ParameterOutOfRange
    """
    builder, spec = _lookup(name)
    kwargs = {}
    for key, value in params.items():
        if key not in spec:
            raise ParameterOutOfRange(f"example {name!r} has no parameter {key!r}; accepted: {', '.join(spec) or 'none'}")
        try:
            kwargs[key] = spec[key](value)
        except (TypeError, ValueError) as exc:
            raise ParameterOutOfRange(f"bad value for {key!r}: {exc}") from None
        if key != "u" and not math.isfinite(kwargs[key]):
            raise ParameterOutOfRange(f"{key} must be finite")
    return builder(**kwargs)


def all_fixtures():
    """Every fixture at its default parameters."""
    return [build_fixture(name) for name in _REGISTRY]


def random_orthogonal(n, rng):
    """Haar-distributed orthogonal matrix (QR of a Gaussian matrix with sign fix)."""
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def _sometimes_zero(rng, p=0.5):
    return 0.0 if rng.random() < p else float(rng.uniform(-2, 2))


def _random_params(name, rng):
    if name == "riesz_u":
        u = rng.standard_normal(3)
        if rng.random() < 0.4:
            u[1:] = 0.0
        u[0] = u[0] if abs(u[0]) > 0.1 else 1.0
        return {"u": u}
    if name == "one_excess_alpha":
        return {"alpha": rng.uniform(0.01, 0.7), "n": int(rng.integers(4, 7))}
    if name == "h4_beta":
        a = [_sometimes_zero(rng) for _ in range(4)]
        if not any(a):
            a[int(rng.integers(2, 4))] = 1.0
        return dict(zip(["alpha1", "alpha2", "alpha3", "alpha4"], a), beta=_sometimes_zero(rng))
    if name == "big_h7":
        p = {f"alpha{i}": _sometimes_zero(rng, 0.3) for i in (1, 2, 3, 5, 7)}
        p.update(alpha4=rng.uniform(0.5, 2), alpha6=rng.uniform(0.5, 2), beta=_sometimes_zero(rng))
        if p["alpha1"] == p["alpha2"] == p["alpha7"] == 0.0:
            p["alpha1"] = 1.0
        return p
    if name == "shift_trunc":
        return {"m": int(rng.integers(1, 5))}
    if name == "zdual_trunc":
        k = int(rng.integers(1, 5))
        if rng.random() < 0.4:
            return {"n": k, "m": k, "k": k}
        return {"n": int(rng.integers(1, k + 1)), "m": int(rng.integers(1, k + 1)), "k": k}
    if name == "repeated_subspace":
        return {"n": int(rng.integers(1, 5)), "t": _sometimes_zero(rng)}
    if name == "orthonormal":
        return {"n": int(rng.integers(1, 6))}
    return {}


def random_perturbation(rng, name=None):
    """A fixture with random parameters, rotated by a random orthogonal matrix and reweighted.

    Scalability is invariant under both operations, so ``expect_scalable``
    carries over.
    """
    if name is None:
        name = FIXTURE_NAMES[int(rng.integers(len(FIXTURE_NAMES)))]
    fx = build_fixture(name, **_random_params(name, rng))
    U = random_orthogonal(fx.frame.ambient_dim, rng)
    weights = np.exp(rng.uniform(-1, 1, len(fx.frame)))
    F = FusionFrame([S.transformed(U) for S in fx.frame.subspaces], weights, fx.frame.labels)
    dec = None if fx.decomposition is None else fx.decomposition.transformed(F, U)
    params = dict(fx.params, rotated=True)
    return Fixture(fx.name, F, dec, fx.theorems, fx.expect_scalable, params, fx.note)

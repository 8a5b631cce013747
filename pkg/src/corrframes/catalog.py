"""Exact constructions of named frames.

Coordinates are evaluated from closed forms with 40 significant digits and
rounded once to double precision.  Every build is checked against the
entry's expected metrics before it is returned.

Named entries::

    cube4                    (4,3)  vertices of the inscribed cube
    pentagon-complement5     (5,3)  complement of the harmonic (5,2)-frame
    icosahedron6             (6,3)  upper-half vertices of an icosahedron
    cube-plus-onb7           (7,3)  rescaled union of cube4 and an ONB
    hexakis-lines10          (10,3) unit vectors of the 10-line hexakis
                                    bi-antiprism packing (not tight)
    rhombicuboctahedron12    (12,3) rhombicuboctahedron vertex lines
    pentakis-dodecahedron16  (16,3) biscribed pentakis dodecahedron lines

Parametric families: ``onb:d``, ``line:N``, ``simplex:N``, ``harmonic2:N``.
"""

import functools
import math
from dataclasses import dataclass, field
from types import MappingProxyType

import mpmath as mp
import numpy as np

from .errors import ConstructionError, InvalidInputError, NotFoundError
from .frame import (
    Frame,
    is_equiangular,
    max_correlation,
    parseval_defect,
    tightness_diagnostics,
    uniformity_defect,
)

_DPS = 40
MAX_FAMILY_SIZE = 64
EXACT_TOL = 1e-12
CORRELATION_TOL = 1e-10


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    N: int
    d: int
    expected_max_correlation: float | None
    equiangular: bool
    is_parseval: bool
    provenance: str
    constants: MappingProxyType = field(default_factory=lambda: MappingProxyType({}))


@dataclass(frozen=True)
class RattleReport:
    system_residual: float
    infeasible: bool
    contradiction: str
    resolution: int
    target: float
    unconstrained_bound: float


def _mp():
    ctx = mp.mp.clone()
    ctx.dps = _DPS
    return ctx


def _to_array(rows):
    return np.array([[float(x) for x in row] for row in rows], dtype=np.float64)


# -- named constructions -------------------------------------------------------


def _cube4_rows(ctx):
    h = ctx.mpf(1) / 2
    return [[h, h, h], [-h, -h, h], [-h, h, -h], [h, -h, -h]]


def _cube4(ctx):
    return _cube4_rows(ctx), {}


def _pentagon_complement5(ctx):
    s5 = ctx.sqrt(5)
    a = ctx.sqrt(18 * (15 - s5))
    b = ctx.sqrt(150 - 30 * s5)
    c = ctx.sqrt(ctx.mpf(3) / 5)
    U = [
        [1, 0, 0],
        [(-1 - s5) / 6, (15 - s5) / a, 0],
        [(1 - s5) / 6, (-5 - 3 * s5) / a, (150 - 30 * s5) / (a * b)],
        [(-1 + s5) / 6, (5 - 3 * s5) / a, (-60 * s5) / (a * b)],
        [(1 + s5) / 6, (4 * s5) / a, (150 - 30 * s5) / (a * b)],
    ]
    rows = [[c * x for x in row] for row in U]
    return rows, {"a": a, "b": b, "c": c}


def icosahedron_rows(ctx, f5_outer=True, f6_outer=True):
    """Upper-half icosahedron vertices scaled by 1/sqrt(2).

    The last two vertices sit at azimuth 144 and 216 degrees.  Their
    x-coordinate is ``-alpha*sqrt((1+alpha)/(1-alpha))`` (the "outer"
    radical); passing ``False`` substitutes ``-alpha*sqrt((1-alpha)/(1+alpha))``
    instead.  Only the all-outer variant is equiangular.
    """
    al = 1 / ctx.sqrt(5)
    r = 1 / ctx.sqrt(2)
    inner = al * ctx.sqrt((1 - al) / (1 + al))
    outer = al * ctx.sqrt((1 + al) / (1 - al))
    y34 = ctx.sqrt((1 + 2 * al) * (1 - al) / (1 + al))
    y56 = ctx.sqrt((1 - 2 * al) * (1 + al) / (1 - al))
    x5 = -(outer if f5_outer else inner)
    x6 = -(outer if f6_outer else inner)
    rows = [
        [0, 0, 1],
        [ctx.sqrt(1 - al**2), 0, al],
        [inner, y34, al],
        [inner, -y34, al],
        [x5, y56, al],
        [x6, -y56, al],
    ]
    return [[r * x for x in row] for row in rows], {"alpha": al}


def _icosahedron6(ctx):
    return icosahedron_rows(ctx)


def _cube_plus_onb7(ctx):
    a = ctx.sqrt(ctx.mpf(4) / 7)
    b = ctx.sqrt(ctx.mpf(3) / 7)
    rows = [[a * x for x in row] for row in _cube4_rows(ctx)]
    rows += [[b, 0, 0], [0, b, 0], [0, 0, b]]
    return rows, {"a": a, "b": b}


def _hexakis_lines10(ctx):
    be = ctx.mpf(3) ** (-ctx.mpf(1) / 4)
    h = ctx.sqrt(3) / 2
    z = be * ctx.sqrt(ctx.sqrt(3) - 1)
    half = ctx.mpf(1) / 2
    rows = [
        [1, 0, 0],
        [0, -1, 0],
        [-h, half, 0],
        [h, half, 0],
        [be, 0, z],
        [be, 0, -z],
        [be / 2, be * h, z],
        [-be / 2, -be * h, z],
        [be / 2, -be * h, -z],
        [-be / 2, be * h, -z],
    ]
    return rows, {"beta": be}


def _rhombicuboctahedron12(ctx):
    q = 1 / ctx.sqrt(2 * ctx.sqrt(2) + 5)
    s = 1 + ctx.sqrt(2)
    patterns = [
        (1, 1, s), (1, 1, -s), (1, -1, s), (1, -1, -s),
        (1, s, 1), (1, s, -1), (1, -s, 1), (1, -s, -1),
        (s, 1, 1), (s, 1, -1), (s, -1, 1), (s, -1, -1),
    ]
    rows = [[q * x / 2 for x in p] for p in patterns]
    return rows, {"q": q, "s": s}


def pentakis_columns(ctx, last_pair_sign=-1):
    """Unit vectors of the 16 antipodal vertex pairs, one per line.

    Each of the six (x, y, z) permutation classes contributes a +/- pair in
    its last nonzero coordinate.  ``last_pair_sign`` selects the partner of
    ``(0, c3, c1)``: ``-1`` gives ``(0, c3, -c1)``; ``+1`` gives the
    antipode ``(0, -c3, -c1)``, which repeats a line.
    """
    s3 = ctx.sqrt(3)
    s5 = ctx.sqrt(5)
    c0 = (ctx.sqrt(15) - s3) / 6
    c1 = ctx.sqrt(10 * (5 - s5)) / 10
    c2 = s3 / 3
    c3 = ctx.sqrt(10 * (5 + s5)) / 10
    c4 = (ctx.sqrt(15) + s3) / 6
    partner = [0, c3, -c1] if last_pair_sign < 0 else [0, -c3, -c1]
    cols = [
        [0, c0, c4], [0, c0, -c4],
        [c4, 0, c0], [c4, 0, -c0],
        [c0, c4, 0], [c0, -c4, 0],
        [c1, 0, c3], [c1, 0, -c3],
        [c3, c1, 0], [c3, -c1, 0],
        [0, c3, c1], partner,
        [c2, c2, c2], [c2, -c2, -c2], [-c2, c2, -c2], [-c2, -c2, c2],
    ]
    return cols, {"c0": c0, "c1": c1, "c2": c2, "c3": c3, "c4": c4}


def _pentakis_dodecahedron16(ctx):
    cols, consts = pentakis_columns(ctx)
    k = ctx.sqrt(3) / 4
    consts = dict(consts, scale=k)
    return [[k * x for x in col] for col in cols], consts


def _named_expected(ctx):
    return {
        "cube4": ctx.mpf(1) / 3,
        "pentagon-complement5": 2 * ctx.cos(ctx.pi / 5) / 3,
        "icosahedron6": 1 / ctx.sqrt(5),
        "cube-plus-onb7": ctx.sqrt(3) / 3,
        "hexakis-lines10": ctx.sqrt(3) / 2,
        "rhombicuboctahedron12": (3 + 2 * ctx.sqrt(2)) / (5 + 2 * ctx.sqrt(2)),
        "pentakis-dodecahedron16": ctx.sqrt((5 + 2 * ctx.sqrt(5)) / 15),
    }


_NAMED = {
    # name: (N, d, builder, equiangular, is_parseval, provenance)
    "cube4": (4, 3, _cube4, True, True,
              "vertices of the cube inscribed in the sphere of radius sqrt(3)/2"),
    "pentagon-complement5": (5, 3, _pentagon_complement5, False, True,
                             "factorization of I - G of the harmonic (5,2)-frame"),
    "icosahedron6": (6, 3, _icosahedron6, True, True,
                     "upper-half vertices of an icosahedron symmetric about the xy-plane"),
    "cube-plus-onb7": (7, 3, _cube_plus_onb7, False, True,
                       "sqrt(4/7) cube4 together with sqrt(3/7) times the standard basis"),
    "hexakis-lines10": (10, 3, _hexakis_lines10, False, False,
                        "2 axis vectors and 8 non-collinear hexakis bi-antiprism vertices"),
    "rhombicuboctahedron12": (12, 3, _rhombicuboctahedron12, False, True,
                              "rhombicuboctahedron vertices scaled to length 1/2"),
    "pentakis-dodecahedron16": (16, 3, _pentakis_dodecahedron16, False, True,
                                "biscribed pentakis dodecahedron vertex lines scaled by sqrt(3)/4"),
}

_FAMILY_DEFAULTS = {
    "onb": range(1, 5),
    "line": range(2, 7),
    "simplex": range(2, 7),
    "harmonic2": range(2, 9),
}

_FAMILY_MIN = {"onb": 1, "line": 1, "simplex": 2, "harmonic2": 2}


# -- families -------------------------------------------------------------------


def _family_rows(ctx, family, n):
    if family == "onb":
        return [[1 if i == j else 0 for j in range(n)] for i in range(n)], n
    if family == "line":
        return [[1 / ctx.sqrt(n)] for _ in range(n)], 1
    if family == "simplex":
        # Helmert basis of the orthogonal complement of (1, ..., 1)
        rows = [[ctx.mpf(0)] * (n - 1) for _ in range(n)]
        for k in range(1, n):
            w = 1 / ctx.sqrt(k * (k + 1))
            for i in range(k):
                rows[i][k - 1] = w
            rows[k][k - 1] = -k * w
        return rows, n - 1
    if family == "harmonic2":
        r = ctx.sqrt(ctx.mpf(2) / n)
        return [
            [r * ctx.cos(ctx.pi * k / n), r * ctx.sin(ctx.pi * k / n)] for k in range(1, n + 1)
        ], 2
    raise NotFoundError(f"unknown catalog family {family!r}")


def _family_expected(ctx, family, n):
    if family == "onb" or n == 1 or (family == "harmonic2" and n == 2):
        return ctx.mpf(0), True
    if family == "line":
        return ctx.mpf(1), True
    if family == "simplex":
        return ctx.mpf(1) / (n - 1), True
    return ctx.cos(ctx.pi / n), n <= 3


def _parse_name(name):
    if not isinstance(name, str):
        raise NotFoundError(f"catalog name must be a string, got {name!r}")
    if name in _NAMED:
        return name, None
    family, sep, arg = name.partition(":")
    if not sep or family not in _FAMILY_MIN:
        raise NotFoundError(f"unknown catalog entry {name!r}")
    try:
        n = int(arg)
    except ValueError:
        raise NotFoundError(f"catalog family {family!r} needs an integer parameter, got {arg!r}") from None
    if not _FAMILY_MIN[family] <= n <= MAX_FAMILY_SIZE:
        raise NotFoundError(
            f"{family}:N needs {_FAMILY_MIN[family]} <= N <= {MAX_FAMILY_SIZE}, got {n}"
        )
    return family, n


@functools.lru_cache(maxsize=None)
def _construct(name):
    ctx = _mp()
    key, n = _parse_name(name)
    if n is None:
        N, d, builder, equi, parseval, prov = _NAMED[key]
        rows, consts = builder(ctx)
        expected = _named_expected(ctx)[key]
    else:
        rows, d = _family_rows(ctx, key, n)
        N, consts, parseval = n, {}, True
        expected, equi = _family_expected(ctx, key, n)
        prov = {
            "onb": "standard orthonormal basis",
            "line": "N copies of 1/sqrt(N): Grammian J_N / N",
            "simplex": "Helmert rows: Grammian I_N - J_N / N",
            "harmonic2": "sqrt(2/N) (cos(pi k/N), sin(pi k/N)), k = 1..N",
        }[key]
    entry = CatalogEntry(
        name=name,
        N=N,
        d=d,
        expected_max_correlation=float(expected),
        equiangular=equi,
        is_parseval=parseval,
        provenance=prov,
        constants=MappingProxyType({k: float(v) for k, v in consts.items()}),
    )
    frame = Frame(_to_array(rows), label=f"catalog:{name}")
    _self_validate(entry, frame)
    return entry, frame


def _self_validate(entry, F):
    problems = []
    if (F.N, F.d) != (entry.N, entry.d):
        problems.append(f"shape {(F.N, F.d)} != {(entry.N, entry.d)}")
    if entry.is_parseval:
        pd, ud = parseval_defect(F), uniformity_defect(F)
        if pd > EXACT_TOL or ud > EXACT_TOL:
            problems.append(f"defects {pd:.3g}/{ud:.3g} exceed {EXACT_TOL}")
    mc = max_correlation(F)
    if abs(mc - entry.expected_max_correlation) > CORRELATION_TOL:
        problems.append(f"max correlation {mc!r} != expected {entry.expected_max_correlation!r}")
    if F.N >= 2 and is_equiangular(F, CORRELATION_TOL) != entry.equiangular:
        problems.append(f"equiangularity differs from expected {entry.equiangular}")
    if not entry.is_parseval and tightness_diagnostics(F).is_tight:
        problems.append("frame listed as non-tight is tight")
    if problems:
        raise ConstructionError(f"catalog entry {entry.name!r} failed self-validation: " + "; ".join(problems))


def entry(name):
    """CatalogEntry for a named entry or family instance such as ``simplex:9``."""
    return _construct(name)[0]


def build(name):
    """Frame for a catalog name."""
    return _construct(name)[1]


def names():
    out = list(_NAMED)
    for family, rng in _FAMILY_DEFAULTS.items():
        out += [f"{family}:{n}" for n in rng]
    return out


def list_entries():
    """All named entries followed by small instances of each family."""
    return [entry(n) for n in names()]


def families():
    return {f: _FAMILY_MIN[f] for f in _FAMILY_MIN}


# -- certified correlation constants -----------------------------------------


def _base_coherence(N, d):
    if N == d:
        return 0.0
    if d == 1:
        return 1.0
    if d == 2:
        return math.cos(math.pi / N)
    ctx = _mp()
    table = {
        (4, 3): ctx.mpf(1) / 3,
        (5, 3): 2 * ctx.cos(ctx.pi / 5) / 3,
        (6, 3): 1 / ctx.sqrt(5),
        (7, 3): ctx.sqrt(3) / 3,
    }
    v = table.get((N, d))
    return None if v is None else float(v)


def known_coherence(N, d):
    """Certified minimal coherence C(N, d), or ``None`` when not established.

    Values not in the base table are obtained from the complement relation
    C(N, d) = ((N - d)/d) C(N, N - d).
    """
    N, d = int(N), int(d)
    if d < 1 or N < d:
        raise InvalidInputError(f"known_coherence needs N >= d >= 1, got N={N}, d={d}")
    v = _base_coherence(N, d)
    if v is None:
        w = _base_coherence(N, N - d)
        if w is not None:
            v = (N - d) / d * w
    return v


_FROM_CONSTRUCTION = {(12, 3): "rhombicuboctahedron12", (16, 3): "pentakis-dodecahedron16"}


def coherence_reference(N, d):
    """``(value, source)`` with source ``"certified"``, ``"from-construction"``
    or ``None`` when nothing is known."""
    v = known_coherence(N, d)
    if v is not None:
        return v, "certified"
    name = _FROM_CONSTRUCTION.get((int(N), int(d)))
    if name is not None:
        return entry(name).expected_max_correlation, "from-construction"
    return None, None


# -- (10,3) axis rattle ---------------------------------------------------------


def rattle_feasibility_check(resolution=1000):
    """Show that rattling the two axis vectors cannot make the 10-line
    configuration tight.

    The unknowns (b1, b2, c1, c2) must satisfy

        b1^2 + c1^2 = 1,  b2^2 + c2^2 = 1,  b1^2 + b2^2 = 1,
        c1^2 + c2^2 = 3 sqrt(3) - 9/2.

    The first three equations are solved exactly by b1 = cos t, b2 = sin t,
    c1 = +/- sin t, c2 = +/- cos t.  The grid samples t at ``resolution``
    points and every sign choice; the reported residual is the smallest
    worst-equation violation found, which is |1 - (3 sqrt(3) - 9/2)| at
    every grid point.
    """
    resolution = int(resolution)
    if resolution < 100:
        raise InvalidInputError("resolution must be at least 100")
    kappa = 3 * math.sqrt(3) - 4.5
    t = 2 * math.pi * np.arange(resolution) / resolution
    best = math.inf
    for s1 in (1.0, -1.0):
        for s2 in (1.0, -1.0):
            b1, b2 = np.cos(t), np.sin(t)
            c1, c2 = s1 * np.sin(t), s2 * np.cos(t)
            r = np.stack([
                b1**2 + c1**2 - 1,
                b2**2 + c2**2 - 1,
                b1**2 + b2**2 - 1,
                c1**2 + c2**2 - kappa,
            ])
            best = min(best, float(np.min(np.max(np.abs(r), axis=0))))
    text = (
        "b1^2 + c1^2 = 1 and b1^2 + b2^2 = 1 give c1^2 = b2^2; "
        "with b2^2 + c2^2 = 1 this forces c1^2 + c2^2 = 1, "
        f"but the column-norm condition needs c1^2 + c2^2 = 3*sqrt(3) - 9/2 = {kappa:.12g}; "
        f"contradiction of size {abs(1 - kappa):.12g}"
    )
    return RattleReport(
        system_residual=best,
        infeasible=best > 0.1,
        contradiction=text,
        resolution=resolution,
        target=kappa,
        unconstrained_bound=abs(1 - kappa) / 4,
    )

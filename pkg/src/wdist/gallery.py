"""Exact rational test matrices and the published values that go with them."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath

from .errors import InvalidParams, NotPublished
from .ratpoly import as_rat

FRANK = "FRANK"
KAHAN = "KAHAN"
GRCAR = "GRCAR"
EPSILON_FAMILY = "EPSILON_FAMILY"
EXPLICIT = "EXPLICIT"

FAMILIES = (FRANK, KAHAN, GRCAR, EPSILON_FAMILY, EXPLICIT)


@dataclass
class GallerySpec:
    """family + order + parameters.

    KAHAN params: ``s`` and ``c`` (exact, s^2 + c^2 = 1), or
    ``s_power`` = t meaning s^(n-1) = t, approximated to ``digits`` digits.
    EPSILON_FAMILY params: ``eps``.  EXPLICIT params: ``name``.
    """
    family: str
    n: int = 0
    params: dict = field(default_factory=dict)

    def key(self) -> tuple:
        return (self.family, self.n, tuple(sorted((k, str(v)) for k, v in self.params.items())))


# named matrices from the worked examples
EXPLICIT_MATRICES = {
    "companion3": [[0, 1, 0], [0, 0, 1], [-91, -55, -13]],
    "skew4": [[0, -4, 2, -1], [4, 0, 7, 3], [-2, -7, 0, 11], [1, -3, -11, 0]],
    "diag01": [[0, 0], [0, 1]],
    "localize3": [[1, 1, -2], [2, 1, 0], [-3, 1, 1]],
}


def frank(n: int) -> list:
    """Upper Hessenberg: first row n, n-1, ..., 1; entry (i, j) = n + 1 - max(i, j)."""
    return [[Fraction(n + 1 - max(i, j)) if j >= i - 1 else Fraction(0)
             for j in range(1, n + 1)] for i in range(1, n + 1)]


def kahan(n: int, s, c) -> list:
    s, c = as_rat(s), as_rat(c)
    rows = []
    for i in range(n):
        si = s ** i
        rows.append([Fraction(0)] * i + [si] + [-c * si] * (n - 1 - i))
    return rows


def grcar(n: int, k: int = 3) -> list:
    return [[Fraction(-1) if i == j + 1 else Fraction(1) if 0 <= j - i <= k else Fraction(0)
             for j in range(n)] for i in range(n)]


def epsilon_family(eps) -> list:
    e = as_rat(eps)
    return [[Fraction(v) for v in r] for r in
            ([0, 1, 1, 0], [-1, 0, 0, 1], [e, 0, 0, 1], [0, 0, -1, 0])]


def _continued_fraction_near(x: mpmath.mpf, tol: mpmath.mpf) -> Fraction:
    """Convergent of x with |x - p/q| <= tol."""
    y = x
    h0, h1, k0, k1 = 0, 1, 1, 0
    while True:
        ai = int(mpmath.floor(y))
        h0, h1 = h1, ai * h1 + h0
        k0, k1 = k1, ai * k1 + k0
        if abs(x - mpmath.mpf(h1) / k1) <= tol:
            return Fraction(h1, k1)
        y = 1 / (y - ai)


def kahan_circle_point(target_power, n: int, digits: int = 20):
    """Rational (s, c) on the unit circle with s^(n-1) close to the target.

    Uses s = (1 - t^2)/(1 + t^2), c = 2t/(1 + t^2) with t rational, so that
    s^2 + c^2 = 1 holds exactly.  Returns (s, c, error) with
    error = |s^(n-1) - target|, which is at most 10^-digits.
    """
    target = as_rat(target_power)
    if not 0 < target < 1 or n < 2:
        raise InvalidParams("need 0 < s^(n-1) < 1 and n >= 2")
    with mpmath.workdps(2 * digits + 30):
        tv = mpmath.mpf(target.numerator) / target.denominator
        s_true = tv ** (mpmath.mpf(1) / (n - 1))
        t_true = mpmath.sqrt((1 - s_true) / (1 + s_true))
        tol = mpmath.mpf(10) ** (-digits) / (4 * (n - 1))
        while True:
            t = _continued_fraction_near(t_true, tol)
            s = (1 - t * t) / (1 + t * t)
            c = 2 * t / (1 + t * t)
            err = abs(s ** (n - 1) - target)
            if err <= Fraction(1, 10 ** digits):
                return s, c, err
            tol /= 10


def generate(spec: GallerySpec) -> list:
    """Exact matrix for a gallery spec."""
    fam, n, p = spec.family, spec.n, spec.params
    if fam not in FAMILIES:
        raise InvalidParams(f"unknown family {fam!r}")
    if fam == EXPLICIT:
        name = p.get("name")
        if name not in EXPLICIT_MATRICES:
            raise InvalidParams(f"unknown explicit matrix {name!r}")
        return [[Fraction(x) for x in r] for r in EXPLICIT_MATRICES[name]]
    if fam == EPSILON_FAMILY:
        if "eps" not in p:
            raise InvalidParams("epsilon family needs eps")
        return epsilon_family(p["eps"])
    if not isinstance(n, int) or n < 1:
        raise InvalidParams("order must be a positive integer")
    if fam == FRANK:
        return frank(n)
    if fam == GRCAR:
        return grcar(n, int(p.get("k", 3)))
    # Kahan
    if "s_power" in p:
        s, c, _ = kahan_circle_point(p["s_power"], n, int(p.get("digits", 20)))
        return kahan(n, s, c)
    if "s" not in p or "c" not in p:
        raise InvalidParams("Kahan needs s and c (or s_power)")
    s, c = as_rat(p["s"]), as_rat(p["c"])
    if s * s + c * c != 1:
        raise InvalidParams("Kahan needs s^2 + c^2 = 1 exactly", s=s, c=c)
    return kahan(n, s, c)


def parse_gen(text: str) -> GallerySpec:
    """``family:n[:params]`` as used on the command line, e.g. ``frank:5``,
    ``kahan:10:s=3/5,c=4/5``, ``kahan:6:s_power=1/10``, ``epsilon:eps=2``,
    ``grcar:6``, ``explicit:skew4``."""
    parts = text.split(":")
    fam = parts[0].strip().upper()
    alias = {"EPSILON": EPSILON_FAMILY, "EPS": EPSILON_FAMILY}
    fam = alias.get(fam, fam)
    if fam not in FAMILIES:
        raise InvalidParams(f"unknown family {parts[0]!r}")
    rest = parts[1:]
    if fam == EXPLICIT:
        if not rest:
            raise InvalidParams("explicit needs a name")
        return GallerySpec(EXPLICIT, 0, {"name": rest[0]})
    n = 0
    if rest and "=" not in rest[0]:
        try:
            n = int(rest[0])
        except ValueError:
            raise InvalidParams(f"bad order {rest[0]!r}") from None
        rest = rest[1:]
    params = {}
    for chunk in rest:
        for kv in chunk.split(","):
            if not kv:
                continue
            if "=" not in kv:
                raise InvalidParams(f"bad parameter {kv!r}")
            k, v = kv.split("=", 1)
            params[k.strip()] = v.strip()
    if fam == EPSILON_FAMILY:
        n = 4
    if fam == KAHAN and not params:
        params = {"s": "3/5", "c": "4/5"}
    return GallerySpec(fam, n, params)


# ---------------------------------------------------------------------------
# published values

@dataclass
class Reference:
    d: Optional[float] = None
    d_digits: int = 7
    real_zeros: Optional[int] = None
    coeff_size: Optional[int] = None
    poly: Optional[list] = None          # integer coefficients, highest first
    extra: dict = field(default_factory=dict)


FRANK_TABLE = {
    5: (4.499950e-3, 50, 12), 10: (3.925527e-8, 300, 30), 12: (1.849890e-10, 480, 34),
    20: (3.757912e-21, 1690, 62), 30: (1.638008e-36, 4450, 102),
}
KAHAN_TABLE = {
    5: (1.370032e-3, 310, 8), 10: (5.470834e-6, 2970, 48), 15: (2.246949e-8, 10590, 138),
    20: (9.245309e-11, 25730, 288), 25: (3.984992e-10, 52910, 258), 30: (1.240748e-11, 92460, 464),
}
KAHAN_POWER_TABLE = {6: (4.704940e-4, 10), 10: (1.538157e-5, 18), 15: (4.484974e-7, 28), 20: (1.904858e-8, 38)}

F3_POLY = [23839360000, -476315200000, 3522206312000, -11668368222400,
           16297635326400, -6895772352000, 230443315200]

COMPANION3_F = [33076090700402342058246544, -377039198861306289080145178864,
                937864902703881321034450183916, -771868276098720970149792503999,
                211070978787821517684022650624, -510584100140452518540394496,
                319295875259784560640000]
COMPANION3_FTILDE = [412324266119803814719539025, 33923334498676415590177600,
                     691077589890510378371072, -899669298077697638400]

SKEW4_POLY = [11667456256, -2333491251200, 37907565375744]

EPS_C = 1.055249
EPS_1 = 3 - math.sqrt(5)
EPS_2 = 2 * math.sqrt(2) * (math.sqrt(5) + 3) * math.sqrt(math.sqrt(5) + 2) + 7 * math.sqrt(5) + 15


def epsilon_reference(eps) -> Reference:
    """Piecewise distance for A(eps) and the rank-one candidate the zero walk
    should return."""
    e = float(as_rat(eps))
    if e <= 0:
        raise NotPublished("the family is described for eps > 0")
    z1 = e * (math.sqrt(e) - math.sqrt(8)) ** 2 / (e + 2) ** 2
    z4 = (3 - math.sqrt(5)) / 2
    if e <= EPS_C:
        d = math.sqrt(2) * e * (8 - e) / (e * e + 16)
    elif e <= EPS_2:
        d = math.sqrt(z1)
    else:
        d = math.sqrt(z4)
    # z1 is admissible (real lam) only for eps >= eps_1
    cand = math.sqrt(z1) if (e >= EPS_1 and z1 <= z4) else math.sqrt(z4)
    return Reference(d=d, extra={"rank1_candidate": cand, "z1": z1, "z4": z4,
                                 "status": "CANDIDATE_ONLY_MULTIPLE_ZERO",
                                 "branch": "RANK2" if e <= EPS_C else ("Z1" if e <= EPS_2 else "Z4")})


def reference_values(spec: GallerySpec) -> Reference:
    """Reference values printed alongside this matrix; NotPublished otherwise."""
    fam, n, p = spec.family, spec.n, spec.params
    if fam == FRANK:
        if n == 3:
            return Reference(d=0.191004, d_digits=6, real_zeros=6, poly=F3_POLY,
                             extra={"zeros": [0.036482, 0.648383, 2.316991, 4.954165, 5.274176, 6.75],
                                    "lambda_star": 0.602966,
                                    "U_star": [0.639244, -0.751157, -0.164708],
                                    "E_star": [[-0.019161, -0.041159, 0.113343],
                                               [0.022516, 0.048365, -0.133186],
                                               [0.004937, 0.010605, -0.029204]],
                                    "B_star": [[2.980838, 1.958840, 1.113343],
                                               [2.022516, 2.048365, 0.866813],
                                               [0.004937, 1.010605, 0.970795]]})
        if n in FRANK_TABLE:
            d, size, rz = FRANK_TABLE[n]
            return Reference(d=d, real_zeros=rz, coeff_size=size)
    if fam == KAHAN:
        if "s_power" in p:
            if as_rat(p["s_power"]) == Fraction(1, 10) and n in KAHAN_POWER_TABLE:
                d, rz = KAHAN_POWER_TABLE[n]
                return Reference(d=d, real_zeros=rz)
        elif as_rat(p.get("s", 0)) == Fraction(3, 5) and as_rat(p.get("c", 0)) == Fraction(4, 5) \
                and n in KAHAN_TABLE:
            d, size, rz = KAHAN_TABLE[n]
            return Reference(d=d, real_zeros=rz, coeff_size=size)
    if fam == GRCAR and n == 6 and int(p.get("k", 3)) == 3:
        return Reference(d=0.2151857666140395125353, d_digits=22,
                         extra={"z1": 0.116565, "z_tilde": "0.04630491415327188209539627157",
                                "a": 0.753316, "b": -1.591155, "winner": "COMPLEX_BRANCH"})
    if fam == EPSILON_FAMILY:
        return epsilon_reference(p["eps"])
    if fam == EXPLICIT:
        name = p.get("name")
        if name == "companion3":
            return Reference(d=0.035026405335676681771543151648, d_digits=30, poly=COMPANION3_F,
                             extra={"f_tilde": COMPANION3_FTILDE,
                                    "z_tilde": "0.0012268490707391199222512104943",
                                    "real_zeros": [0.739336, 0.765571, 0.980468, 11396.658548],
                                    "a": "-4.403922040624116177182912013601",
                                    "bb": "0.750705046015830894563798035515",
                                    "b": "0.866432366671415902596255690462",
                                    "real_min": 0.739336, "winner": "COMPLEX_BRANCH",
                                    "U0": [0.930609, complex(0.360923, 0.039918), complex(0.045052, 0.008866)],
                                    "third_eig": complex(-4.192156, -1.732865),
                                    "E1": [[complex(0.001289, -0.000442), complex(-0.007120, 0.000832), complex(0.031666, 0.002551)],
                                           [complex(0.000519, -0.000116), complex(-0.002797, 0.000017), complex(0.012172, 0.002348)],
                                           [complex(0.000067, -0.000009), complex(-0.000353, -0.000028), complex(0.001509, 0.000425)]],
                                    # a and bb as printed rational functions of z (numerator, denominator),
                                    # highest power first
                                    "a_ratio": ([43719663040898080379, 2929017747573439808, 29336262189312000],
                                                [2 * 624300876564482975, -2 * 226254560538037856, -2 * 3469512291865600]),
                                    "bb_ratio": ([3083432482762007609519, 1101690698089389073600,
                                                  67186386329988787456, -129087561954918400],
                                                 [16 * 624300876564482975, -16 * 226254560538037856,
                                                  -16 * 3469512291865600])})
        if name == "skew4":
            return Reference(poly=SKEW4_POLY, extra={"z_star": "100 - sqrt(6751)"})
    raise NotPublished(f"no published values for {spec.family} n={n}")

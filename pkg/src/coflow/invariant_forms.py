"""Exact exterior algebra on the invariant forms of a 3-Sasakian 7-manifold.

The algebra is generated by three vertical 1-forms e1, e2, e3 (a coframe of
the Reeb foliation) and two horizontal objects: the triple of 4-dimensional
2-forms w1, w2, w3 and the horizontal volume form vol.  A monomial is a
product of distinct vertical generators (indices ascending) with at most one
horizontal generator, giving 8 x 5 = 40 monomials that span every invariant
differential form.  All coefficients are exact rationals.

Structure relations (with (i, j, k) running over cyclic permutations):

    d(e_i) = -2 e_j ^ e_k - 2 w_i
    d(w_i) =  2 e_k ^ w_j - 2 e_j ^ w_k
    d(vol) =  0
    w_i ^ w_j = 2 delta_ij vol,     w_i ^ vol = 0

The derivative of w_i is not independent data: it is the unique invariant
form making d circ d = 0 given d(e_i), and the test suite re-derives it from
that condition.

A geometry is fixed by scales (a, b, q, eps): the metric weights are
|e1| = |e2| = 1/a, |e3| = 1/b on the coframe, <w_i, w_j> = 2 delta_ij / q^2
and <vol, vol> = 1/q^4 horizontally, with q the squared horizontal scale
(q = c^2).  Working with q instead of c keeps every coefficient rational
even where c itself is irrational.  The orientation carries the sign eps:
the Riemannian volume form is vol_eps = eps * a^2 b q^2 * e123 ^ vol.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

Scalar = Fraction
ScalarLike = Union[int, Fraction]

HORIZONTALS = ("1", "w1", "w2", "w3", "vol")
_HORIZ_DEGREE = {"1": 0, "w1": 2, "w2": 2, "w3": 2, "vol": 4}


def _as_scalar(x: ScalarLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"exact coefficient required, got {type(x).__name__}")


@dataclass(frozen=True)
class Monomial:
    """One of the 40 basis monomials: ascending vertical indices, one horizontal part."""

    verts: tuple[int, ...]
    horiz: str

    def __post_init__(self) -> None:
        if any(i not in (1, 2, 3) for i in self.verts):
            raise ValueError(f"vertical indices must lie in {{1,2,3}}: {self.verts}")
        if list(self.verts) != sorted(set(self.verts)):
            raise ValueError(f"vertical indices must be strictly ascending: {self.verts}")
        if self.horiz not in HORIZONTALS:
            raise ValueError(f"unknown horizontal part {self.horiz!r}")

    @property
    def degree(self) -> int:
        return len(self.verts) + _HORIZ_DEGREE[self.horiz]

    @property
    def key(self) -> str:
        """Serialization key, e.g. 'e23^w1'; the empty product is '1'."""
        ep = "e" + "".join(str(i) for i in self.verts) if self.verts else ""
        hp = self.horiz if self.horiz != "1" else ""
        if ep and hp:
            return ep + "^" + hp
        return ep or hp or "1"

    @staticmethod
    def from_key(key: str) -> "Monomial":
        if key == "1":
            return Monomial((), "1")
        ep, _, hp = key.partition("^")
        if ep.startswith("e"):
            verts = tuple(int(ch) for ch in ep[1:])
            horiz = hp or "1"
        else:
            verts, horiz = (), ep
        return Monomial(verts, horiz)

    def __repr__(self) -> str:
        return self.key


def all_monomials() -> list[Monomial]:
    """The full 40-element basis, ordered by degree then key."""
    subsets: list[tuple[int, ...]] = []
    for mask in range(8):
        subsets.append(tuple(i for i in (1, 2, 3) if mask & (1 << (i - 1))))
    basis = [Monomial(s, h) for s in subsets for h in HORIZONTALS]
    return sorted(basis, key=lambda m: (m.degree, m.key))


UNIT = Monomial((), "1")
TOP = Monomial((1, 2, 3), "vol")


@dataclass(frozen=True)
class InvariantForm:
    """A formal rational combination of basis monomials.

    The zero form has an empty coefficient map; construction drops zero
    coefficients, so equality of forms is equality of the maps.
    """

    coeffs: dict[Monomial, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        cleaned = {m: _as_scalar(c) for m, c in self.coeffs.items() if c != 0}
        object.__setattr__(self, "coeffs", cleaned)

    @staticmethod
    def zero() -> "InvariantForm":
        return InvariantForm({})

    @staticmethod
    def monomial(m: Monomial, coeff: ScalarLike = 1) -> "InvariantForm":
        return InvariantForm({m: _as_scalar(coeff)})

    def is_zero(self) -> bool:
        return not self.coeffs

    def degrees(self) -> set[int]:
        return {m.degree for m in self.coeffs}

    def degree(self) -> int | None:
        """Degree of a homogeneous form; None for the zero form; error if mixed."""
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"form is not homogeneous, degrees {sorted(degs)}")
        return degs.pop()

    def coefficient(self, m: Monomial) -> Fraction:
        return self.coeffs.get(m, Fraction(0))

    def __add__(self, other: "InvariantForm") -> "InvariantForm":
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, Fraction(0)) + c
        return InvariantForm(out)

    def __sub__(self, other: "InvariantForm") -> "InvariantForm":
        return self + (-other)

    def __neg__(self) -> "InvariantForm":
        return InvariantForm({m: -c for m, c in self.coeffs.items()})

    def __rmul__(self, scalar: ScalarLike) -> "InvariantForm":
        s = _as_scalar(scalar)
        return InvariantForm({m: s * c for m, c in self.coeffs.items()})

    def __mul__(self, scalar: ScalarLike) -> "InvariantForm":
        return self.__rmul__(scalar)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = [f"{c}*{m.key}" for m, c in sorted(self.coeffs.items(), key=lambda t: (t[0].degree, t[0].key))]
        return " + ".join(parts)

    def to_json_dict(self) -> dict[str, str]:
        """Serialize as {monomial-key: "num/den"} with exact string rationals."""
        items = sorted(self.coeffs.items(), key=lambda t: (t[0].degree, t[0].key))
        return {m.key: str(c) for m, c in items}

    @staticmethod
    def from_json_dict(data: Mapping[str, str]) -> "InvariantForm":
        return InvariantForm({Monomial.from_key(k): Fraction(v) for k, v in data.items()})


def form(terms: Iterable[tuple[str, ScalarLike]]) -> InvariantForm:
    """Build a form from (key, coefficient) pairs."""
    out: dict[Monomial, Fraction] = {}
    for key, c in terms:
        m = Monomial.from_key(key)
        out[m] = out.get(m, Fraction(0)) + _as_scalar(c)
    return InvariantForm(out)


# vertical and horizontal generators as forms
E1 = form([("e1", 1)])
E2 = form([("e2", 1)])
E3 = form([("e3", 1)])
W1 = form([("w1", 1)])
W2 = form([("w2", 1)])
W3 = form([("w3", 1)])
VOL = form([("vol", 1)])


@dataclass(frozen=True)
class GeometryParams:
    """Scales (a, b, q) and orientation sign eps of an invariant geometry.

    a scales e1, e2 and b scales e3; q = c^2 is the squared horizontal
    scale.  All three must be positive rationals; eps is +1 or -1.
    """

    a: Fraction
    b: Fraction
    q: Fraction
    eps: int

    def __post_init__(self) -> None:
        for name in ("a", "b", "q"):
            v = _as_scalar(getattr(self, name))
            object.__setattr__(self, name, v)
            if v <= 0:
                raise ValueError(f"{name} must be positive, got {v}")
        if self.eps not in (+1, -1):
            raise ValueError(f"eps must be +1 or -1, got {self.eps}")

    def state(self) -> tuple[float, float, float]:
        """Floating (a, b, c) with c = sqrt(q)."""
        return (float(self.a), float(self.b), float(self.q) ** 0.5)


def random_params(rng: random.Random, eps: int) -> GeometryParams:
    """Draw scales with numerator and denominator uniform in [1, 97].

    Small heights keep exact arithmetic fast while giving full confidence
    for polynomial identity testing.
    """
    def draw() -> Fraction:
        return Fraction(rng.randint(1, 97), rng.randint(1, 97))

    return GeometryParams(a=draw(), b=draw(), q=draw(), eps=eps)


def _merge_sign(v1: tuple[int, ...], v2: tuple[int, ...]) -> int:
    """Parity sign of sorting the concatenation of two ascending index tuples."""
    inversions = sum(1 for i in v1 for j in v2 if j < i)
    return -1 if inversions % 2 else 1


# horizontal products: (h1, h2) -> (coefficient, horizontal) or None if zero
_HORIZ_MUL: dict[tuple[str, str], tuple[int, str]] = {}
for _h in HORIZONTALS:
    _HORIZ_MUL[("1", _h)] = (1, _h)
    _HORIZ_MUL[(_h, "1")] = (1, _h)
for _i in (1, 2, 3):
    _HORIZ_MUL[(f"w{_i}", f"w{_i}")] = (2, "vol")


def wedge_monomials(m1: Monomial, m2: Monomial) -> tuple[Fraction, Monomial] | None:
    """Product of two monomials as (coefficient, monomial), or None when zero.

    Horizontal parts have even degree, so the only sign comes from sorting
    the vertical indices.
    """
    if set(m1.verts) & set(m2.verts):
        return None
    hm = _HORIZ_MUL.get((m1.horiz, m2.horiz))
    if hm is None:
        return None
    hcoeff, horiz = hm
    sign = _merge_sign(m1.verts, m2.verts)
    verts = tuple(sorted(m1.verts + m2.verts))
    return Fraction(sign * hcoeff), Monomial(verts, horiz)


def wedge(alpha: InvariantForm, beta: InvariantForm) -> InvariantForm:
    """Bilinear, associative wedge product; degree overflow gives zero."""
    out: dict[Monomial, Fraction] = {}
    for m1, c1 in alpha.coeffs.items():
        for m2, c2 in beta.coeffs.items():
            prod = wedge_monomials(m1, m2)
            if prod is None:
                continue
            c, m = prod
            out[m] = out.get(m, Fraction(0)) + c1 * c2 * c
    return InvariantForm(out)


# differentials of the generators; everything else follows by the Leibniz rule
_D_GEN: dict[str, InvariantForm] = {
    "e1": form([("e23", -2), ("w1", -2)]),
    "e2": form([("e13", 2), ("w2", -2)]),   # -2 e3^e1 - 2 w2
    "e3": form([("e12", -2), ("w3", -2)]),
    "w1": form([("e3^w2", 2), ("e2^w3", -2)]),
    "w2": form([("e1^w3", 2), ("e3^w1", -2)]),
    "w3": form([("e2^w1", 2), ("e1^w2", -2)]),
    "vol": InvariantForm.zero(),
    "1": InvariantForm.zero(),
}


def _d_monomial(m: Monomial) -> InvariantForm:
    total = InvariantForm.zero()
    factors = [f"e{i}" for i in m.verts] + ([m.horiz] if m.horiz != "1" else [])
    for j, fac in enumerate(factors):
        sign = -1 if j % 2 else 1
        # vertical factors have degree 1; the even-degree horizontal factor
        # sits in the final slot, so it contributes no extra sign beyond j
        if fac.startswith("e"):
            pre = InvariantForm.monomial(Monomial(m.verts[:j], "1"))
            post = InvariantForm.monomial(Monomial(m.verts[j + 1:], m.horiz))
        else:
            pre = InvariantForm.monomial(Monomial(m.verts, "1"))
            post = InvariantForm.monomial(UNIT)
        term = wedge(wedge(pre, _D_GEN[fac]), post)
        total = total + (sign * term)
    return total


def exterior_derivative(alpha: InvariantForm) -> InvariantForm:
    """Exterior derivative from the structure relations and the Leibniz rule."""
    total = InvariantForm.zero()
    for m, c in alpha.coeffs.items():
        total = total + c * _d_monomial(m)
    return total


def monomial_weight(m: Monomial, p: GeometryParams) -> Fraction:
    """Squared norm <m, m>: the basis is orthogonal and the metric multiplicative."""
    w = Fraction(1)
    for i in m.verts:
        w *= 1 / (p.a * p.a) if i in (1, 2) else 1 / (p.b * p.b)
    if m.horiz in ("w1", "w2", "w3"):
        w *= 2 / (p.q * p.q)
    elif m.horiz == "vol":
        w *= 1 / (p.q ** 4)
    return w


def volume_form(p: GeometryParams) -> InvariantForm:
    """Riemannian volume form: eps * a^2 b q^2 * e123 ^ vol."""
    return InvariantForm.monomial(TOP, p.eps * p.a * p.a * p.b * p.q * p.q)


# complementary horizontal parts under the star pairing h ^ h' -> vol
_HORIZ_PARTNER = {"1": "vol", "vol": "1", "w1": "w1", "w2": "w2", "w3": "w3"}


def hodge_star(alpha: InvariantForm, p: GeometryParams) -> InvariantForm:
    """Hodge star, defined by gamma ^ star(beta) = <gamma, beta> vol_eps.

    Star of a basis monomial is a multiple of its complementary monomial;
    the multiple is derived from the weight and the wedge onto the top
    monomial rather than hard-coded.
    """
    if alpha.is_zero():
        return alpha
    alpha.degree()  # homogeneity check
    out = InvariantForm.zero()
    top_coeff = p.eps * p.a * p.a * p.b * p.q * p.q
    for m, c in alpha.coeffs.items():
        comp = Monomial(tuple(i for i in (1, 2, 3) if i not in m.verts),
                        _HORIZ_PARTNER[m.horiz])
        pairing = wedge_monomials(m, comp)
        assert pairing is not None and pairing[1] == TOP
        scale = monomial_weight(m, p) * top_coeff / pairing[0]
        out = out + InvariantForm.monomial(comp, c * scale)
    return out


def inner_product(alpha: InvariantForm, beta: InvariantForm, p: GeometryParams) -> Fraction:
    """Pointwise inner product <alpha, beta>; requires equal homogeneous degree."""
    da, db = alpha.degree(), beta.degree()
    if da is not None and db is not None and da != db:
        raise ValueError(f"degree mismatch: {da} vs {db}")
    total = Fraction(0)
    for m, c in alpha.coeffs.items():
        cb = beta.coeffs.get(m)
        if cb is not None:
            total += c * cb * monomial_weight(m, p)
    return total


def dstar_on_4forms(rho: InvariantForm, p: GeometryParams) -> InvariantForm:
    """The operator d(star(.)) on 4-forms; its image is again degree 4."""
    if not rho.is_zero() and rho.degree() != 4:
        raise ValueError("dstar_on_4forms expects a degree-4 form")
    return exterior_derivative(hodge_star(rho, p))


def total_integral(rho: InvariantForm, p: GeometryParams) -> Fraction:
    """Integral of a 7-form, normalized so that e123 ^ vol has total mass 1.

    The normalization fixes the base volume, so integrals are reported per
    unit base volume.  Note the e123 ^ vol orientation: for eps = -1 the
    Riemannian volume form integrates to a negative number under it.
    """
    if not rho.is_zero() and rho.degree() != 7:
        raise ValueError("total_integral expects a degree-7 form")
    return rho.coefficient(TOP)


def algebra_checks(p: GeometryParams) -> list[tuple[str, bool]]:
    """Named exact consistency checks of the algebra at one parameter point.

    Returns (check id, passed) pairs; everything runs in rational
    arithmetic over the full 40-monomial basis.
    """
    basis = all_monomials()
    vol_eps = volume_form(p)

    dd_ok = all(exterior_derivative(_d_monomial(m)).is_zero() for m in basis)

    invol_ok = True
    for m in basis:
        fm = InvariantForm.monomial(m)
        if hodge_star(hodge_star(fm, p), p) != fm:
            invol_ok = False

    # gamma ^ star(beta) = <gamma, beta> vol_eps over every same-degree pair
    pairing_ok = True
    by_degree: dict[int, list[Monomial]] = {}
    for m in basis:
        by_degree.setdefault(m.degree, []).append(m)
    for mons in by_degree.values():
        for m1 in mons:
            f1 = InvariantForm.monomial(m1)
            for m2 in mons:
                f2 = InvariantForm.monomial(m2)
                lhs = wedge(f1, hodge_star(f2, p))
                if lhs != inner_product(f1, f2, p) * vol_eps:
                    pairing_ok = False

    horiz_ok = (
        wedge(W1, W1) == 2 * VOL and wedge(W2, W2) == 2 * VOL
        and wedge(W3, W3) == 2 * VOL
        and wedge(W1, W2).is_zero() and wedge(W2, W3).is_zero()
        and wedge(W3, W1).is_zero() and wedge(W1, VOL).is_zero()
    )

    unit_ok = hodge_star(form([("1", 1)]), p) == vol_eps

    return [
        ("nilpotent-differential", dd_ok),
        ("star-involution", invol_ok),
        ("star-pairing", pairing_ok),
        ("horizontal-products", horiz_ok),
        ("unit-star", unit_ok),
    ]

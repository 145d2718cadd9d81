"""Differential forms, vector fields, and the exterior calculus over a chart.

A degree-k form is a sparse dictionary from strictly increasing k-tuples of
variable indices to nonzero rational functions.  Degree-0 forms use the empty
tuple as their single key, so functions, 1-forms, and higher forms share one
arithmetic.  All operations are exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ChartMismatch, GvError, ZeroFunction
from .field import Chart, MultiPoly, RatFn, as_ratfn


class DiffForm:
    """An exact differential form of fixed degree on a chart."""

    __slots__ = ("chart", "degree", "terms")

    def __init__(self, chart: Chart, degree: int, terms: dict) -> None:
        if degree < 0 or degree > chart.dim:
            if degree < 0:
                raise GvError("form degree must be nonnegative")
            # a degree above the dimension is identically zero
            terms = {}
        clean: dict[tuple[int, ...], RatFn] = {}
        for idx, c in terms.items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise GvError(f"index {idx} does not match degree {degree}")
            if any(not (0 <= i < chart.dim) for i in idx):
                raise GvError(f"index {idx} out of range for chart")
            if any(a >= b for a, b in zip(idx, idx[1:])):
                raise GvError(f"index {idx} must be strictly increasing")
            c = as_ratfn(chart, c)
            if not c.is_zero():
                clean[idx] = c
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a) -> None:  # pragma: no cover - guard only
        raise AttributeError("DiffForm is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, chart: Chart, degree: int) -> "DiffForm":
        return cls(chart, degree, {})

    @classmethod
    def from_function(cls, f: RatFn) -> "DiffForm":
        return cls(f.chart, 0, {(): f})

    @classmethod
    def coordinate(cls, chart: Chart, name: str) -> "DiffForm":
        """The 1-form d(x) for a chart variable x."""
        return cls(chart, 1, {(chart.index(name),): chart.one()})

    @classmethod
    def one_form(cls, chart: Chart, coeffs: Sequence) -> "DiffForm":
        if len(coeffs) != chart.dim:
            raise GvError("one coefficient per chart variable required")
        return cls(chart, 1, {(i,): c for i, c in enumerate(coeffs)})

    # -- queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, idx: Sequence[int]) -> RatFn:
        return self.terms.get(tuple(idx), self.chart.zero())

    def coeffs(self) -> tuple[RatFn, ...]:
        """Coefficient vector of a 1-form in chart order."""
        if self.degree != 1:
            raise GvError("coefficient vector only defined for 1-forms")
        return tuple(self.coeff((i,)) for i in range(self.chart.dim))

    def scalar(self) -> RatFn:
        """The rational function carried by a degree-0 form."""
        if self.degree != 0:
            raise GvError("scalar value only defined in degree 0")
        return self.terms.get((), self.chart.zero())

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffForm):
            return NotImplemented
        return (
            self.chart == other.chart
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.chart, self.degree, frozenset(self.terms)))

    # -- linear structure ---------------------------------------------

    def _check(self, other: "DiffForm") -> None:
        if self.chart != other.chart:
            raise ChartMismatch("forms on different charts")
        if self.degree != other.degree:
            raise GvError(f"cannot combine degrees {self.degree} and {other.degree}")

    def __add__(self, other) -> "DiffForm":
        if not isinstance(other, DiffForm):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for idx, c in other.terms.items():
            s = out.get(idx)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(idx, None)
            else:
                out[idx] = s
        return DiffForm(self.chart, self.degree, out)

    def __neg__(self) -> "DiffForm":
        return DiffForm(self.chart, self.degree, {i: -c for i, c in self.terms.items()})

    def __sub__(self, other) -> "DiffForm":
        if not isinstance(other, DiffForm):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "DiffForm":
        """Multiplication by a function or constant."""
        f = as_ratfn(self.chart, other)
        if f.is_zero():
            return DiffForm.zero(self.chart, self.degree)
        return DiffForm(self.chart, self.degree, {i: c * f for i, c in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, other) -> "DiffForm":
        f = as_ratfn(self.chart, other)
        return self * f.inv()

    def __str__(self) -> str:
        return form_str(self)

    def __repr__(self) -> str:
        return f"DiffForm({form_str(self)})"


def _merge_indices(a: tuple[int, ...], b: tuple[int, ...]):
    """Merge two increasing index tuples; returns (sign, merged) or None."""
    sign = 1
    inversions = 0
    for j in b:
        greater = 0
        for i in a:
            if i == j:
                return None
            if i > j:
                greater += 1
        inversions += greater
    merged = tuple(sorted(a + b))
    if inversions % 2:
        sign = -1
    return sign, merged


def wedge(a: DiffForm, b: DiffForm) -> DiffForm:
    """Exterior product."""
    if a.chart != b.chart:
        raise ChartMismatch("forms on different charts")
    chart = a.chart
    deg = a.degree + b.degree
    if deg > chart.dim:
        return DiffForm.zero(chart, deg)
    out: dict[tuple[int, ...], RatFn] = {}
    for ia, ca in a.terms.items():
        for ib, cb in b.terms.items():
            merged = _merge_indices(ia, ib)
            if merged is None:
                continue
            sign, idx = merged
            c = ca * cb
            if sign < 0:
                c = -c
            s = out.get(idx)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(idx, None)
            else:
                out[idx] = s
    return DiffForm(chart, deg, out)


def wedge_all(forms: Sequence[DiffForm]) -> DiffForm:
    """Left-to-right exterior product of a nonempty sequence."""
    if not forms:
        raise GvError("empty wedge")
    acc = forms[0]
    for f in forms[1:]:
        acc = wedge(acc, f)
    return acc


def ext_d(a) -> DiffForm:
    """Exterior derivative; accepts a form or a rational function."""
    if isinstance(a, RatFn):
        a = DiffForm.from_function(a)
    chart = a.chart
    if a.degree >= chart.dim:
        return DiffForm.zero(chart, a.degree + 1)
    out: dict[tuple[int, ...], RatFn] = {}
    for idx, c in a.terms.items():
        for v in range(chart.dim):
            if v in idx:
                continue
            dc = c.diff(v)
            if dc.is_zero():
                continue
            pos = sum(1 for i in idx if i < v)
            if pos % 2:
                dc = -dc
            nidx = tuple(sorted(idx + (v,)))
            s = out.get(nidx)
            s = dc if s is None else s + dc
            if s.is_zero():
                out.pop(nidx, None)
            else:
                out[nidx] = s
    return DiffForm(chart, a.degree + 1, out)


def d_of(f: RatFn) -> DiffForm:
    """The differential of a function as a 1-form."""
    return ext_d(f)


class VectorField:
    """A rational vector field: one component per chart variable."""

    __slots__ = ("chart", "components")

    def __init__(self, chart: Chart, components: Sequence) -> None:
        if len(components) != chart.dim:
            raise GvError("one component per chart variable required")
        comps = tuple(as_ratfn(chart, c) for c in components)
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "components", comps)

    def __setattr__(self, *a) -> None:  # pragma: no cover - guard only
        raise AttributeError("VectorField is immutable")

    @classmethod
    def coordinate(cls, chart: Chart, name: str) -> "VectorField":
        comps = [chart.zero()] * chart.dim
        comps[chart.index(name)] = chart.one()
        return cls(chart, comps)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.chart == other.chart and self.components == other.components

    def __add__(self, other: "VectorField") -> "VectorField":
        if not isinstance(other, VectorField):
            return NotImplemented
        if self.chart != other.chart:
            raise ChartMismatch("vector fields on different charts")
        return VectorField(
            self.chart, [a + b for a, b in zip(self.components, other.components)]
        )

    def __neg__(self) -> "VectorField":
        return VectorField(self.chart, [-c for c in self.components])

    def __sub__(self, other: "VectorField") -> "VectorField":
        if not isinstance(other, VectorField):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "VectorField":
        f = as_ratfn(self.chart, other)
        return VectorField(self.chart, [c * f for c in self.components])

    __rmul__ = __mul__

    def apply(self, f: RatFn) -> RatFn:
        """Directional derivative X(f)."""
        out = self.chart.zero()
        for i, c in enumerate(self.components):
            if not c.is_zero():
                out = out + c * f.diff(i)
        return out

    def bracket(self, other: "VectorField") -> "VectorField":
        """Lie bracket [X, Y]."""
        if self.chart != other.chart:
            raise ChartMismatch("vector fields on different charts")
        comps = [
            self.apply(oc) - other.apply(sc)
            for sc, oc in zip(self.components, other.components)
        ]
        return VectorField(self.chart, comps)

    def __str__(self) -> str:
        names = self.chart.variables
        parts = [f"({c})*@{n}" for n, c in zip(names, self.components) if not c.is_zero()]
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"VectorField({self})"


def interior(x: VectorField, a: DiffForm) -> DiffForm:
    """Interior product i_X in the first slot."""
    if x.chart != a.chart:
        raise ChartMismatch("vector field and form on different charts")
    if a.degree == 0:
        raise GvError("interior product needs degree at least 1")
    out: dict[tuple[int, ...], RatFn] = {}
    for idx, c in a.terms.items():
        for j, i in enumerate(idx):
            comp = x.components[i]
            if comp.is_zero():
                continue
            t = comp * c
            if j % 2:
                t = -t
            nidx = idx[:j] + idx[j + 1:]
            s = out.get(nidx)
            s = t if s is None else s + t
            if s.is_zero():
                out.pop(nidx, None)
            else:
                out[nidx] = s
    return DiffForm(a.chart, a.degree - 1, out)


def form_apply(a: DiffForm, x: VectorField) -> RatFn:
    """Evaluate a 1-form on a vector field."""
    if a.degree != 1:
        raise GvError("form_apply expects a 1-form")
    return interior(x, a).scalar()


def lie_derivative(x: VectorField, a) -> "DiffForm | RatFn":
    """Lie derivative along X via the homotopy formula."""
    if isinstance(a, RatFn):
        return x.apply(a)
    if a.degree == 0:
        return DiffForm.from_function(x.apply(a.scalar()))
    return interior(x, ext_d(a)) + ext_d(interior(x, a))


def is_integrable(omega: DiffForm) -> bool:
    """Whether a 1-form satisfies omega ^ d(omega) = 0."""
    if omega.degree != 1:
        raise GvError("integrability is a condition on 1-forms")
    return wedge(omega, ext_d(omega)).is_zero()


def same_foliation(a: DiffForm, b: DiffForm) -> bool:
    """Whether two nonzero integrable 1-forms have proportional kernels."""
    if a.degree != 1 or b.degree != 1:
        raise GvError("foliation comparison expects 1-forms")
    if a.is_zero() or b.is_zero():
        raise ZeroFunction("foliation comparison needs nonzero forms")
    return wedge(a, b).is_zero()


def pullback(phi: Sequence[RatFn], a: DiffForm) -> DiffForm:
    """Pull a form back along the map whose target coordinates are phi.

    phi has one entry per variable of the form's chart; the entries live on
    the source chart.  Functions substitute; d commutes with the pullback.
    """
    if a.degree == 0:
        return DiffForm.from_function(a.scalar().substitute(phi))
    if not phi:
        raise GvError("empty pullback map")
    src = phi[0].chart
    if len(phi) != a.chart.dim:
        raise GvError("pullback map needs one entry per target variable")
    diffs = [ext_d(f) for f in phi]
    out = DiffForm.zero(src, a.degree)
    for idx, c in a.terms.items():
        term = DiffForm.from_function(c.substitute(phi))
        block = wedge_all([diffs[i] for i in idx])
        out = out + wedge(term, block)
    return out


def form_str(a: DiffForm) -> str:
    """Canonical printing: index tuples in lexicographic order."""
    if a.is_zero():
        return "0"
    names = a.chart.variables
    pieces = []
    for idx in sorted(a.terms):
        c = a.terms[idx]
        base = "/\\".join(f"d{names[i]}" for i in idx)
        if idx == ():
            pieces.append(f"({c})")
        else:
            pieces.append(f"({c})*{base}")
    return " + ".join(pieces)

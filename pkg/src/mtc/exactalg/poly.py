import re
import typing
from fractions import Fraction

from mtc.exactalg.linalg import bareiss_rank

if typing.TYPE_CHECKING:
    from mtc.types import Degree, Exponent


class Monomial2(typing.NamedTuple):
    """The monomial x1^e1 * x2^e2."""
    e1: "Exponent"
    e2: "Exponent"

    @property
    def degree(self) -> "Degree":
        return self.e1 + self.e2

    def __mul__(self, other: object) -> "Monomial2":  # type: ignore[override]
        if not isinstance(other, Monomial2):
            return NotImplemented
        return Monomial2(self.e1 + other.e1, self.e2 + other.e2)

    def __str__(self) -> str:
        factors = []
        for name, e in (("x1", self.e1), ("x2", self.e2)):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        return "*".join(factors) if factors else "1"


def graded_key(mon: Monomial2) -> tuple[int, int]:
    """Sort key of the global term order.

    Terms are ordered by total degree, and within one degree by
    decreasing power of x1, so that 1/4*x1^2 comes before 1/4*x2^2.

    """
    return (mon.degree, -mon.e1)


def monomials_of_degree(d: "Degree") -> list[Monomial2]:
    """All monomials of total degree d, in the global term order."""
    return [Monomial2(d - i, i) for i in range(d + 1)]


def monomials_up_to(l: "Degree") -> list[Monomial2]:
    """All monomials of total degree at most l, in the global term order."""
    return [mon for d in range(l + 1) for mon in monomials_of_degree(d)]


type Coefficient = Fraction | int


class Poly2:
    """Sparse bivariate polynomial with exact rational coefficients.

    Zero coefficients are never stored and the terms are kept in the
    global graded order, so iteration, printing and equality are all
    deterministic. Instances are treated as immutable.

    Arguments:
        terms: Mapping (or iterable of pairs) from monomial to coefficient.

    """
    __slots__ = ["terms", "_hash"]

    def __init__(
        self,
        terms: "typing.Mapping[Monomial2, Coefficient] | typing.Iterable[tuple[Monomial2, Coefficient]] | None" = None,
    ):
        acc: dict[Monomial2, Fraction] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, typing.Mapping) else terms
            for mon, coef in items:
                mon = Monomial2(*mon)
                acc[mon] = acc.get(mon, Fraction(0)) + Fraction(coef)
        self.terms: dict[Monomial2, Fraction] = {
            mon: acc[mon] for mon in sorted(acc, key=graded_key) if acc[mon] != 0
        }
        self._hash: int | None = None

    # --------
    # Constructors
    # --------

    @classmethod
    def zero(cls) -> "Poly2":
        return cls()

    @classmethod
    def constant(cls, c: Coefficient) -> "Poly2":
        return cls({Monomial2(0, 0): c})

    @classmethod
    def monomial(cls, e1: "Exponent", e2: "Exponent", coef: Coefficient = 1) -> "Poly2":
        return cls({Monomial2(e1, e2): coef})

    @classmethod
    def parse(cls, text: str) -> "Poly2":
        """Inverse of `str()`, e.g. ``Poly2.parse("1/4*x1^2 - x2")``."""
        compact = text.replace(" ", "")
        if not compact:
            raise ValueError("Empty polynomial text.")
        if compact[0] not in "+-":
            compact = "+" + compact

        # ["", sign, body, sign, body, ...]
        parts = re.split(r"([+-])", compact)
        terms: list[tuple[Monomial2, Fraction]] = []
        for sign, body in zip(parts[1::2], parts[2::2]):
            if not body:
                raise ValueError(f"Malformed polynomial text: {text!r}")
            coef = Fraction(1)
            e1 = e2 = 0
            for factor in body.split("*"):
                match = re.fullmatch(r"x([12])(?:\^(\d+))?", factor)
                if match is not None:
                    power = int(match.group(2) or 1)
                    if match.group(1) == "1":
                        e1 += power
                    else:
                        e2 += power
                else:
                    try:
                        coef *= Fraction(factor)
                    except ValueError:
                        raise ValueError(f"Malformed polynomial text: {text!r}") from None
            terms.append((Monomial2(e1, e2), -coef if sign == "-" else coef))

        # "0" parses to the zero polynomial through the constructor.
        return cls(terms)

    # --------
    # Queries
    # --------

    def __iter__(self) -> typing.Iterator[tuple[Monomial2, Fraction]]:
        yield from self.terms.items()

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, mon: Monomial2 | tuple[int, int]) -> Fraction:
        return self.terms.get(Monomial2(*mon), Fraction(0))

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(mon.degree for mon in self.terms)

    def is_homogeneous(self) -> bool:
        return len({mon.degree for mon in self.terms}) <= 1

    def homogeneous_part(self, d: "Degree") -> "Poly2":
        return Poly2((mon, c) for mon, c in self.terms.items() if mon.degree == d)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly2.constant(other)
        if not isinstance(other, Poly2):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self.terms.items()))
        return self._hash

    # --------
    # Arithmetic
    # --------

    def __add__(self, other: "Poly2 | Coefficient") -> "Poly2":
        if isinstance(other, (int, Fraction)):
            other = Poly2.constant(other)
        if not isinstance(other, Poly2):
            return NotImplemented
        return Poly2(list(self.terms.items()) + list(other.terms.items()))

    __radd__ = __add__

    def __neg__(self) -> "Poly2":
        return Poly2((mon, -c) for mon, c in self.terms.items())

    def __sub__(self, other: "Poly2 | Coefficient") -> "Poly2":
        if isinstance(other, (int, Fraction)):
            other = Poly2.constant(other)
        if not isinstance(other, Poly2):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: "Coefficient") -> "Poly2":
        return Poly2.constant(other) - self

    def __mul__(self, other: "Poly2 | Coefficient") -> "Poly2":
        if isinstance(other, (int, Fraction)):
            return Poly2((mon, c * other) for mon, c in self.terms.items())
        if not isinstance(other, Poly2):
            return NotImplemented
        return Poly2(
            (a * b, ca * cb)
            for a, ca in self.terms.items()
            for b, cb in other.terms.items()
        )

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly2":
        if k < 0:
            raise ValueError("Only non-negative powers are allowed.")
        result = Poly2.constant(1)
        for _ in range(k):
            result = result * self
        return result

    def shift(self, mon: Monomial2) -> "Poly2":
        """Multiply by a monomial."""
        return Poly2((m * mon, c) for m, c in self.terms.items())

    # --------
    # Text form
    # --------

    def __str__(self) -> str:
        if not self.terms:
            return "0"

        parts: list[str] = []
        for mon, c in self.terms.items():
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if mon.degree == 0:
                body = str(mag)
            elif mag == 1:
                body = str(mon)
            else:
                body = f"{mag}*{mon}"
            parts.append(f"{sign} {body}")

        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self) -> str:
        return f"Poly2({str(self)!r})"


X1 = Poly2.monomial(1, 0)
X2 = Poly2.monomial(0, 1)
ONE = Poly2.constant(1)


type Summand = tuple[Fraction, Poly2, Poly2]


class TensorElem:
    """Finite sum of pure tensors, sum_i c_i * p_i (x) q_i.

    Summands are stored as given; `canonical()` expands them into
    monomial tensors, which merges proportional summands and removes
    cancellations. Equality compares canonical forms.

    """
    __slots__ = ["summands", "_canon"]

    def __init__(self, summands: "typing.Iterable[tuple[Coefficient, Poly2, Poly2]]" = ()):
        self.summands: tuple[Summand, ...] = tuple(
            (Fraction(c), p, q) for c, p, q in summands if c != 0 and p and q
        )
        self._canon: "dict[tuple[Monomial2, Monomial2], Fraction] | None" = None

    @classmethod
    def pure(cls, left: Poly2, right: Poly2, coef: Coefficient = 1) -> "TensorElem":
        return cls([(coef, left, right)])

    @classmethod
    def from_coefficients(
        cls,
        coefficients: "typing.Mapping[tuple[Monomial2, Monomial2], Coefficient]",
    ) -> "TensorElem":
        return cls(
            (c, Poly2.monomial(*a), Poly2.monomial(*b))
            for (a, b), c in coefficients.items()
        )

    def coefficients(self) -> dict[tuple[Monomial2, Monomial2], Fraction]:
        """Coefficient of every monomial tensor x^a (x) x^b, zeros dropped."""
        if self._canon is None:
            acc: dict[tuple[Monomial2, Monomial2], Fraction] = {}
            for c, p, q in self.summands:
                for a, ca in p:
                    for b, cb in q:
                        key = (a, b)
                        acc[key] = acc.get(key, Fraction(0)) + c * ca * cb
            ordered = sorted(acc, key=lambda ab: (graded_key(ab[0]), graded_key(ab[1])))
            self._canon = {key: acc[key] for key in ordered if acc[key] != 0}
        return self._canon

    def coefficient(self, left: Monomial2 | tuple[int, int], right: Monomial2 | tuple[int, int]) -> Fraction:
        return self.coefficients().get((Monomial2(*left), Monomial2(*right)), Fraction(0))

    def canonical(self) -> "TensorElem":
        return TensorElem.from_coefficients(self.coefficients())

    def __bool__(self) -> bool:
        return bool(self.coefficients())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorElem):
            return NotImplemented
        return self.coefficients() == other.coefficients()

    def __hash__(self) -> int:
        return hash(tuple(self.coefficients().items()))

    @property
    def degree(self) -> int | None:
        """Total degree d if homogeneous (None otherwise, -1 for zero)."""
        degrees = {a.degree + b.degree for a, b in self.coefficients()}
        if not degrees:
            return -1
        if len(degrees) > 1:
            return None
        return degrees.pop()

    def is_homogeneous(self) -> bool:
        return self.degree is not None

    def __add__(self, other: "TensorElem") -> "TensorElem":
        if not isinstance(other, TensorElem):
            return NotImplemented
        return TensorElem(self.summands + other.summands)

    def __neg__(self) -> "TensorElem":
        return TensorElem((-c, p, q) for c, p, q in self.summands)

    def __sub__(self, other: "TensorElem") -> "TensorElem":
        return self + (-other)

    def __mul__(self, scalar: Coefficient) -> "TensorElem":
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        return TensorElem((c * scalar, p, q) for c, p, q in self.summands)

    __rmul__ = __mul__

    def swap(self) -> "TensorElem":
        """Exchange the two tensor factors."""
        return TensorElem((c, q, p) for c, p, q in self.summands)

    def symmetric_part(self) -> "TensorElem":
        return (self + self.swap()) * Fraction(1, 2)

    def antisymmetric_part(self) -> "TensorElem":
        return (self - self.swap()) * Fraction(1, 2)

    def coefficient_matrix(self) -> tuple[list[Monomial2], list[Monomial2], list[list[Fraction]]]:
        """Left monomials, right monomials and the matrix between them."""
        coefs = self.coefficients()
        lefts = sorted({a for a, _ in coefs}, key=graded_key)
        rights = sorted({b for _, b in coefs}, key=graded_key)
        col = {b: j for j, b in enumerate(rights)}
        rows = [[Fraction(0)] * len(rights) for _ in lefts]
        for i, a in enumerate(lefts):
            for b in rights:
                rows[i][col[b]] = coefs.get((a, b), Fraction(0))
        return lefts, rights, rows

    def rank(self) -> int:
        """Tensor rank: the minimal number of pure tensors summing to self."""
        _, _, rows = self.coefficient_matrix()
        return bareiss_rank(rows)

    def __str__(self) -> str:
        coefs = self.coefficients()
        if not coefs:
            return "0"
        parts = []
        for (a, b), c in coefs.items():
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = f"{a} (x) {b}" if mag == 1 else f"{mag}*{a} (x) {b}"
            parts.append(f"{sign} {body}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self) -> str:
        return f"TensorElem({str(self)!r})"

"""Coefficient series from the non-vanishing argument for Wendl's map.

For parities (alpha, beta) the series of a degree-d element B is

    S(m) = sum_l T_l * At(m, l),
    At(m, l) = 1/(2*E*(E+1)) + 1/(2*F*(F+1)),

with E = m + l + 1 - alpha, F = m - l + 1 + d - beta and T_l the
coefficient of x1^(l-alpha)*x2^alpha (x) x1^(d-l-beta)*x2^beta in B.
Writing At = P/p with P = E(E+1) + F(F+1) and p = 2E(E+1)F(F+1) turns
S into a polynomial numerator sum_l T_l * q(m, l) over a common
denominator, q(m, l) = P(m, l) * prod_{k != l} p(m, k).

The reflection l -> d + alpha - beta - l swaps E and F, so At and q are
unchanged by it and only the merged coefficients T_l + T_l' matter.

"""
import logging
import typing
from fractions import Fraction

from mtc.exactalg.linalg import bareiss_rank
from mtc.exactalg.poly import X1, Monomial2, Poly2, TensorElem

if typing.TYPE_CHECKING:
    from mtc.petri_wendl.petri import PetriKernelElement
    from mtc.types import Degree, Parity

logger = logging.getLogger(__name__)

PARITIES: tuple[tuple[int, int], ...] = ((0, 0), (0, 1), (1, 0), (1, 1))


def _shifts(d: "Degree", alpha: "Parity", beta: "Parity") -> tuple[int, int]:
    if alpha not in (0, 1) or beta not in (0, 1):
        raise ValueError(f"Parities must be 0 or 1, got ({alpha}, {beta}).")
    return 1 - alpha, 1 + d - beta


def effective_range(d: "Degree", alpha: "Parity", beta: "Parity") -> range:
    """The l for which both monomials of the family exist."""
    return range(alpha, d - beta + 1)


def mirror_index(d: "Degree", alpha: "Parity", beta: "Parity", l: int) -> int:
    return d + alpha - beta - l


def p_poly(d: "Degree", alpha: "Parity", beta: "Parity", m: int, l: int) -> int:
    e, f = _shifts(d, alpha, beta)
    E, F = m + l + e, m - l + f
    return 2 * (E + 1) * E * (F + 1) * F


def big_p_poly(d: "Degree", alpha: "Parity", beta: "Parity", m: int, l: int) -> int:
    e, f = _shifts(d, alpha, beta)
    E, F = m + l + e, m - l + f
    return E * (E + 1) + F * (F + 1)


def completed_square(d: "Degree", alpha: "Parity", beta: "Parity", m: int, l: int) -> Fraction:
    """P(m, l) as 2(m + (e+f+1)/2)^2 + 2(l + (e-f)/2)^2 - 1/2."""
    e, f = _shifts(d, alpha, beta)
    return (
        2 * (m + Fraction(e + f + 1, 2)) ** 2
        + 2 * (l + Fraction(e - f, 2)) ** 2
        - Fraction(1, 2)
    )


def a_tilde(d: "Degree", alpha: "Parity", beta: "Parity", m: int, l: int) -> Fraction:
    return Fraction(big_p_poly(d, alpha, beta, m, l), p_poly(d, alpha, beta, m, l))


class CoefficientSeries:
    """The series S(m) of one parity pair, as exact data.

    Arguments:
        weights: T_l for every l in the effective range.

    """
    __slots__ = ["degree", "alpha", "beta", "weights"]

    def __init__(self, degree: "Degree", alpha: "Parity", beta: "Parity", weights: dict[int, Fraction]):
        self.degree = degree
        self.alpha = alpha
        self.beta = beta
        self.weights = weights

    def __call__(self, m: int) -> Fraction:
        if m < 0:
            raise ValueError(f"The series is evaluated at m >= 0, got {m}.")
        return sum(
            (w * a_tilde(self.degree, self.alpha, self.beta, m, l) for l, w in self.weights.items()),
            Fraction(0),
        )

    @property
    def present(self) -> bool:
        """Whether B has any coefficient in this parity family."""
        return any(w != 0 for w in self.weights.values())

    def merged_weights(self) -> dict[int, Fraction]:
        """T_l + T_l' keyed by the smaller of each mirror pair."""
        merged: dict[int, Fraction] = {}
        for l, w in self.weights.items():
            key = min(l, mirror_index(self.degree, self.alpha, self.beta, l))
            merged[key] = merged.get(key, Fraction(0)) + w
        return merged

    def is_identically_zero(self) -> bool:
        return all(w == 0 for w in self.merged_weights().values())

    def numerator(self) -> Poly2:
        """sum_l T_l * q(m, l) as a polynomial in m (written in x1)."""
        qs = q_polynomials(self.degree, self.alpha, self.beta)
        result = Poly2.zero()
        for l, w in self.weights.items():
            result = result + qs[l] * w
        return result

    def values(self, m_max: int) -> list[Fraction]:
        return [self(m) for m in range(m_max + 1)]

    def zero_count(self, m_max: int) -> int:
        return sum(1 for v in self.values(m_max) if v == 0)


def _kernel_tensor(B: "PetriKernelElement | TensorElem") -> TensorElem:
    return B if isinstance(B, TensorElem) else B.tensor


def coefficient_series(B: "PetriKernelElement | TensorElem", alpha: "Parity", beta: "Parity") -> CoefficientSeries:
    tensor = _kernel_tensor(B)
    d = tensor.degree
    if d is None or d < 0:
        raise ValueError("The coefficient series needs a non-zero homogeneous B.")
    _shifts(d, alpha, beta)

    weights = {
        l: tensor.coefficient(Monomial2(l - alpha, alpha), Monomial2(d - l - beta, beta))
        for l in effective_range(d, alpha, beta)
    }
    return CoefficientSeries(d, alpha, beta, weights)


def select_parities(B: "PetriKernelElement | TensorElem") -> tuple[int, int] | None:
    """The smallest alpha (and beta) whose family has a non-zero coefficient.

    alpha is the least x2-power of a left monomial among the families.
    beta is the least x2-power of a right monomial among the families
    with that alpha, not over all of B: when B is a sum of products
    l-by-l the two minima are independent and agree, but for a general
    tensor such as x1 (x) x2 + x2 (x) x1 the independent minima name
    (0, 0), a family in which B has no coefficient. None if B has no
    coefficient in any family.

    """
    tensor = _kernel_tensor(B)
    present = [
        (alpha, beta) for alpha, beta in PARITIES
        if coefficient_series(tensor, alpha, beta).present
    ]
    if not present:
        return None
    alpha = min(a for a, _ in present)
    beta = min(b for a, b in present if a == alpha)
    return alpha, beta


def series_report(B: "PetriKernelElement | TensorElem") -> dict[str, typing.Any]:
    """Every parity family of B: presence, vanishing, values and zero count.

    A family that is not identically zero is within bound when it has at
    most 4d + 2 zeros on 0..m_max. `passed` holds when every family is.

    """
    tensor = _kernel_tensor(B)
    d = tensor.degree
    if d is None or d < 0:
        raise ValueError("The coefficient series needs a non-zero homogeneous B.")
    m_max = 4 * d + 10
    zero_bound = 4 * d + 2

    families = []
    for alpha, beta in PARITIES:
        series = coefficient_series(tensor, alpha, beta)
        values = series.values(m_max)
        zeros = sum(1 for v in values if v == 0)
        identically_zero = series.is_identically_zero()
        within_bound = identically_zero or zeros <= zero_bound
        if not within_bound:
            logger.warning("Series (%s, %s) of %s has %s zeros, more than %s", alpha, beta, tensor, zeros, zero_bound)
        families.append({
            "alpha": alpha,
            "beta": beta,
            "present": series.present,
            "identically_zero": identically_zero,
            "values": [str(v) for v in values],
            "zero_count": zeros,
            "within_bound": within_bound,
        })
        logger.debug("Series (%s, %s) of %s: %s zeros", alpha, beta, tensor, zeros)

    selected = select_parities(tensor)
    return {
        "degree": d,
        "element": str(tensor),
        "m_max": m_max,
        "zero_bound": zero_bound,
        "families": families,
        "passed": all(family["within_bound"] for family in families),
        "selected": list(selected) if selected is not None else None,
    }


def q_polynomials(d: "Degree", alpha: "Parity" = 0, beta: "Parity" = 0) -> dict[int, Poly2]:
    """q(m, l) for every l in the effective range, as polynomials in m."""
    e, f = _shifts(d, alpha, beta)
    ls = list(effective_range(d, alpha, beta))

    def big_p(l: int) -> Poly2:
        E = X1 + (l + e)
        F = X1 + (f - l)
        return E * (E + 1) + F * (F + 1)

    def small_p(l: int) -> Poly2:
        E = X1 + (l + e)
        F = X1 + (f - l)
        return E * (E + 1) * F * (F + 1) * 2

    qs = {}
    for l in ls:
        q = big_p(l)
        for k in ls:
            if k != l:
                q = q * small_p(k)
        qs[l] = q
    return qs


def q_independence_check(
    d: "Degree",
    alpha: "Parity" = 0,
    beta: "Parity" = 0,
    merge_mirror: bool = False,
) -> bool:
    """Whether the q(m, l) are linearly independent over the rationals.

    Without `merge_mirror` every l of the effective range is one row, so
    the mirror pairs l, d + alpha - beta - l coincide as soon as there are
    any: for alpha = beta = 0 the raw family is dependent for every d >= 1
    and this returns False. With it, one row per mirror pair is kept, and
    that merged family is the one independent for every d tested (0..6).
    Only merged coefficients enter the series, so the merged family is the
    one that bounds its zeros.

    """
    qs = q_polynomials(d, alpha, beta)
    ls = sorted(qs)
    if merge_mirror:
        ls = [l for l in ls if l <= mirror_index(d, alpha, beta, l)]
    if not ls:
        return True

    top = max(qs[l].degree for l in ls)
    rows = [[qs[l].coefficient((k, 0)) for k in range(top + 1)] for l in ls]
    rank = bareiss_rank(rows)
    logger.debug("q family d=%s (%s, %s) merged=%s: rank %s of %s", d, alpha, beta, merge_mirror, rank, len(ls))
    return rank == len(ls)

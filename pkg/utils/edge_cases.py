"""
Parameter screening
Handles non prime-power orders, even characteristic, invalid divisors and
field sizes beyond the table cap
"""
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from sympy import divisors, factorint

from config import settings
from errors import ParameterError


@dataclass
class ScreenResult:
    """Result of screening a (q, m, g) request"""
    is_valid: bool
    issue: Optional[str] = None
    message: Optional[str] = None
    suggestions: List[int] = field(default_factory=list)


def prime_power(q: int) -> Optional[Tuple[int, int]]:
    """(p, t) with q = p^t, or None"""
    if q < 2:
        return None
    factors = factorint(q)
    if len(factors) != 1:
        return None
    (p, t), = factors.items()
    return int(p), int(t)


def check_odd_prime_power(q: int) -> Tuple[int, int]:
    decomposed = prime_power(q)
    if decomposed is None:
        raise ParameterError(f"q = {q} is not a prime power")
    if decomposed[0] == 2:
        raise ParameterError(f"q = {q} is even; an odd prime power is required")
    return decomposed


def odd_prime_powers(limit: int) -> List[int]:
    return [q for q in range(3, limit + 1) if (pp := prime_power(q)) and pp[0] != 2]


def valid_divisors(q: int) -> List[int]:
    """All divisors g of q - 1, ascending"""
    return [int(d) for d in divisors(q - 1)]


def check_divisor(q: int, g: int) -> None:
    if g < 1 or (q - 1) % g:
        raise ParameterError(f"g = {g} does not divide q - 1 = {q - 1}")


def bgw_order(q: int, m: int) -> int:
    """v = (q^(m+1) - 1)/(q - 1)"""
    return (q ** (m + 1) - 1) // (q - 1)


class ParameterScreen:
    """
    Screens construction requests before any field is built
    """

    def __init__(self, field_cap: Optional[int] = None):
        self.field_cap = field_cap or settings.field_cap

    def screen(self, q: int, m: int, g: Optional[int] = None) -> ScreenResult:
        """
        Check q, m (and g when given)

        Returns:
            ScreenResult; invalid divisors come with the valid ones as suggestions
        """
        decomposed = prime_power(q)
        if decomposed is None:
            return ScreenResult(False, "not_prime_power", f"q = {q} is not a prime power")
        if decomposed[0] == 2:
            return ScreenResult(False, "even_characteristic", f"q = {q} has characteristic 2")
        if m < 1:
            return ScreenResult(False, "bad_exponent", f"m = {m} must be >= 1")
        if q ** (m + 1) > self.field_cap:
            return ScreenResult(
                False, "field_too_large",
                f"GF({q}^{m + 1}) exceeds the field cap {self.field_cap}",
            )
        if g is not None and (g < 1 or (q - 1) % g):
            return ScreenResult(
                False, "bad_divisor",
                f"g = {g} does not divide q - 1 = {q - 1}",
                suggestions=valid_divisors(q),
            )
        return ScreenResult(True)

    def require(self, q: int, m: int, g: Optional[int] = None) -> None:
        result = self.screen(q, m, g)
        if not result.is_valid:
            hint = f"; valid g: {result.suggestions}" if result.suggestions else ""
            raise ParameterError(result.message + hint)


_screen: Optional[ParameterScreen] = None


def get_parameter_screen() -> ParameterScreen:
    """Get singleton parameter screen instance"""
    global _screen
    if _screen is None:
        _screen = ParameterScreen()
    return _screen

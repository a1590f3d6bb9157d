"""Extended Bessel-kernel special function library."""

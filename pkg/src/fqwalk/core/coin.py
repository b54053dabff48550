"""
The 2x2 coin shared by every vertex of the blow-up graph.

At a blow-up vertex the coin maps (incoming island, incoming bridge) to
(outgoing island, outgoing bridge):

    [out_island]   [a b] [in_island]
    [out_bridge] = [c d] [in_bridge]

Admissible coins are unitary with real ``d`` and no zero entry; then
``omega = -det H`` is a unit complex number and ``a = -omega * d``.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from typing import Dict, Sequence

import numpy as np
from numpy.typing import NDArray

from ..config import UNITARY_TOL
from ..errors import CoinError

_EXP_FORM = re.compile(
    r"^exp\(\s*i\s*\*\s*pi\s*(?:\*\s*([+-]?\d+(?:\.\d*)?)\s*)?(?:/\s*(\d+)\s*)?\)$"
)
_DEG_FORM = re.compile(r"^([+-]?\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)\s*deg$")

# Grids shared with the property tests.
OMEGA_GRID = 24
PHI_GRID = 24


@dataclass(frozen=True)
class Coin:
    a: complex
    b: complex
    c: complex
    d: float

    @property
    def omega(self) -> complex:
        return -(self.a * self.d - self.b * self.c)

    @property
    def matrix(self) -> NDArray[np.complex128]:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=np.complex128)

    def __str__(self) -> str:
        w = self.omega
        return f"Coin(d={self.d:.12g}, omega={w.real:.12g}{w.imag:+.12g}i)"


def make_coin(d: float, omega: complex, phi: float = 0.0) -> Coin:
    """
    Build the admissible coin with real ``d``, given ``omega`` and phase ``phi``.

    Parameters
    ----------
    d : float
        Lower-right entry, ``0 < |d| < 1``.
    omega : complex
        Unit complex number, ``-det H``.
    phi : float
        Phase carried by ``b`` (and conjugately by ``c``).

    Raises
    ------
    CoinError
        If ``d`` is outside (-1, 0) U (0, 1) or ``|omega| != 1``.
    """
    d = float(d)
    omega = complex(omega)
    if not (UNITARY_TOL < abs(d) < 1.0 - UNITARY_TOL):
        raise CoinError(f"need 0 < |d| < 1 so that abcd != 0, got d={d}")
    if abs(abs(omega) - 1.0) > UNITARY_TOL:
        raise CoinError(f"|omega| must be 1, got {abs(omega)!r}")
    s = math.sqrt(1.0 - d * d)
    return Coin(
        a=-omega * d,
        b=cmath.exp(1j * phi) * s,
        c=omega * cmath.exp(-1j * phi) * s,
        d=d,
    )


def validate(entries: Sequence[complex]) -> Coin:
    """Accept four entries (a, b, c, d) of an admissible coin or say what fails."""
    if len(entries) != 4:
        raise CoinError(f"a coin has 4 entries, got {len(entries)}")
    a, b, c, d = (complex(x) for x in entries)
    for name, x in zip("abcd", (a, b, c, d)):
        if abs(x) <= UNITARY_TOL:
            raise CoinError(f"zero entry: {name} = {x}")
    h = np.array([[a, b], [c, d]], dtype=np.complex128)
    err = np.abs(h @ h.conj().T - np.eye(2)).max()
    if err > UNITARY_TOL:
        raise CoinError(f"non-unitary: max |H H* - I| = {err:.3e}")
    if abs(d.imag) > UNITARY_TOL:
        raise CoinError(f"d not real: d = {d}")
    coin = Coin(a=a, b=b, c=c, d=d.real)
    if abs(coin.a + coin.omega * coin.d) > 10 * UNITARY_TOL:
        raise CoinError("a != -omega * d")
    return coin


def random_coin(rng: np.random.Generator) -> Coin:
    """Admissible coin with d in +-(0.05, 0.95) and omega, phi on the grids."""
    d = rng.uniform(0.05, 0.95) * rng.choice([-1.0, 1.0])
    omega = cmath.exp(2j * math.pi * rng.integers(OMEGA_GRID) / OMEGA_GRID)
    phi = 2 * math.pi * rng.integers(PHI_GRID) / PHI_GRID
    return make_coin(d, omega, phi)


def omega_is_one(coin: Coin, tol: float = 1e-10) -> bool:
    return abs(coin.omega - 1.0) < tol


def parse_complex(text: str) -> complex:
    """Complex literal in ``x+yi`` form (``j`` also accepted)."""
    s = text.strip().replace(" ", "")
    if s.endswith(("i", "j")):
        s = s[:-1]
        if s == "" or s[-1] in "+-":
            s += "1"
        s += "j"
    try:
        return complex(s)
    except ValueError:
        raise CoinError(f"not a complex number: {text!r}") from None


def parse_omega(text: str) -> complex:
    """``exp(i*pi*p/q)``, ``<x>deg`` or a unit complex literal."""
    s = text.strip()
    m = _EXP_FORM.match(s)
    if m:
        p = float(m.group(1)) if m.group(1) else 1.0
        q = float(m.group(2)) if m.group(2) else 1.0
        return cmath.exp(1j * math.pi * p / q)
    m = _DEG_FORM.match(s)
    if m:
        return cmath.exp(1j * math.radians(float(m.group(1))))
    return parse_complex(s)


def parse_coin_spec(text: str) -> Coin:
    """
    ``d=<real>,omega=<...>,phi=<real>`` (omega and phi optional, default 1 and
    0) or ``random:<seed>``.
    """
    s = text.strip()
    if s.startswith("random:"):
        try:
            seed = int(s.split(":", 1)[1])
        except ValueError:
            raise CoinError(f"bad random coin seed in {text!r}") from None
        return random_coin(np.random.default_rng(seed))

    fields: Dict[str, str] = {}
    for part in s.split(","):
        if not part.strip():
            continue
        key, sep, value = part.partition("=")
        key = key.strip().lower()
        if not sep or key not in ("d", "omega", "phi"):
            raise CoinError(f"bad coin field {part!r}; expected d=, omega=, phi=")
        fields[key] = value.strip()
    if "d" not in fields:
        raise CoinError("coin spec needs d=<real>")
    try:
        d = float(fields["d"])
        phi = float(fields.get("phi", "0"))
    except ValueError:
        raise CoinError(f"bad number in coin spec {text!r}") from None
    omega = parse_omega(fields.get("omega", "1"))
    return make_coin(d, omega, phi)


def parse_coin_matrix(text: str) -> Coin:
    """Raw ``a,b,c,d`` entries."""
    parts = [p for p in text.split(",") if p.strip()]
    return validate([parse_complex(p) for p in parts])

from __future__ import annotations

import random

import pytest

from effkohn.groebner import Ideal, buchberger
from effkohn.oracle import member_linalg
from effkohn.poly import Polynomial, Ring, monomials_of_degree, parse_poly

ZW = Ring(["z", "w"])

# filled by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def P(text: str, ring: Ring = ZW) -> Polynomial:
    return parse_poly(text, ring)


def family(M: int, N: int, K: int) -> list[Polynomial]:
    """(z^M, w^N + w z^K)"""
    return [P(f"z^{M}"), P(f"w^{N} + w*z^{K}")]


def random_poly(rng: random.Random, ring: Ring, max_degree: int = 4, terms: int = 3, min_degree: int = 1) -> Polynomial:
    p = ring.zero()
    while p.is_zero():
        for _ in range(rng.randint(1, terms)):
            deg = rng.randint(min_degree, max_degree)
            mon = rng.choice(monomials_of_degree(ring.nvars, deg))
            p = p + ring.monomial(mon, rng.choice([-3, -2, -1, 1, 2, 3]))
    return p


def random_finite_type(rng: random.Random, nvars: int, max_degree: int = 4) -> list[Polynomial]:
    """Pure powers plus random perturbations: always finite type at the origin."""
    ring = ZW if nvars == 2 else Ring([f"z{k + 1}" for k in range(nvars)])
    gens = []
    for k in range(nvars):
        mon = [0] * nvars
        mon[k] = rng.randint(1, max_degree)
        g = ring.monomial(mon)
        # only strictly higher terms, so the pure power stays the initial form
        if mon[k] < max_degree and rng.random() < 0.7:
            g = g + random_poly(rng, ring, max_degree, 2, min_degree=mon[k] + 1)
        gens.append(g)
    if rng.random() < 0.5:
        gens.append(random_poly(rng, ring, max_degree, 2, min_degree=2))
    return gens


def validity_cap(gens, probe_degree, limit=24):
    """A cap at which truncated membership equals membership for probes of the given degree.

    Once every reduced Groebner basis element has a representation inside the
    truncation, division by the basis (a degree-compatible order) lifts to a
    representation of degree at most probe_degree + that cap.
    """
    basis = buchberger(Ideal(gens))
    for d in range(max(g.total_degree() for g in gens + basis), limit + 1):
        if all(member_linalg(gens, g, d) for g in basis):
            return d + probe_degree
    return None


def random_pairs(seed, count):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        nv = rng.choice([2, 3])
        ring = ZW if nv == 2 else Ring(["x", "y", "z"])
        gens = [random_poly(rng, ring, 3, 3) for _ in range(rng.randint(1, nv))]
        if rng.random() < 0.5:
            probe = sum((random_poly(rng, ring, 2, 2, min_degree=0) * g for g in gens), ring.zero())
            if rng.random() < 0.3:
                probe = probe + ring.monomial([1] + [0] * (nv - 1))
        else:
            probe = random_poly(rng, ring, 4, 3)
        if probe.is_zero():
            continue
        cap = validity_cap(gens, probe.total_degree())
        if cap is None or cap > 14:
            continue
        out.append((gens, probe, cap))
    return out


@pytest.fixture
def rng():
    return random.Random(20240601)

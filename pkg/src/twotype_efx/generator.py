"""Seeded instance generation."""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass
from fractions import Fraction

from .model import ALPHA, BETA, Instance

DISTRIBUTIONS = ("uniform_int", "uniform_rational", "correlated")


@dataclass(frozen=True)
class GenSpec:
    n_alpha: int = 2
    n_beta: int = 2
    m: int = 6
    dist: str = "uniform_int"
    lo: int = 0
    hi: int = 10
    den_max: int = 6  # uniform_rational only
    rho: Fraction = Fraction(1, 2)  # correlated only: weight of v_alpha in v_beta
    seed: int = 0
    shuffle_agents: bool = False

    def errors(self) -> list[str]:
        errs = []
        if self.n_alpha < 0 or self.n_beta < 0:
            errs.append("agent counts must be nonnegative")
        if self.n_alpha + self.n_beta < 1:
            errs.append("need at least one agent")
        if self.m < 1:
            errs.append("m must be positive")
        if self.dist not in DISTRIBUTIONS:
            errs.append(f"unknown distribution {self.dist!r}")
        if not 0 <= self.lo <= self.hi:
            errs.append("need 0 <= lo <= hi")
        if self.den_max < 1:
            errs.append("den_max must be positive")
        if not 0 <= Fraction(self.rho) <= 1:
            errs.append("rho must lie in [0, 1]")
        if not 0 <= self.seed < 2**64:
            errs.append("seed must be a 64-bit unsigned integer")
        return errs

    def to_dict(self) -> dict:
        d = asdict(self)
        d["rho"] = str(Fraction(self.rho))
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "GenSpec":
        d = dict(d)
        if "rho" in d:
            d["rho"] = Fraction(d["rho"])
        return cls(**d)


def _uniform_int(rng: random.Random, spec: GenSpec) -> list[Fraction]:
    return [Fraction(rng.randint(spec.lo, spec.hi)) for _ in range(spec.m)]


def _uniform_rational(rng: random.Random, spec: GenSpec) -> list[Fraction]:
    out = []
    for _ in range(spec.m):
        q = rng.randint(1, spec.den_max)
        out.append(Fraction(rng.randint(spec.lo * q, spec.hi * q), q))
    return out


def generate(spec: GenSpec) -> Instance:
    errs = spec.errors()
    if errs:
        raise ValueError("; ".join(errs))
    rng = random.Random(spec.seed)
    if spec.dist == "uniform_rational":
        va, vb = _uniform_rational(rng, spec), _uniform_rational(rng, spec)
    else:
        va, vb = _uniform_int(rng, spec), _uniform_int(rng, spec)
        if spec.dist == "correlated":
            rho = Fraction(spec.rho)
            vb = [rho * a + (1 - rho) * b for a, b in zip(va, vb)]
    types = [ALPHA] * spec.n_alpha + [BETA] * spec.n_beta
    if spec.shuffle_agents:
        rng.shuffle(types)
    return Instance(spec.m, tuple(types), tuple(va), tuple(vb))

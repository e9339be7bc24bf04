"""Scenario configuration: network shape, weak-measurement parameters,
source noise and observer selections.

All types are frozen dataclasses that validate on construction, so any
instance that exists is physical.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

PHYS_TOL = 1e-12


class ConfigError(ValueError):
    """Invalid or unphysical scenario parameters."""


def _check_unit(name: str, value: float) -> None:
    if not (0.0 <= value <= 1.0) or math.isnan(value):
        raise ConfigError(f"{name}={value!r} outside [0, 1]")


def optimal_f(g: float) -> float:
    """Quality factor on the optimal pointer trade-off ``F**2 + G**2 = 1``."""
    _check_unit("g", g)
    return math.sqrt(1.0 - g * g)


@dataclass(frozen=True)
class WeakParams:
    """Quality (``f``) and precision (``g``) factors, indexed ``[branch][stage]``.

    Stage ``t`` runs over the weakly measuring Alices ``1..m-1`` of a branch.
    """

    f: tuple[tuple[float, ...], ...]
    g: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        f = tuple(tuple(float(x) for x in row) for row in self.f)
        g = tuple(tuple(float(x) for x in row) for row in self.g)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "g", g)
        if len(f) != len(g) or any(len(a) != len(b) for a, b in zip(f, g)):
            raise ConfigError("f and g tables must have identical shape")
        for i, (frow, grow) in enumerate(zip(f, g)):
            for t, (fv, gv) in enumerate(zip(frow, grow)):
                _check_unit(f"F[{i + 1}][{t + 1}]", fv)
                _check_unit(f"G[{i + 1}][{t + 1}]", gv)
                if fv * fv + gv * gv > 1.0 + PHYS_TOL:
                    raise ConfigError(
                        f"unphysical pointer at branch {i + 1}, stage {t + 1}: "
                        f"F^2 + G^2 = {fv * fv + gv * gv:.12g} > 1"
                    )

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.f), (len(self.f[0]) if self.f else 0)


@dataclass(frozen=True)
class NetworkConfig:
    """An ``(n, m, k)`` star network with per-observer weak parameters."""

    n: int
    m: int
    k: int
    weak: WeakParams

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError(f"n={self.n} must be >= 1")
        if self.m < 1:
            raise ConfigError(f"m={self.m} must be >= 1")
        if self.k < 2:
            raise ConfigError(f"k={self.k} must be >= 2")
        rows = len(self.weak.f)
        if rows != self.n or any(len(r) != self.m - 1 for r in self.weak.f):
            raise ConfigError(
                f"weak parameters must be {self.n} x {self.m - 1}, "
                f"got {rows} rows of lengths {[len(r) for r in self.weak.f]}"
            )

    def branch_f(self, i: int) -> tuple[float, ...]:
        """Quality factors of branch ``i`` (0-based)."""
        return self.weak.f[i]

    def branch_g(self, i: int) -> tuple[float, ...]:
        return self.weak.g[i]


@dataclass(frozen=True)
class ObserverSelection:
    """One Alice per branch, 1-based: ``j[i]`` is the position in branch ``i``."""

    j: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "j", tuple(int(x) for x in self.j))
        if not self.j:
            raise ConfigError("empty observer selection")

    def validate(self, n: int, m: int) -> "ObserverSelection":
        if len(self.j) != n:
            raise ConfigError(f"selection {self.label} has {len(self.j)} entries, expected n={n}")
        if any(not 1 <= x <= m for x in self.j):
            raise ConfigError(f"selection {self.label} has entries outside 1..{m}")
        return self

    @property
    def label(self) -> str:
        return "".join(str(x) for x in self.j) if all(x < 10 for x in self.j) else "-".join(map(str, self.j))

    @classmethod
    def parse(cls, text: str) -> "ObserverSelection":
        """Parse ``"1,2"``, ``"12"`` or ``"1-2"`` into a selection."""
        text = text.strip()
        try:
            if "," in text:
                parts = [int(p) for p in text.split(",")]
            elif "-" in text:
                parts = [int(p) for p in text.split("-")]
            else:
                parts = [int(c) for c in text]
        except ValueError:
            raise ConfigError(f"cannot parse observer selection {text!r}") from None
        return cls(tuple(parts))

    def __iter__(self) -> Iterator[int]:
        return iter(self.j)

    def __len__(self) -> int:
        return len(self.j)


def all_selections(n: int, m: int) -> list[ObserverSelection]:
    """Every tuple in ``{1..m}**n`` in lexicographic order."""
    return [ObserverSelection(j) for j in itertools.product(range(1, m + 1), repeat=n)]


@dataclass(frozen=True)
class NoiseParams:
    """Per-source visibility ``v`` and colored-noise fraction ``r``."""

    v: tuple[float, ...]
    r: tuple[float, ...]

    def __post_init__(self):
        v = tuple(float(x) for x in self.v)
        r = tuple(float(x) for x in self.r)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "r", r)
        if len(v) != len(r):
            raise ConfigError("v and r must have the same length")
        for i, (vi, ri) in enumerate(zip(v, r)):
            _check_unit(f"v[{i + 1}]", vi)
            _check_unit(f"r[{i + 1}]", ri)

    @classmethod
    def shared(cls, n: int, v: float, r: float) -> "NoiseParams":
        return cls((v,) * n, (r,) * n)

    @classmethod
    def noiseless(cls, n: int) -> "NoiseParams":
        return cls.shared(n, 1.0, 0.0)

    def validate(self, n: int) -> "NoiseParams":
        if len(self.v) != n:
            raise ConfigError(f"noise given for {len(self.v)} sources, expected n={n}")
        return self


def symmetric_config(n: int, m: int, k: int, g_list: Sequence[float]) -> NetworkConfig:
    """Same weak parameters in every branch, on the optimal trade-off.

    ``g_list[t]`` is the precision factor of the ``t``-th weak stage; the
    matching quality factor is ``optimal_f(g_list[t])``.
    """
    g_list = [float(g) for g in g_list]
    if len(g_list) != m - 1:
        raise ConfigError(f"need {m - 1} precision factors for m={m}, got {len(g_list)}")
    f_list = [optimal_f(g) for g in g_list]
    weak = WeakParams(f=(tuple(f_list),) * n, g=(tuple(g_list),) * n)
    return NetworkConfig(n, m, k, weak)


def config_from_tables(
    n: int, m: int, k: int, g_table: Sequence[Sequence[float]], f_table: Sequence[Sequence[float]] | None = None
) -> NetworkConfig:
    """Per-branch parameters; ``f_table`` defaults to the optimal trade-off."""
    if f_table is None:
        f_table = [[optimal_f(g) for g in row] for row in g_table]
    weak = WeakParams(f=tuple(map(tuple, f_table)), g=tuple(map(tuple, g_table)))
    return NetworkConfig(n, m, k, weak)

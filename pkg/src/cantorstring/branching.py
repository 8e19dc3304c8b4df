"""Branching-population view of a model: birth times, martingale, z process.

Every tree node is an individual. An individual with letter j gives birth
to child i at its own birth time plus the offset tau_i = -log(r_i m_i);
the ancestor is born at time 0. The fundamental martingale

    R_0 = 1,
    R_n = 1 + sum_{first n individuals} sum_children e^(-alpha sigma_child)
            - sum_{first n individuals} e^(-alpha sigma),

evaluated at the Malthusian tilt alpha = gamma_r, has mean one for every n
and converges to the random limit W. The z process counts individuals
born after time t to mothers born at or before t.

Labels reuse the per-address hash draws of the tree sampler, so a
population and a sampled tree with the same (model, seed) carry identical
letters at identical addresses.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, NamedTuple, Optional, Sequence, Tuple

from ._rng import Address, LabelSampler
from .ifs import IfsModel, contraction_products, require_valid
from .exponent import solve_recursive_exponent
from .tree import format_address


@dataclass(frozen=True)
class BirthEvent:
    address: Address
    sigma: float
    letter_id: str
    child_offsets: Tuple[float, ...]


class PopulationRun:
    """All individuals born up to the horizon, in birth order.

    Simultaneous births (generic in lattice models) are ordered
    lexicographically by address so traces replay identically. Children
    born beyond the horizon are represented through their mother's
    child_offsets, which is enough to evaluate both R_n and z_t.
    """

    def __init__(self, model: IfsModel, seed: int, t_max: float,
                 events: List[BirthEvent]):
        self.model = model
        self.seed = seed
        self.t_max = t_max
        self.events = events

    def __len__(self) -> int:
        return len(self.events)


def simulate_population(model: IfsModel, t_max: float, seed: int) -> PopulationRun:
    """Materialize every individual with birth time <= t_max; deterministic in seed."""
    if t_max < 0:
        raise ValueError(f"t_max must be >= 0, got {t_max}")
    require_valid(model)
    offsets_per_letter = [tuple(-math.log(q) for q in contraction_products(letter))
                          for letter in model.letters]
    sampler = LabelSampler(model.probs, seed)
    heap: List[Tuple[float, Address]] = [(0.0, ())]
    events: List[BirthEvent] = []
    while heap:
        sigma, address = heapq.heappop(heap)
        letter_index = sampler.letter_at(address)
        offsets = offsets_per_letter[letter_index]
        events.append(BirthEvent(address, sigma, model.letters[letter_index].id, offsets))
        for i, tau in enumerate(offsets, start=1):
            birth = sigma + tau
            if birth <= t_max:
                heapq.heappush(heap, (birth, address + (i,)))
    return PopulationRun(model, seed, t_max, events)


def martingale_increments(run: PopulationRun, alpha: float) -> List[float]:
    """Per-individual increments of R_n, in birth order."""
    out = []
    for event in run.events:
        children = math.fsum(math.exp(-alpha * (event.sigma + tau))
                             for tau in event.child_offsets)
        out.append(children - math.exp(-alpha * event.sigma))
    return out


def martingale_R(run: PopulationRun, n: int, alpha: Optional[float] = None) -> float:
    """R_n over the first n individuals; alpha defaults to gamma_r of the model."""
    if n < 0 or n > len(run.events):
        raise ValueError(f"n must be in 0..{len(run.events)}, got {n}")
    if alpha is None:
        alpha = solve_recursive_exponent(run.model)
    increments = martingale_increments(run, alpha)
    return 1.0 + math.fsum(increments[:n])


def martingale_trace(run: PopulationRun, alpha: Optional[float] = None) -> List[float]:
    """[R_0, R_1, ..., R_N] for the whole materialized population."""
    if alpha is None:
        alpha = solve_recursive_exponent(run.model)
    trace = [1.0]
    acc = 1.0
    for inc in martingale_increments(run, alpha):
        acc += inc
        trace.append(acc)
    return trace


class WEstimate(NamedTuple):
    value: float
    truncation: int


def estimate_W(run: PopulationRun, n: Optional[int] = None,
               alpha: Optional[float] = None) -> WEstimate:
    """W estimated by truncation: R_n at the requested (default largest) n."""
    if n is None:
        n = len(run.events)
    return WEstimate(martingale_R(run, n, alpha), n)


def z_process(run: PopulationRun, t: float) -> int:
    """Individuals born after t to mothers born at or before t."""
    if t < 0 or t > run.t_max:
        raise ValueError(f"t must be in [0, {run.t_max}], got {t}")
    count = 0
    for event in run.events:
        if event.sigma > t:
            break
        for tau in event.child_offsets:
            if event.sigma + tau > t:
                count += 1
    return count


# ---------------------------------------------------------------------------
# CSV export
# ---------------------------------------------------------------------------

def export_events_csv(run: PopulationRun, path: str | Path, header: str = "") -> None:
    lines = []
    if header:
        lines.append(header)
    lines.append("order_index,address,sigma,letter")
    for k, event in enumerate(run.events):
        lines.append(f"{k},{format_address(event.address)},{event.sigma!r},{event.letter_id}")
    Path(path).write_text("\n".join(lines) + "\n")


def export_martingale_csv(run: PopulationRun, path: str | Path,
                          alpha: Optional[float] = None, header: str = "") -> None:
    lines = []
    if header:
        lines.append(header)
    lines.append("n,R_n")
    for n, value in enumerate(martingale_trace(run, alpha)):
        lines.append(f"{n},{value!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def export_z_csv(run: PopulationRun, ts: Sequence[float], gamma: float,
                 path: str | Path, header: str = "") -> None:
    lines = []
    if header:
        lines.append(header)
    lines.append("t,z_t,scaled")
    for t in ts:
        t = float(t)
        z = z_process(run, t)
        lines.append(f"{t!r},{z},{math.exp(-gamma * t) * z!r}")
    Path(path).write_text("\n".join(lines) + "\n")

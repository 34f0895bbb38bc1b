"""Hardware realization: resistor catalogs, readout noise, energy.

Trained resistances land on arbitrary reals, but a physical build picks
from a parts catalog.  The default catalog keeps one significant digit
(3230 ohms -> 3000 ohms); E12/E24 series and explicit part lists are also
supported.  Rounding is to the nearest catalog value by absolute distance,
ties toward the larger part.

Energy accounting follows the capacitor: a charge step draws
q = C * (v1 - v0) from the supply at voltage v_in, so the supply delivers
v_in * C * (v1 - v0); the capacitor stores (C/2) * (v1^2 - v0^2) of that
and the series resistor dissipates the rest.  A discharge step dissipates
exactly the stored energy it releases, (C/2) * (v0^2 - v1^2).
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .neuron import Network, Polarity, build_schedule, infer_network
from .rc import RCParams, charge_step, discharge_step

__all__ = [
    "E12_MANTISSAS",
    "E24_MANTISSAS",
    "ResistorCatalog",
    "DEFAULT_CATALOG",
    "round_resistance",
    "quantize_network",
    "perturb_readout",
    "response_map",
    "write_response_map_csv",
    "NeuronEnergy",
    "EnergyReport",
    "energy_per_inference",
    "energy_report_to_dict",
    "max_inference_time",
]

E12_MANTISSAS = (1.0, 1.2, 1.5, 1.8, 2.2, 2.7, 3.3, 3.9, 4.7, 5.6, 6.8, 8.2)
E24_MANTISSAS = (
    1.0, 1.1, 1.2, 1.3, 1.5, 1.6, 1.8, 2.0, 2.2, 2.4, 2.7, 3.0,
    3.3, 3.6, 3.9, 4.3, 4.7, 5.1, 5.6, 6.2, 6.8, 7.5, 8.2, 9.1,
)

_SERIES = {
    "one_significant_digit": tuple(float(d) for d in range(1, 10)),
    "e12": E12_MANTISSAS,
    "e24": E24_MANTISSAS,
}


@dataclass(frozen=True)
class ResistorCatalog:
    """Set of purchasable resistance values.

    ``values`` is only used in ``custom`` mode and must then be a non-empty
    list of positive resistances; the series modes repeat their mantissas
    across every decade.
    """

    mode: str = "one_significant_digit"
    values: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.mode == "custom":
            if not self.values:
                raise ValueError("custom catalog needs at least one value")
            if any(not (math.isfinite(v) and v > 0) for v in self.values):
                raise ValueError("catalog values must be positive and finite")
            object.__setattr__(self, "values", tuple(sorted(self.values)))
        elif self.mode in _SERIES:
            if self.values:
                raise ValueError(f"mode {self.mode!r} does not take explicit values")
        else:
            choices = ", ".join([*_SERIES, "custom"])
            raise ValueError(f"unknown catalog mode {self.mode!r} (one of: {choices})")

    def candidates(self, resistance: float) -> tuple[float, ...]:
        """Catalog values bracketing ``resistance``."""
        if self.mode == "custom":
            return self.values
        mantissas = _SERIES[self.mode]
        decade = 10.0 ** math.floor(math.log10(resistance))
        # floor(log10) can land one decade off at representation boundaries
        while resistance < decade:
            decade /= 10.0
        while resistance >= decade * 10.0:
            decade *= 10.0
        return tuple(m * decade for m in mantissas) + (mantissas[0] * decade * 10.0,)


DEFAULT_CATALOG = ResistorCatalog()


def round_resistance(resistance: float, catalog: ResistorCatalog = DEFAULT_CATALOG) -> float:
    """Snap a resistance to the nearest catalog value (ties go larger)."""
    if not (math.isfinite(resistance) and resistance > 0):
        raise ValueError(f"resistance must be positive and finite, got {resistance}")
    return min(catalog.candidates(resistance), key=lambda c: (abs(c - resistance), -c))


def quantize_network(net: Network, catalog: ResistorCatalog = DEFAULT_CATALOG) -> Network:
    """Round every synapse resistance to the catalog."""
    neurons = tuple(
        replace(
            neuron,
            synapses=tuple(
                replace(s, resistance=round_resistance(s.resistance, catalog))
                for s in neuron.synapses
            ),
        )
        for neuron in net.neurons
    )
    return replace(net, neurons=neurons)


def perturb_readout(
    potential: float,
    sigma: float,
    rng: int | np.random.Generator | None = None,
    *,
    supply_voltage: float = 1.0,
) -> float:
    """Add Gaussian readout noise and clamp to the physical voltage range."""
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.Generator(np.random.PCG64(rng))
    noisy = potential + float(rng.normal(0.0, sigma))
    return min(max(noisy, 0.0), supply_voltage)


def response_map(
    net: Network, grid_step: float
) -> list[tuple[float, float, list[float]]]:
    """Membrane potentials over the full [0,1]^2 input grid.

    Returns (pitch, roll, potentials) rows in row-major order, pitch as the
    outer loop.  Both axes include the endpoints 0 and 1.
    """
    if net.n_inputs != 2:
        raise ValueError(f"response maps need a 2-input network, got {net.n_inputs}")
    if not (0.0 < grid_step <= 1.0):
        raise ValueError(f"grid_step must be in (0, 1], got {grid_step}")
    n_steps = int(math.floor(1.0 / grid_step + 1e-9))
    axis = [min(i * grid_step, 1.0) for i in range(n_steps + 1)]
    if axis[-1] < 1.0:
        axis.append(1.0)
    rows = []
    for pitch in axis:
        for roll in axis:
            rows.append((pitch, roll, infer_network(net, (pitch, roll))))
    return rows


def write_response_map_csv(
    rows: Sequence[tuple[float, float, Sequence[float]]],
    labels: Sequence[str],
    path: str | Path,
) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["pitch", "roll", *labels])
        for pitch, roll, potentials in rows:
            if len(potentials) != len(labels):
                raise ValueError(
                    f"row has {len(potentials)} potentials for {len(labels)} labels"
                )
            writer.writerow([repr(pitch), repr(roll), *(repr(p) for p in potentials)])


# -------------------------------- energy -----------------------------------


@dataclass(frozen=True)
class NeuronEnergy:
    label: str
    supply_energy: float  # joules drawn from the supply
    stored_energy: float  # left on the capacitor after the stimulation
    dissipated_energy: float  # heat in the resistors


@dataclass(frozen=True)
class EnergyReport:
    supply_energy: float
    stored_energy: float
    dissipated_energy: float
    per_neuron: tuple[NeuronEnergy, ...]


def energy_per_inference(net: Network, stimulus: Sequence[float]) -> EnergyReport:
    """Energy drawn, stored, and dissipated over one full stimulation.

    Walks the same charge/discharge fold as inference and applies the
    per-step balance from the module docstring, so supply input equals
    stored plus dissipated exactly (up to float roundoff).
    """
    if len(stimulus) != net.n_inputs:
        raise ValueError(f"expected {net.n_inputs} inputs, got {len(stimulus)}")
    schedule = build_schedule(stimulus, net.t_max)
    v_in = net.supply_voltage
    per_neuron = []
    for neuron in net.neurons:
        synmap = neuron.synapse_map()
        cap = neuron.capacitance
        v = 0.0
        supply = 0.0
        dissipated = 0.0
        for slot in schedule.slots:
            syn = synmap.get((slot.input_index, slot.polarity))
            if syn is None or slot.duration == 0.0:
                continue
            params = RCParams(resistance=syn.resistance, capacitance=cap)
            if slot.polarity is Polarity.EXCITATORY:
                v_next = charge_step(v, params, v_in, slot.duration)
                from_supply = v_in * cap * (v_next - v)
                supply += from_supply
                dissipated += from_supply - 0.5 * cap * (v_next**2 - v**2)
            else:
                v_next = discharge_step(v, params, slot.duration)
                dissipated += 0.5 * cap * (v**2 - v_next**2)
            v = v_next
        stored = 0.5 * cap * v**2
        per_neuron.append(
            NeuronEnergy(
                label=neuron.label,
                supply_energy=supply,
                stored_energy=stored,
                dissipated_energy=dissipated,
            )
        )
    return EnergyReport(
        supply_energy=sum(e.supply_energy for e in per_neuron),
        stored_energy=sum(e.stored_energy for e in per_neuron),
        dissipated_energy=sum(e.dissipated_energy for e in per_neuron),
        per_neuron=tuple(per_neuron),
    )


def energy_report_to_dict(report: EnergyReport) -> dict:
    return {
        "supply_energy_joules": report.supply_energy,
        "stored_energy_joules": report.stored_energy,
        "dissipated_energy_joules": report.dissipated_energy,
        "per_neuron": [
            {
                "label": e.label,
                "supply_energy_joules": e.supply_energy,
                "stored_energy_joules": e.stored_energy,
                "dissipated_energy_joules": e.dissipated_energy,
            }
            for e in report.per_neuron
        ],
    }


def max_inference_time(net: Network) -> float:
    """Worst-case wall time for one inference.

    Stimulation slots shared across neurons run once, so the bound is the
    number of distinct (input line, polarity) pairs that still drive at
    least one synapse anywhere in the network, times the per-slot maximum.
    Pruning a synapse everywhere removes its slot from the schedule.
    """
    live_slots = {
        (syn.input_index, syn.polarity) for neuron in net.neurons for syn in neuron.synapses
    }
    return len(live_slots) * net.t_max

"""Integrate-and-fire neurons as recurrent sequences of synapse stimulations.

A neuron is a capacitor plus an ordered list of resistive synapses.  An
input vector is turned into a stimulation schedule: one excitatory slot
per input (duration proportional to the input value), then one inhibitory
slot per input.  Excitation must complete before inhibition because the
capacitor has to hold charge before a discharge path can remove any.
Inference folds the closed-form charge/discharge steps over the schedule,
starting from a fully discharged capacitor; the final voltage is the
membrane potential.  Classification picks the neuron with the highest
potential.

Every input additionally carries an always-on bias connection (input value
fixed at 1) so a neuron can charge even when the pattern is all zeros.
The bias occupies the last input index.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .rc import RCParams, charge_step, discharge_step

__all__ = [
    "Polarity",
    "Synapse",
    "IFNeuron",
    "Network",
    "Slot",
    "StimulationSchedule",
    "build_schedule",
    "infer_neuron",
    "closed_form_potential",
    "infer_network",
    "classify",
    "spike",
    "network_to_dict",
    "network_from_dict",
    "save_network",
    "load_network",
]

MODEL_SCHEMA_VERSION = 1


class Polarity(str, enum.Enum):
    EXCITATORY = "excitatory"
    INHIBITORY = "inhibitory"


@dataclass(frozen=True)
class Synapse:
    """One resistive input channel of a neuron."""

    input_index: int
    polarity: Polarity
    resistance: float  # ohms

    def __post_init__(self) -> None:
        if self.input_index < 0:
            raise ValueError(f"input_index must be >= 0, got {self.input_index}")
        if not (math.isfinite(self.resistance) and self.resistance > 0):
            raise ValueError(f"resistance must be a positive real, got {self.resistance}")


@dataclass(frozen=True)
class IFNeuron:
    """A capacitor and its ordered synapses, one neuron per output class."""

    label: str
    capacitance: float  # farads
    synapses: tuple[Synapse, ...]

    def __post_init__(self) -> None:
        if not (math.isfinite(self.capacitance) and self.capacitance > 0):
            raise ValueError(f"capacitance must be a positive real, got {self.capacitance}")
        object.__setattr__(self, "synapses", tuple(self.synapses))
        seen = set()
        for syn in self.synapses:
            key = (syn.input_index, syn.polarity)
            if key in seen:
                raise ValueError(f"duplicate synapse for input {syn.input_index} ({syn.polarity.value})")
            seen.add(key)

    def synapse_map(self) -> dict[tuple[int, Polarity], Synapse]:
        return {(s.input_index, s.polarity): s for s in self.synapses}


@dataclass(frozen=True)
class Network:
    """Per-class neurons plus the shared electrical configuration.

    ``n_inputs`` is the raw input dimensionality; the bias connection sits
    at index ``n_inputs``.  It is stored explicitly because pruning may
    strip every synapse of some input from some neuron.
    """

    neurons: tuple[IFNeuron, ...]
    n_inputs: int
    supply_voltage: float = 1.0
    t_max: float = 0.05  # max stimulation time per input, seconds
    threshold: float | None = None  # defaults to half the supply

    def __post_init__(self) -> None:
        object.__setattr__(self, "neurons", tuple(self.neurons))
        if self.n_inputs < 0:
            raise ValueError("n_inputs must be >= 0")
        if not (math.isfinite(self.supply_voltage) and self.supply_voltage > 0):
            raise ValueError(f"supply_voltage must be > 0, got {self.supply_voltage}")
        if not (math.isfinite(self.t_max) and self.t_max > 0):
            raise ValueError(f"t_max must be > 0, got {self.t_max}")
        if self.threshold is None:
            object.__setattr__(self, "threshold", 0.5 * self.supply_voltage)
        if self.threshold < 0:
            raise ValueError(f"threshold must be >= 0, got {self.threshold}")
        for neuron in self.neurons:
            for syn in neuron.synapses:
                if syn.input_index > self.n_inputs:
                    raise ValueError(
                        f"synapse input {syn.input_index} out of range for "
                        f"{self.n_inputs} inputs plus bias"
                    )

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(n.label for n in self.neurons)


@dataclass(frozen=True)
class Slot:
    """One stimulation: which input line, which polarity, for how long."""

    input_index: int
    polarity: Polarity
    duration: float  # seconds

    def __post_init__(self) -> None:
        if not (math.isfinite(self.duration) and self.duration >= 0.0):
            raise ValueError(f"slot duration must be >= 0, got {self.duration}")


@dataclass(frozen=True)
class StimulationSchedule:
    """Ordered stimulation slots; all excitatory slots precede inhibitory ones."""

    slots: tuple[Slot, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "slots", tuple(self.slots))
        seen_inhibitory = False
        for slot in self.slots:
            if slot.polarity is Polarity.INHIBITORY:
                seen_inhibitory = True
            elif seen_inhibitory:
                raise ValueError("excitatory slot after an inhibitory one; charge must precede discharge")


def build_schedule(stimulus: Sequence[float], t_max: float) -> StimulationSchedule:
    """Turn an input vector into a stimulation schedule.

    Each component maps to a duration clamp(x, 0, 1) * t_max; the bias line
    (appended as the last index) always runs for the full t_max.  Excitatory
    slots come first, both phases in ascending input order.  Negative inputs
    clamp to zero duration: a negative stimulation time has no physical
    meaning.
    """
    durations = []
    for value in stimulus:
        if math.isnan(value):
            raise ValueError("stimulus contains NaN")
        durations.append(min(max(value, 0.0), 1.0) * t_max)
    durations.append(t_max)  # bias line
    slots = [Slot(i, Polarity.EXCITATORY, d) for i, d in enumerate(durations)]
    slots += [Slot(i, Polarity.INHIBITORY, d) for i, d in enumerate(durations)]
    return StimulationSchedule(tuple(slots))


def infer_neuron(neuron: IFNeuron, schedule: StimulationSchedule, v_in: float) -> float:
    """Membrane potential after folding the schedule over a discharged capacitor.

    Slots with no matching synapse in the neuron are skipped with zero
    effect (the line simply is not wired to this unit).
    """
    synapses = neuron.synapse_map()
    voltage = 0.0
    for slot in schedule.slots:
        syn = synapses.get((slot.input_index, slot.polarity))
        if syn is None or slot.duration == 0.0:
            continue
        params = RCParams(syn.resistance, neuron.capacitance)
        if slot.polarity is Polarity.EXCITATORY:
            voltage = charge_step(voltage, params, v_in, slot.duration)
        else:
            voltage = discharge_step(voltage, params, slot.duration)
    return voltage


def closed_form_potential(neuron: IFNeuron, schedule: StimulationSchedule, v_in: float) -> float:
    """Algebraic form of :func:`infer_neuron`.

    Folding the exponential steps from zero collapses to

        V = v_in * (1 - exp(-sum_e dt_e / tau_e)) * exp(-sum_i dt_i / tau_i)

    which must agree with the recurrent fold to ~1e-12 relative.
    """
    synapses = neuron.synapse_map()
    charge_exponent = 0.0
    discharge_exponent = 0.0
    for slot in schedule.slots:
        syn = synapses.get((slot.input_index, slot.polarity))
        if syn is None:
            continue
        rate = slot.duration / (syn.resistance * neuron.capacitance)
        if slot.polarity is Polarity.EXCITATORY:
            charge_exponent += rate
        else:
            discharge_exponent += rate
    return v_in * -math.expm1(-charge_exponent) * math.exp(-discharge_exponent)


def infer_network(net: Network, stimulus: Sequence[float]) -> list[float]:
    """Per-neuron membrane potentials for one input vector.

    Neurons are independent; they all see the same schedule (bias included).
    """
    if len(stimulus) != net.n_inputs:
        raise ValueError(f"expected {net.n_inputs} inputs, got {len(stimulus)}")
    schedule = build_schedule(stimulus, net.t_max)
    return [infer_neuron(neuron, schedule, net.supply_voltage) for neuron in net.neurons]


def classify(potentials: Sequence[float]) -> int:
    """Index of the highest potential; ties break toward the lowest index."""
    if len(potentials) == 0:
        raise ValueError("cannot classify an empty potential vector")
    for p in potentials:
        if not math.isfinite(p):
            raise ValueError(f"potentials must be finite, got {p}")
    return max(range(len(potentials)), key=lambda i: potentials[i])


def spike(potential: float, threshold: float) -> bool:
    """True iff the membrane potential reaches the firing threshold (>=)."""
    if not (math.isfinite(potential) and math.isfinite(threshold)):
        raise ValueError("potential and threshold must be finite")
    return potential >= threshold


# --------------------------- persistence ----------------------------------


def network_to_dict(net: Network) -> dict:
    capacitances = {n.capacitance for n in net.neurons}
    if len(capacitances) > 1:
        raise ValueError("cannot serialize a network with per-neuron capacitances")
    capacitance = capacitances.pop() if capacitances else 1e-6
    return {
        "schema_version": MODEL_SCHEMA_VERSION,
        "supply_voltage": net.supply_voltage,
        "t_max": net.t_max,
        "threshold": net.threshold,
        "capacitance": capacitance,
        "n_inputs": net.n_inputs,
        "neurons": [
            {
                "label": neuron.label,
                "synapses": [
                    {
                        "input_index": syn.input_index,
                        "polarity": syn.polarity.value,
                        "resistance_ohms": syn.resistance,
                    }
                    for syn in neuron.synapses
                ],
            }
            for neuron in net.neurons
        ],
    }


def network_from_dict(doc: dict) -> Network:
    version = doc.get("schema_version")
    if version != MODEL_SCHEMA_VERSION:
        raise ValueError(f"unsupported model schema_version {version!r}")
    capacitance = float(doc["capacitance"])
    neurons = tuple(
        IFNeuron(
            label=entry["label"],
            capacitance=capacitance,
            synapses=tuple(
                Synapse(int(s["input_index"]), Polarity(s["polarity"]), float(s["resistance_ohms"]))
                for s in entry["synapses"]
            ),
        )
        for entry in doc["neurons"]
    )
    return Network(
        neurons=neurons,
        n_inputs=int(doc["n_inputs"]),
        supply_voltage=float(doc["supply_voltage"]),
        t_max=float(doc["t_max"]),
        threshold=float(doc["threshold"]),
    )


def save_network(net: Network, path: str | Path) -> None:
    """Write the model as JSON; floats round-trip exactly (shortest repr)."""
    Path(path).write_text(json.dumps(network_to_dict(net), indent=2) + "\n")


def load_network(path: str | Path) -> Network:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not a valid model file: {exc}") from exc
    return network_from_dict(doc)

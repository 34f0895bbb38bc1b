"""Schedule construction, the inference fold, and model serialization.

Frozen potentials come from standalone fine-step RK4 integration of the
underlying ODEs with the published resistances, independent of the closed
forms implemented here.
"""
import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ifcirc import (
    IFNeuron,
    Network,
    Polarity,
    Slot,
    StimulationSchedule,
    Synapse,
    build_schedule,
    classify,
    closed_form_potential,
    infer_network,
    infer_neuron,
    load_network,
    network_from_dict,
    network_to_dict,
    save_network,
    spike,
)
from conftest import neurons, networks, stimulus_values, voltages


# ------------------------------ schedules ----------------------------------


def test_schedule_orders_excitatory_then_inhibitory():
    sched = build_schedule((0.5, 0.2), t_max=0.05)
    polarities = [s.polarity for s in sched.slots]
    assert polarities == [Polarity.EXCITATORY] * 3 + [Polarity.INHIBITORY] * 3
    indices = [s.input_index for s in sched.slots]
    assert indices == [0, 1, 2, 0, 1, 2]


def test_schedule_durations_scale_with_inputs():
    sched = build_schedule((0.5, 0.2), t_max=0.05)
    durations = [s.duration for s in sched.slots]
    assert durations[:3] == pytest.approx([0.025, 0.01, 0.05])
    assert durations[3:] == pytest.approx([0.025, 0.01, 0.05])


def test_schedule_clamps_out_of_range_inputs():
    sched = build_schedule((-0.3, 1.7), t_max=0.05)
    durations = [s.duration for s in sched.slots[:3]]
    assert durations == [0.0, 0.05, 0.05]


def test_schedule_bias_always_full_duration():
    sched = build_schedule((0.0, 0.0), t_max=0.05)
    bias_slots = [s for s in sched.slots if s.input_index == 2]
    assert all(s.duration == 0.05 for s in bias_slots)
    others = [s for s in sched.slots if s.input_index != 2]
    assert all(s.duration == 0.0 for s in others)


def test_schedule_rejects_nan():
    with pytest.raises(ValueError):
        build_schedule((float("nan"), 0.0), t_max=0.05)


def test_schedule_type_rejects_interleaved_phases():
    with pytest.raises(ValueError):
        StimulationSchedule(
            slots=(
                Slot(0, Polarity.INHIBITORY, 0.01),
                Slot(0, Polarity.EXCITATORY, 0.01),
            )
        )


def test_slot_rejects_negative_duration():
    with pytest.raises(ValueError):
        Slot(0, Polarity.EXCITATORY, -0.01)


# ------------------------------ inference ----------------------------------


def _single(polarity, resistance, cap=1e-6):
    return IFNeuron(
        label="u", capacitance=cap, synapses=(Synapse(0, polarity, resistance),)
    )


def test_single_excitatory_synapse_charges():
    neuron = _single(Polarity.EXCITATORY, 10e3)
    sched = StimulationSchedule(slots=(Slot(0, Polarity.EXCITATORY, 0.01),))
    assert infer_neuron(neuron, sched, 1.0) == pytest.approx(
        0.6321205588285577, rel=1e-10
    )


def test_unmatched_slots_are_skipped():
    neuron = _single(Polarity.EXCITATORY, 10e3)
    sched = StimulationSchedule(
        slots=(
            Slot(0, Polarity.EXCITATORY, 0.01),
            Slot(3, Polarity.EXCITATORY, 0.02),  # no such synapse
            Slot(0, Polarity.INHIBITORY, 0.02),  # no inhibitory side either
        )
    )
    assert infer_neuron(neuron, sched, 1.0) == pytest.approx(
        0.6321205588285577, rel=1e-10
    )


def test_empty_schedule_leaves_capacitor_discharged():
    neuron = _single(Polarity.EXCITATORY, 10e3)
    assert infer_neuron(neuron, StimulationSchedule(slots=()), 1.0) == 0.0


@given(data=st.data(), v_in=voltages)
def test_closed_form_equals_fold(data, v_in):
    neuron, n_inputs = data.draw(neurons())
    stimulus = [data.draw(stimulus_values) for _ in range(n_inputs)]
    sched = build_schedule(stimulus, t_max=0.05)
    fold = infer_neuron(neuron, sched, v_in)
    closed = closed_form_potential(neuron, sched, v_in)
    assert math.isclose(fold, closed, rel_tol=1e-12, abs_tol=1e-12 * v_in)


@given(data=st.data(), v_in=voltages)
def test_potential_bounded_by_supply(data, v_in):
    neuron, n_inputs = data.draw(neurons())
    stimulus = [data.draw(stimulus_values) for _ in range(n_inputs)]
    v = infer_neuron(neuron, build_schedule(stimulus, 0.05), v_in)
    assert 0.0 <= v <= v_in


# ------------------------- bundled-model behavior --------------------------


def test_bundled_model_potentials_at_origin(bundled_model):
    pots = infer_network(bundled_model, (0.0, 0.0))
    assert pots[0] == pytest.approx(0.9512294245006082, rel=1e-9)
    assert pots[1] == pytest.approx(0.0463920065252116, rel=1e-6)
    assert pots[2] == pytest.approx(0.0463920065252116, rel=1e-6)


def test_pruned_sit_unit_potential(pruned_bundled_model):
    pots = infer_network(pruned_bundled_model, (0.0, 0.25))
    labels = pruned_bundled_model.labels
    assert pots[labels.index("sit")] == pytest.approx(0.9003681177528592, rel=1e-9)
    assert pots[labels.index("stand")] == pytest.approx(0.15263600441970562, rel=1e-9)
    assert pots[labels.index("lie")] == 0.0


def test_bundled_model_classifies_class_means(bundled_model):
    for stim, want in [((0.0, 0.0), "stand"), ((0.0, 0.25), "sit"), ((0.5, 0.0), "lie")]:
        pots = infer_network(bundled_model, stim)
        assert bundled_model.labels[classify(pots)] == want


def test_infer_network_checks_arity(bundled_model):
    with pytest.raises(ValueError):
        infer_network(bundled_model, (0.0, 0.0, 0.0))


# --------------------------- classify and spike ----------------------------


def test_classify_returns_argmax():
    assert classify([0.1, 0.9, 0.3]) == 1


def test_classify_tie_prefers_lowest_index():
    assert classify([0.5, 0.5, 0.1]) == 0
    assert classify([0.2, 0.7, 0.7]) == 1


def test_classify_rejects_bad_input():
    with pytest.raises(ValueError):
        classify([])
    with pytest.raises(ValueError):
        classify([0.1, float("nan")])


def test_spike_threshold_is_inclusive():
    assert spike(0.5, 0.5)
    assert spike(0.7, 0.5)
    assert not spike(0.49999, 0.5)


# ----------------------------- serialization -------------------------------


def test_network_json_round_trip_is_exact(bundled_model, tmp_path):
    path = tmp_path / "model.json"
    save_network(bundled_model, path)
    loaded = load_network(path)
    assert loaded == bundled_model


def test_network_dict_schema(bundled_model):
    doc = network_to_dict(bundled_model)
    assert doc["schema_version"] == 1
    assert doc["supply_voltage"] == 1.0
    assert doc["t_max"] == 0.05
    assert doc["threshold"] == 0.5
    assert doc["capacitance"] == 1e-6
    assert doc["n_inputs"] == 2
    assert [n["label"] for n in doc["neurons"]] == ["stand", "lie", "sit"]
    first = doc["neurons"][0]["synapses"][0]
    assert set(first) == {"input_index", "polarity", "resistance_ohms"}


@given(net=networks())
def test_round_trip_any_network(net, tmp_path_factory):
    assert network_from_dict(network_to_dict(net)) == net


def test_load_rejects_malformed_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ValueError):
        load_network(path)


def test_load_rejects_unknown_schema_version(bundled_model, tmp_path):
    doc = network_to_dict(bundled_model)
    doc["schema_version"] = 99
    path = tmp_path / "future.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(ValueError):
        load_network(path)


def test_heterogeneous_capacitance_is_unserializable():
    a = IFNeuron("a", 1e-6, (Synapse(0, Polarity.EXCITATORY, 1e4),))
    b = IFNeuron("b", 2e-6, (Synapse(0, Polarity.EXCITATORY, 1e4),))
    net = Network(neurons=(a, b), n_inputs=1)
    with pytest.raises(ValueError):
        network_to_dict(net)


def test_duplicate_synapse_rejected():
    with pytest.raises(ValueError):
        IFNeuron(
            "u",
            1e-6,
            (
                Synapse(0, Polarity.EXCITATORY, 1e4),
                Synapse(0, Polarity.EXCITATORY, 2e4),
            ),
        )


def test_network_rejects_synapse_beyond_bias_line():
    neuron = IFNeuron("u", 1e-6, (Synapse(5, Polarity.EXCITATORY, 1e4),))
    with pytest.raises(ValueError):
        Network(neurons=(neuron,), n_inputs=2)

#!/usr/bin/env python3
"""Full pipeline on the synthetic posture task, end to end.

Generates a seeded dataset, trains the resistances, compares against the
logistic baseline, prunes and quantizes the result, and writes every
artifact (datasets, models, loss curve, response map, energy report) into
one output directory.  Rerunning with the same seeds reproduces every file
byte for byte.

    python3 scripts/run_experiment.py --out-dir runs/demo
"""
import argparse
import json
import time
from pathlib import Path

from ifcirc import (
    CLASS_MEANS,
    DatasetConfig,
    ResistorCatalog,
    TrainConfig,
    energy_per_inference,
    energy_report_to_dict,
    evaluate_accuracy,
    generate,
    max_inference_time,
    prune,
    quantize_network,
    response_map,
    save_network,
    split,
    train,
    train_logistic_baseline,
    write_csv,
    write_response_map_csv,
)
from ifcirc.training import write_loss_csv


def parse_args():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out-dir", type=Path, default=Path("runs/experiment"))
    parser.add_argument("--n", type=int, default=300, help="samples per class")
    parser.add_argument("--sigma", type=float, default=0.04, help="dataset noise")
    parser.add_argument("--data-seed", type=int, default=42)
    parser.add_argument("--train-seed", type=int, default=TrainConfig().seed)
    parser.add_argument("--epochs", type=int, default=5000)
    parser.add_argument("--holdout", type=float, default=0.2)
    parser.add_argument("--grid-step", type=float, default=0.01)
    parser.add_argument("--catalog", default="one_significant_digit")
    return parser.parse_args()


def main():
    args = parse_args()
    out = args.out_dir
    out.mkdir(parents=True, exist_ok=True)

    samples = generate(DatasetConfig(args.n, args.sigma, args.data_seed))
    train_set, test_set = split(samples, 1.0 - args.holdout, seed=args.data_seed)
    write_csv(train_set, out / "train.csv")
    write_csv(test_set, out / "test.csv")
    print(f"dataset: {len(train_set)} train / {len(test_set)} test, sigma={args.sigma}")

    started = time.perf_counter()
    result = train(train_set, TrainConfig(epochs=args.epochs, seed=args.train_seed))
    elapsed = time.perf_counter() - started
    save_network(result.network, out / "model.json")
    write_loss_csv(result.loss_history, out / "loss.csv")
    accuracy = evaluate_accuracy(result.network, test_set)
    print(
        f"trained: {result.epochs_run} epochs in {elapsed:.2f}s, "
        f"final loss {result.loss_history[-1]:.6f}, held-out accuracy {accuracy:.4f}"
    )

    baseline = train_logistic_baseline(train_set, test_set)
    print(f"logistic baseline: held-out accuracy {baseline.accuracy:.4f}")

    pruned = prune(result.network)
    save_network(pruned, out / "pruned.json")
    kept = sum(len(n.synapses) for n in pruned.neurons)
    total = sum(len(n.synapses) for n in result.network.neurons)
    print(
        f"pruned: {kept}/{total} synapses kept, "
        f"held-out accuracy {evaluate_accuracy(pruned, test_set):.4f}, "
        f"max inference time {max_inference_time(pruned) * 1e3:.0f} ms "
        f"(was {max_inference_time(result.network) * 1e3:.0f} ms)"
    )

    quantized = quantize_network(pruned, ResistorCatalog(args.catalog))
    save_network(quantized, out / "quantized.json")
    print(
        f"quantized to {args.catalog}: "
        f"held-out accuracy {evaluate_accuracy(quantized, test_set):.4f}"
    )

    rows = response_map(quantized, args.grid_step)
    write_response_map_csv(rows, quantized.labels, out / "response_map.csv")
    print(f"response map: {len(rows)} grid points at step {args.grid_step}")

    energy = {
        label: energy_report_to_dict(energy_per_inference(quantized, mean))
        for label, mean in CLASS_MEANS.items()
    }
    (out / "energy.json").write_text(json.dumps(energy, indent=2) + "\n")
    for label, report in energy.items():
        print(
            f"energy at {label} mean: {report['supply_energy_joules']:.3e} J supplied, "
            f"{report['dissipated_energy_joules']:.3e} J dissipated"
        )

    print(f"artifacts in {out}/")


if __name__ == "__main__":
    main()

"""Experiment harness: reproducible seeded experiments emitting the
fixed-schema CSV/JSON rows, runnable from Python or the `linprobe` CLI.

Run: python3 demos/demo_experiments.py
"""

from linprobe import EXPERIMENTS, ExperimentConfig, rows_to_csv, run_experiment


def main():
    print("available experiments:", ", ".join(sorted(EXPERIMENTS)))

    cfg = ExperimentConfig(
        experiment="probe_cost",
        families=("poly5", "random"),
        n_values=(1 << 10, 1 << 12),
        table_trials=8,
        query_trials=5_000,
        seed=42,
    )
    rows = run_experiment(cfg, threads=2)
    print("\nprobe_cost rows (mean/p99 probes per insert and absent search):")
    print(rows_to_csv(rows))

    again = run_experiment(cfg, threads=1)
    print(f"rerun with a different thread count is identical: {rows == again}")

    print("equivalent CLI invocation:")
    print("  linprobe --experiment probe_cost --config cfg.json --seed 42 \\")
    print("           --out rows.csv --format csv --threads 2")


if __name__ == "__main__":
    main()

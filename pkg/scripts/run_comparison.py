"""Run both shipped controllers under the default square and sine disturbances.

Writes one trajectory CSV per run and one comparison CSV per disturbance
into the output directory, and prints the comparison tables.
"""
import argparse
from pathlib import Path

from fuzzypend.controllers import build_controller
from fuzzypend.sim import RunReport, SimConfig, Sine, Square, compare, run_closed_loop

SIGNALS = {"square": Square(), "sine": Sine()}


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("runs"))
    args = parser.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)

    for signal_name, signal in SIGNALS.items():
        reports = []
        for kind in ("ts", "mamdani"):
            traj = run_closed_loop(SimConfig(controller=kind, signal=signal), build_controller(kind))
            traj.write_csv(args.out / f"{kind}_{signal_name}.csv")
            reports.append(RunReport.from_trajectory(kind, traj))
        result = compare(*reports)
        (args.out / f"compare_{signal_name}.csv").write_text(result.to_csv())
        print(f"== {signal_name}")
        print(result.to_text())


if __name__ == "__main__":
    main()

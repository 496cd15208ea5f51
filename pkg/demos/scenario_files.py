"""Scenario files: the JSON interface behind the kform CLI.

Builds a scenario dict, runs it in-process, and prints the canonical JSON
report.  Writing the same dict to a file and running
`kform run scenario.json` produces identical output.
"""

from kform import report_to_json, run_scenario

scenario = {
    "mode": "rigidity",
    "source": {"kind": "euclidean", "dim": 2},
    "target": {"kind": "euclidean", "dim": 3},
    "map": ["0.7*z1", "0.7*z2", "0"],
    "p": 1,
    "sampling": {"count": 25, "seed": 9},
}

report = run_scenario(scenario)
for rec in report.checks:
    extra = "" if rec.lambdaHat is None else f"  lambdaHat={rec.lambdaHat:.6f}"
    print(f"{rec.name}: {rec.verdict}{extra}")
print(f"overall: {report.overall}")
print()
print("canonical JSON:")
print(report_to_json(report), end="")

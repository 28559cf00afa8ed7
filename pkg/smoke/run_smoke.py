#!/usr/bin/env python3
"""Quick smoke runner for the installed CLI.

Generates small datasets and runs every single-dataset command on them, checking:
- Exit code / CLI success
- Expected output files exist and carry the JSON schema version
- Command-specific assertions (boundaries in range, error rate, chosen d_s)
"""
from __future__ import annotations

import json
import subprocess
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import pandas as pd

ROOT = Path(__file__).resolve().parents[1]
OUTPUT = ROOT / "output" / "smoke"
SEED = "11"


@dataclass
class SmokeCase:
    name: str
    args: list[str]
    outputs: list[str]
    extra_checks: list[Callable[[Path], None]] = field(default_factory=list)

    @property
    def out_dir(self) -> Path:
        return OUTPUT / self.name


def run_cli(case: SmokeCase) -> dict:
    cmd = [
        sys.executable,
        "-m",
        "src.cli",
        "--seed",
        SEED,
        "--out-dir",
        str(case.out_dir),
        *case.args,
    ]
    result = subprocess.run(
        cmd,
        cwd=ROOT,
        capture_output=True,
        text=True,
    )
    if result.returncode != 0:
        raise RuntimeError(
            f"CLI failed for {case.name} (exit={result.returncode}):\n{result.stderr or result.stdout}"
        )
    return {
        "stdout": result.stdout,
        "stderr": result.stderr,
    }


def load_json(path: Path) -> dict:
    if not path.exists():
        raise FileNotFoundError(f"Expected JSON at {path}")
    payload = json.loads(path.read_text())
    if payload.get("schema") != 1:
        raise AssertionError(f"{path.name} has no schema version")
    return payload


def check_outputs(case: SmokeCase) -> None:
    for name in case.outputs + ["run_config.json"]:
        path = case.out_dir / name
        if not path.exists():
            raise AssertionError(f"Smoke failed: {case.name} did not write {name}")
        if path.suffix == ".json":
            load_json(path)


def check_generated(out_dir: Path) -> None:
    frame = pd.read_csv(out_dir / "data.csv")
    if frame.shape != (4000, 6):
        raise AssertionError(f"gen expected 4000 x 6 samples, found {frame.shape}")


def check_boundaries(out_dir: Path) -> None:
    segmentation = load_json(out_dir / "segmentation.json")
    n_epochs = segmentation["n_epochs"]
    if any(not 1 <= b <= n_epochs - 1 for b in segmentation["boundaries"]):
        raise AssertionError("detect reported a boundary outside the interior epochs")
    detection = load_json(out_dir / "detection.json")
    if detection["auc"] is None or not 0.0 <= detection["auc"] <= 1.0:
        raise AssertionError(f"detect AUC out of range: {detection['auc']}")


def check_selection(out_dir: Path) -> None:
    report = load_json(out_dir / "ds_selection.json")
    if not 0 <= report["chosen_ds"] <= 5:
        raise AssertionError(f"select-ds chose {report['chosen_ds']} for 6 channels")


def check_error_rate(out_dir: Path) -> None:
    metrics = load_json(out_dir / "metrics.json")
    if metrics["error"] >= 0.3:
        raise AssertionError(f"lda test error {metrics['error']:.3f} on the simple setup")


GEN_DIR = OUTPUT / "gen"
CLASSIF_DIR = OUTPUT / "gen_classif"
DATA = str(GEN_DIR / "data.csv")

CASES = [
    SmokeCase("gen", ["gen", "--D", "6", "--ds", "4", "--epochs", "40"],
              ["data.csv", "truth.json"], [check_generated]),
    SmokeCase("gen_classif", ["gen", "--kind", "classif", "--variant", "simple"],
              ["train.csv", "test.csv", "truth.json"]),
    SmokeCase("ssa", ["ssa", DATA, "--ds", "4", "--restarts", "2"],
              ["projection.csv", "sources.csv", "ssa.json"]),
    SmokeCase("select_ds", ["select-ds", DATA, "--restarts", "2"],
              ["ds_selection.json"], [check_selection]),
    SmokeCase("detect", ["detect", DATA, "--algo", "slcd", "--tau", "3", "--epoch-len", "100",
                         "--preprocess", "ssa_max", "--dn", "2", "--truth", str(GEN_DIR / "truth.json")],
              ["segmentation.json", "detection.json"], [check_boundaries]),
    SmokeCase("classify", ["classify", str(CLASSIF_DIR / "train.csv"), str(CLASSIF_DIR / "test.csv"),
                           "--method", "lda"],
              ["classifier.json", "metrics.json", "predictions.csv"], [check_error_rate]),
]


def main() -> None:
    failures = []
    for case in CASES:
        try:
            run_cli(case)
            check_outputs(case)
            for extra_check in case.extra_checks:
                extra_check(case.out_dir)
            print(f"[OK] {case.name}")
        except Exception as exc:  # noqa: BLE001
            failures.append((case.name, exc))
            print(f"[FAIL] {case.name}: {exc}")

    if failures:
        print("\nSmoke failures:")
        for name, exc in failures:
            print(f"- {name}: {exc}")
        sys.exit(1)

    print("\nAll smoke cases passed.")


if __name__ == "__main__":
    main()

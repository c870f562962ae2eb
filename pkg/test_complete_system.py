#!/usr/bin/env python3
"""
End-to-end system test for the strip factorization lab.
Runs every subcommand through the command-line entry point and checks its artifacts.
"""

import json
import sys
import os
import tempfile
from datetime import datetime
from pathlib import Path

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from cli.main import main
from utils.crypto import verify_config_hash

# π/8 is the eighth mode of the default operator window
COMMENSURATE_KAPPA = "0.39269908169872414"

RUNS = {
    "delta": (["delta", "--re", "-2.5", "--im", "0.5"], ["delta.json"]),
    "oracle": (["oracle", "--line", "0.25", "--line", "-0.75"], ["w1_y+0.25.json", "w2_y-0.75.json"]),
    "factorize_sine": (["factorize", "--function", "scaled-sine", "--beta-index", "4", "--alpha", "0.1",
                        "--line", "0.1", "--line", "-0.2"], ["pair.json", "w1_y+0.1.json", "w2_y-0.2.json"]),
    "factorize_identity": (["factorize", "--gauge", "reference"], ["pair.json"]),
    "polar": (["polar", "--function", "scaled-sine", "--beta-index", "4", "--alpha", "0.1", "--format", "csv"],
              ["u_real.csv", "u_upper.csv", "g_real.csv", "g_lower.csv"]),
    "opcheck_identity": (["opcheck", "--alpha", "0.1"], []),
    "opcheck_exponential": (["opcheck", "--alpha", "0.1", "--function", "exponential",
                             "--kappa", COMMENSURATE_KAPPA], []),
    "opcheck_sine": (["opcheck", "--alpha", "0.1", "--function", "scaled-sine", "--beta-index", "32"], []),
    "qheis": (["qheis", "--alpha", "0.1", "--beta-index", "4"], ["qheis.json"]),
    "norm": (["norm", "--gamma", "0.5", "--gamma", "2"], ["norm.json"]),
}


def _check_run(name: str, argv, expected, root: Path) -> bool:
    out = root / name
    status = main(argv + ["--output", str(out), "--quiet"])
    if status != 0:
        print(f"   ❌ exit status {status}")
        return False

    subcommand = argv[0]
    missing = [a for a in expected if not (out / a).exists()]
    table = next(out.glob(f"{subcommand}_residuals.*"), None)
    if missing or table is None:
        print(f"   ❌ missing artifacts: {missing or [subcommand + '_residuals']}")
        return False

    manifest = json.loads((out / "manifest.json").read_text())
    if not manifest["verified"] or not verify_config_hash(manifest["config"], manifest["config_hash"]):
        print("   ❌ manifest is not verified or its hash does not match")
        return False
    print(f"   ✅ {len(manifest['artifacts'])} artifacts, config {manifest['config_hash'][:12]}")
    return True


def run_system_check() -> int:
    """Run every pipeline and print a summary"""
    print("🧮 COMPLETE SYSTEM TEST - STRIP FACTORIZATION LAB")
    print("=" * 80)
    print(f"Started at {datetime.now().isoformat()}")
    print()

    test_results = {name: False for name in RUNS}
    try:
        with tempfile.TemporaryDirectory() as tmp:
            root = Path(tmp)
            for i, (name, (argv, expected)) in enumerate(RUNS.items(), 1):
                print(f"{i}. Running {' '.join(argv)}")
                test_results[name] = _check_run(name, argv, expected, root)
    except Exception as e:
        print(f"\n💥 System test error: {e}")
        import traceback
        traceback.print_exc()
        return 1

    print("\n" + "=" * 80)
    print("📊 SYSTEM TEST RESULTS")
    print("=" * 80)
    passed_tests = sum(test_results.values())
    total_tests = len(test_results)
    for test_name, result in test_results.items():
        status = "✅ PASS" if result else "❌ FAIL"
        print(f"   {test_name.replace('_', ' ').title():.<30} {status}")

    print(f"\n📈 Overall Score: {passed_tests}/{total_tests} runs verified")
    if passed_tests == total_tests:
        print("\n🎉 COMPLETE SYSTEM TEST: SUCCESS!")
        return 0
    print("\n⚠️  Some runs failed - check logs above")
    return 1


def test_complete_system():
    assert run_system_check() == 0


if __name__ == "__main__":
    exit(run_system_check())

#!/usr/bin/env python3
"""
Validate the state documents under data/states
"""

import sys
from pathlib import Path
from typing import Dict, Any
import argparse

# Add project root to path
sys.path.append(str(Path(__file__).parent.parent))

from config import Config
from src.data_loader import load_state_directory
from src.exceptions import CVBellError
from src.gaussian_core import CovarianceMatrix, is_physical, purity, standard_form, is_symmetric_family
from src.utils import setup_logging, save_json

logger = setup_logging()


class StateValidator:
    """Check that every state document parses and describes a physical state"""

    def __init__(self, states_path: str, tolerance: float = None):
        self.states_path = Path(states_path)
        self.tolerance = Config.TOLERANCE if tolerance is None else tolerance
        self.errors = []
        self.warnings = []

    def validate_all(self) -> Dict[str, Any]:
        print("🔍 Validating state documents...")

        results = {
            "valid_files": 0,
            "invalid_files": 0,
            "states": {},
            "errors": [],
            "warnings": []
        }

        for key, state in sorted(load_state_directory(self.states_path).items()):
            state_result = self.validate_state(key, state)
            results["states"][key] = state_result
            if state_result["is_valid"]:
                results["valid_files"] += 1
            else:
                results["invalid_files"] += 1

        results["errors"] = self.errors
        results["warnings"] = self.warnings
        return results

    def validate_state(self, key: str, state: Any) -> Dict[str, Any]:
        result = {"is_valid": True, "physical": None, "purity": None, "symmetric": None, "errors": []}

        if not isinstance(state, CovarianceMatrix):
            result["is_valid"] = False
            result["errors"].append(state)
            self.errors.append(f"{key}: {state}")
            return result

        report = is_physical(state, self.tolerance)
        result["physical"] = report.physical
        if not report.physical:
            result["is_valid"] = False
            message = f"unphysical (d_minus = {report.d_minus:.6g})"
            result["errors"].append(message)
            self.errors.append(f"{key}: {message}")
            return result

        result["purity"] = purity(state, self.tolerance)
        try:
            result["symmetric"] = is_symmetric_family(standard_form(state, self.tolerance), self.tolerance)
        except CVBellError as e:
            self.warnings.append(f"{key}: no standard form ({e})")

        return result

    def generate_report(self, results: Dict[str, Any], output_file: str):
        total = results["valid_files"] + results["invalid_files"]
        report = {
            "summary": {
                "total_files": total,
                "valid_files": results["valid_files"],
                "invalid_files": results["invalid_files"],
                "success_rate": results["valid_files"] / total * 100 if total else 0.0
            },
            "states": results["states"],
            "errors": results["errors"][:50],
            "warnings": results["warnings"][:50]
        }

        save_json(report, output_file)

        print("\n📊 Validation Summary:")
        print(f"   Total files: {report['summary']['total_files']}")
        print(f"   Valid files: {report['summary']['valid_files']}")
        print(f"   Invalid files: {report['summary']['invalid_files']}")
        print(f"   Success rate: {report['summary']['success_rate']:.1f}%")

        for key, state in results["states"].items():
            if state["is_valid"]:
                print(f"   ✅ {key}: purity {state['purity']:.6f}, symmetric {state['symmetric']}")
            else:
                print(f"   ❌ {key}: {'; '.join(state['errors'])}")

        if results["warnings"]:
            print(f"   ⚠️ {len(results['warnings'])} warnings found")


def main():
    parser = argparse.ArgumentParser(description="Validate cvbell state documents")
    parser.add_argument("--input-dir", type=str, default=Config.STATES_PATH, help="State directory")
    parser.add_argument("--report", type=str, default="state_validation_report.json", help="Validation report file")
    parser.add_argument("--tolerance", type=float, default=None, help="Physicality tolerance")

    args = parser.parse_args()

    print("🔬 cvbell State Validator")
    print("=" * 40)

    if not Path(args.input_dir).exists():
        print(f"❌ Input directory does not exist: {args.input_dir}")
        sys.exit(1)

    validator = StateValidator(args.input_dir, args.tolerance)
    results = validator.validate_all()

    validator.generate_report(results, args.report)
    print(f"📄 Report saved to: {args.report}")

    if results["invalid_files"] > 0:
        print(f"\n⚠️ {results['invalid_files']} files have validation issues")
        sys.exit(1)
    else:
        print("\n✅ All states passed validation!")
        sys.exit(0)


if __name__ == "__main__":
    main()

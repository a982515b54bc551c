# Copyright 2026 The riskagent Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Validates the CLI golden outputs against the published JSON schemas."""

import json
import pathlib
import sys

import jsonschema

ROOT = pathlib.Path(__file__).resolve().parents[2]
SCHEMAS = ROOT / "docs" / "schemas"
GOLDEN = ROOT / "tests" / "fixtures" / "cli" / "golden"

PAIRS = {
    "calc_eval.json": "calc_eval",
    "calc_lint_bad.json": "calc_lint_program",
    "calc_lint_doc.json": "calc_lint_calculator",
    "index_build.json": "index_build",
    "index_inspect.json": "index_inspect",
    "curate_run.json": "curate_run",
    "agent_run.json": "agent_run",
    "bench_run.json": "bench_run",
    "bench_synth.json": "bench_synth",
    "cohort_run.json": "cohort_run",
}


def main() -> int:
    failed = 0
    goldens = {p.name for p in GOLDEN.glob("*.json")}
    for name in sorted(goldens - PAIRS.keys()):
        print(f"FAIL {name}: no schema assigned")
        failed += 1
    for name, schema_name in PAIRS.items():
        schema = json.loads((SCHEMAS / f"{schema_name}.schema.json").read_text())
        jsonschema.Draft202012Validator.check_schema(schema)
        try:
            jsonschema.validate(json.loads((GOLDEN / name).read_text()), schema,
                                cls=jsonschema.Draft202012Validator)
            print(f"ok   {name}")
        except jsonschema.ValidationError as e:
            print(f"FAIL {name}: {e.message} at {list(e.absolute_path)}")
            failed += 1
    error = json.loads((SCHEMAS / "error.schema.json").read_text())
    jsonschema.validate({"error": "no calculator 'x' in the registry", "exit_code": 1}, error)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())

# Copyright 2026 The kstab Authors
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

"""Validates builtin documents and CLI reports against the shipped schemas."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

FIXTURES = ["pgl2", "wonderful-a1", "wonderful-a2", "toric-p1", "toric-bl1p2"]


def run(cli, *args):
    out = subprocess.run([cli, *args], check=True, capture_output=True, text=True)
    return json.loads(out.stdout)


def main():
    cli, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])
    input_schema = json.loads((schema_dir / "input.schema.json").read_text())
    report_schema = json.loads((schema_dir / "report.schema.json").read_text())
    jsonschema.Draft202012Validator.check_schema(input_schema)
    jsonschema.Draft202012Validator.check_schema(report_schema)
    inputs = jsonschema.Draft202012Validator(input_schema)
    reports = jsonschema.Draft202012Validator(report_schema)

    with tempfile.TemporaryDirectory() as tmp:
        for name in FIXTURES:
            doc = run(cli, "builtin", name)
            inputs.validate(doc)
            path = str(pathlib.Path(tmp) / f"{name}.json")
            pathlib.Path(path).write_text(json.dumps(doc))
            commands = [
                ["compute", "--input", path, "--invariant", "delta", "--p", "1"],
                ["compute", "--input", path, "--invariant", "delta", "--p", "2.5"],
                ["compute", "--input", path, "--invariant", "alpha"],
                ["compute", "--input", path, "--invariant", "barycenter", "--timing"],
                ["compute", "--input", path, "--invariant", "beta"],
                ["check", "--input", path],
            ]
            if name.startswith("toric"):
                commands.append(["reeb", "--input", path])
            for args in commands:
                reports.validate(run(cli, *args))

        bad = run(cli, "builtin", "pgl2")
        bad["variety"]["extra"] = 1
        try:
            inputs.validate(bad)
        except jsonschema.ValidationError:
            pass
        else:
            raise SystemExit("schema accepted an unknown field")
    print("schemas OK")


if __name__ == "__main__":
    main()

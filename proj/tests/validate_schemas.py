"""Runs each restor subcommand and validates its JSON output against schemas/."""
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource

tool, schemas, models = (pathlib.Path(a) for a in sys.argv[1:4])

registry = Registry()
for p in schemas.glob("*.json"):
    doc = json.loads(p.read_text())
    registry = registry.with_resource(doc["$id"], Resource.from_contents(doc))


def validate(doc, schema):
    s = json.loads((schemas / schema).read_text())
    jsonschema.Draft202012Validator(s, registry=registry).validate(json.loads(pathlib.Path(doc).read_text()))


for m in models.glob("*.json"):
    validate(m, "model.schema.json")

with tempfile.TemporaryDirectory() as out:
    def run(*args):
        subprocess.run([str(tool), *args], cwd=out, check=True, stdout=subprocess.DEVNULL)

    sh = str(models / "single_harmonic.json")
    run("check", "--model", sh, "--out", "check.json")
    run("normalform", "--model", sh, "--eps", "1e-2", "--theta-grid", "8", "--action-samples", "2", "--out", "nf.json")
    run("drift", "--model", sh, "--mode", "thm1", "--eps", "1e-2,1e-3", "--out", "t1.json")
    run("drift", "--model", str(models / "definite_harmonic.json"), "--mode", "thm3", "--eps", "1e-2", "--directions", "2", "--out", "t3.json")
    run("drift", "--mode", "example", "--t-final", "10", "--out", "ex.json")
    o = pathlib.Path(out)
    validate(o / "check.json", "assumption_report.schema.json")
    validate(o / "nf.json", "normalform.schema.json")
    for name in ("t1", "t3", "ex"):
        validate(o / f"{name}.json", "drift_report.schema.json")
        validate(o / f"{name}.manifest.json", "manifest.schema.json")
print("schemas ok")

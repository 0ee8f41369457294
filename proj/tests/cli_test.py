"""End-to-end checks of the c2ka command line.

Usage: cli_test.py <c2ka executable> <fixture dir> <report schema>
"""

import json
import os
import re
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

import jsonschema

EXE, FIXTURES, SCHEMA = sys.argv[1], Path(sys.argv[2]), Path(sys.argv[3])
RELAY = str(FIXTURES / "relay.c2ka")
SCHEMA_DOC = json.loads(SCHEMA.read_text())


def run(*args, env=None):
    return subprocess.run([EXE, *args], capture_output=True, text=True, env=env, timeout=60)


def validate(instance, definition=None):
    schema = SCHEMA_DOC if definition is None else {"$defs": SCHEMA_DOC["$defs"], "$ref": f"#/$defs/{definition}"}
    jsonschema.Draft202012Validator(schema).validate(instance)


# statement := node | edge | attribute, one per line, as emitted.
ID = r'"(?:[^"\\]|\\.)*"'
ATTRS = r'\[(?:[a-z]+=(?:"(?:[^"\\]|\\.)*"|[a-z]+))(?:, [a-z]+=(?:"(?:[^"\\]|\\.)*"|[a-z]+))*\]'
DOT_LINE = re.compile(rf"^\s*(?:{ID}(?: -> {ID})? {ATTRS}|(?:graph|node|edge) {ATTRS}|[a-z]+={ID}|rankdir=[A-Z]+);$")


def check_dot(text):
    lines = text.rstrip("\n").split("\n")
    assert lines[0] == "digraph pfc {", lines[0]
    assert lines[-1] == "}", lines[-1]
    for line in lines[1:-1]:
        if line.strip():
            assert DOT_LINE.match(line), f"not a DOT statement: {line!r}"
    return [(m.group(1), m.group(2), m.group(3)) for m in
            re.finditer(r'^\s*"([^"]+)" -> "([^"]+)" \[label="([^"]+)"', text, re.M)]


class Fixtures(unittest.TestCase):
    def test_listing_and_printing(self):
        r = run("fixture")
        self.assertEqual(r.returncode, 0)
        names = r.stdout.split()
        self.assertIn("C2KA-RELAY", names)
        r = run("fixture", "C2KA-RELAY")
        self.assertEqual(r.returncode, 0)
        self.assertEqual(r.stdout, (FIXTURES / "relay.c2ka").read_text())

    def test_unknown_fixture_is_an_input_error(self):
        self.assertEqual(run("fixture", "NOPE").returncode, 3)

    def test_directory_override(self):
        with tempfile.TemporaryDirectory() as d:
            for f in FIXTURES.iterdir():
                text = f.read_text()
                if f.name == "lattice3.c2ka":
                    text = "# overridden\n" + text
                (Path(d) / f.name).write_text(text)
            r = run("fixture", "LATTICE-3", env={**os.environ, "C2KA_FIXTURE_DIR": d})
            self.assertEqual(r.returncode, 0, r.stderr)
            self.assertTrue(r.stdout.startswith("# overridden"))


class Check(unittest.TestCase):
    def test_profiles(self):
        self.assertEqual(run("check", str(FIXTURES / "lattice3.c2ka")).returncode, 0)
        r = run("check", RELAY)
        self.assertEqual(r.returncode, 2)
        self.assertIn("c2ka.cascade-output", r.stdout + r.stderr)
        r = run("check", RELAY, "--profile", "relaxed")
        self.assertEqual(r.returncode, 0)
        self.assertIn("cascade-output", r.stdout + r.stderr)

    def test_json(self):
        r = run("check", RELAY, "--json", "--all")
        self.assertEqual(r.returncode, 2)
        doc = json.loads(r.stdout)
        validate(doc, "check")
        self.assertFalse(doc["passed"])
        self.assertGreater(len(doc["violations"]), 1)
        for fixture in FIXTURES.glob("*.c2ka"):
            r = run("check", str(fixture), "--json", "--profile", "relaxed")
            validate(json.loads(r.stdout), "check")

    def test_parallel_commutativity_can_warn(self):
        model = json.loads(run("convert", RELAY, "--to", "json").stdout)
        names = model["behaviours"]["elements"]
        a, c = names.index("a"), names.index("c")
        model["behaviours"]["par"][a][c] = "c"
        with tempfile.TemporaryDirectory() as d:
            p = Path(d) / "m.json"
            p.write_text(json.dumps(model))
            strict = json.loads(run("check", str(p), "--json", "--all").stdout)
            self.assertIn("cka.par-commutativity", {v["law"] for v in strict["violations"]})
            lenient = json.loads(run("check", str(p), "--json", "--all", "--par-commutativity-warns").stdout)
            self.assertNotIn("cka.par-commutativity", {v["law"] for v in lenient["violations"]})
            self.assertTrue(any("not commutative" in w for w in lenient["warnings"]))

    def test_input_and_io_errors(self):
        self.assertEqual(run("check", "/nonexistent/model.c2ka").returncode, 4)
        with tempfile.TemporaryDirectory() as d:
            bad = Path(d) / "bad.c2ka"
            bad.write_text("stimuli {\n")
            r = run("check", str(bad))
            self.assertEqual(r.returncode, 3)
            self.assertRegex(r.stderr, r"bad\.c2ka:1:1: error")
            (Path(d) / "bad.json").write_text('{"stimuli": 3}')
            self.assertEqual(run("check", str(Path(d) / "bad.json")).returncode, 3)


class Analyze(unittest.TestCase):
    def test_refuses_unverified_models(self):
        r = run("analyze", RELAY)
        self.assertEqual(r.returncode, 2)
        r = run("analyze", RELAY, "--unverified", "--json")
        self.assertEqual(r.returncode, 0)
        doc = json.loads(r.stdout)
        validate(doc)
        self.assertFalse(doc["verified"])

    def test_reports_validate_against_the_schema(self):
        for fixture in sorted(FIXTURES.glob("*.c2ka")):
            for extra in ([], ["--allow-self"]):
                r = run("analyze", str(fixture), "--profile", "relaxed", "--json", *extra)
                if "agents" not in fixture.read_text():
                    self.assertEqual(r.returncode, 3, fixture)
                    continue
                self.assertEqual(r.returncode, 0, (fixture, r.stderr))
                validate(json.loads(r.stdout))

    def test_relay_report(self):
        doc = json.loads(run("analyze", RELAY, "--profile", "relaxed", "--json").stdout)
        pfc = doc["relations"]["pfc"]["A"]["B"]
        self.assertEqual(pfc["path"], ["A", "C", "B"])
        self.assertEqual(pfc["kinds"], [["stimuli"], ["stimuli", "environment"]])
        self.assertEqual(doc["universally_influential"], ["A"])
        text = run("analyze", RELAY, "--profile", "relaxed").stdout
        self.assertIn("path [A, C, B]", text)

    def test_text_and_json_agree(self):
        doc = json.loads(run("analyze", RELAY, "--profile", "relaxed", "--json").stdout)
        text = run("analyze", RELAY, "--profile", "relaxed", "--text").stdout
        for a, row in doc["relations"]["pfc"].items():
            for b, cell in row.items():
                line = f"{a} -> {b}"
                if cell["holds"]:
                    self.assertIn(line, text)

    def test_dot(self):
        r = run("analyze", RELAY, "--profile", "relaxed", "--dot")
        self.assertEqual(r.returncode, 0)
        edges = check_dot(r.stdout)
        doc = json.loads(run("analyze", RELAY, "--profile", "relaxed", "--json").stdout)
        expected = set()
        for a, row in doc["relations"]["pfc_direct"].items():
            for b, cell in row.items():
                if cell["holds"]:
                    label = {("stimuli",): "stimuli", ("environment",): "env",
                             ("stimuli", "environment"): "stimuli+env"}[tuple(cell["kinds"])]
                    expected.add((a, b, label))
        self.assertEqual(set(edges), expected)
        unverified = run("analyze", RELAY, "--unverified", "--dot").stdout
        check_dot(unverified)
        self.assertIn("unverified model", unverified)


class Query(unittest.TestCase):
    def q(self, *args):
        return run("query", RELAY, "--profile", "relaxed", *args)

    def test_exit_codes(self):
        self.assertEqual(self.q("--pfc", "A", "B").returncode, 0)
        self.assertEqual(self.q("--pfc", "B", "A").returncode, 1)
        self.assertEqual(self.q("--pfc", "A", "A").returncode, 3)
        self.assertIn(self.q("--pfc", "C", "C", "--allow-self").returncode, (0, 1))
        self.assertEqual(self.q("--pfc", "A", "Q").returncode, 3)
        self.assertEqual(self.q("--connected").returncode, 0)

    def test_json_shapes(self):
        for args in (["--pfc", "A", "B"], ["--pfc", "B", "A"], ["--pfc-direct", "C", "B"],
                     ["--stimuli", "A", "B"], ["--direct-stimuli", "A", "C"], ["--env", "C", "B"],
                     ["--direct-env", "C", "B"], ["--connected"]):
            r = self.q(*args, "--json")
            self.assertIn(r.returncode, (0, 1))
            doc = json.loads(r.stdout)
            validate(doc, "query")
            self.assertEqual(doc["holds"], r.returncode == 0)

    def test_witness_on_stdout(self):
        r = self.q("--direct-stimuli", "A", "C")
        self.assertIn("x", r.stdout)


class WhatIf(unittest.TestCase):
    def w(self, replace, source="A", sink="B", *extra):
        return run("whatif", RELAY, "--profile", "relaxed", "--source", source, "--sink", sink,
                   "--agent", "C", "--replace", replace, *extra)

    def test_exit_codes(self):
        self.assertEqual(self.w("seqstar").returncode, 0)
        self.assertEqual(self.w("inactive").returncode, 1)
        self.assertEqual(self.w("idle").returncode, 1)
        self.assertEqual(self.w("orbit:a").returncode, 5)
        self.assertEqual(self.w("seqstar", "B", "A").returncode, 5)
        self.assertEqual(self.w("seq:q").returncode, 3)
        self.assertEqual(self.w("swap:a").returncode, 3)

    def test_json(self):
        for replace in ("seqstar", "inactive", "idle", "orbit:a", "orbit:b", "choice:0", "fixed:a", "seq:1"):
            r = self.w(replace, "A", "B", "--json")
            doc = json.loads(r.stdout)
            validate(doc, "whatif")
            if doc["status"] == "precondition-unmet":
                self.assertEqual(r.returncode, 5)
                self.assertIsNone(doc["recomputed"])
            else:
                self.assertEqual(r.returncode, 0 if doc["recomputed"]["holds"] else 1)


class Convert(unittest.TestCase):
    def test_round_trip(self):
        for fixture in sorted(FIXTURES.glob("*.c2ka")):
            text = run("convert", str(fixture), "--to", "c2ka").stdout
            as_json = run("convert", str(fixture), "--to", "json")
            self.assertEqual(as_json.returncode, 0)
            with tempfile.TemporaryDirectory() as d:
                p = Path(d) / "m.json"
                p.write_text(as_json.stdout)
                self.assertEqual(run("convert", str(p), "--to", "c2ka").stdout, text)
                q = Path(d) / "m.c2ka"
                q.write_text(text)
                self.assertEqual(run("convert", str(q), "--to", "c2ka").stdout, text)


if __name__ == "__main__":
    unittest.main(argv=[sys.argv[0], "-v"])

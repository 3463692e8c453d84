#!/usr/bin/env python3
"""CLI contract checks for spencer-mirror: exit codes, outputs, report schema."""

import argparse
import json
import os
import shutil
import subprocess
import sys
from pathlib import Path

import jsonschema

FAILURES = []


def check(ok, label):
    print(("ok     " if ok else "FAILED ") + label)
    if not ok:
        FAILURES.append(label)


def run(binary, args, env_extra=None):
    env = dict(os.environ)
    env.pop("SPENCER_MIRROR_OUT", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run([str(binary)] + args, capture_output=True, text=True, env=env)


def write(path, doc):
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return path


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--bin", required=True)
    ap.add_argument("--faulty-bin", required=True)
    ap.add_argument("--root", required=True)
    ap.add_argument("--work", required=True)
    ap.add_argument("--with-paper", action="store_true")
    opts = ap.parse_args()

    root = Path(opts.root)
    work = Path(opts.work)
    shutil.rmtree(work, ignore_errors=True)
    work.mkdir(parents=True)
    report_schema = json.loads((root / "schemas" / "report.v1.json").read_text())
    validator = jsonschema.Draft202012Validator(report_schema)

    def valid_report(path, label):
        if not path.exists():
            check(False, label + ": report exists")
            return None
        doc = json.loads(path.read_text())
        errors = list(validator.iter_errors(doc))
        check(not errors, label + ": report matches report.v1" + ("" if not errors else " (" + errors[0].message + ")"))
        return doc

    # verify-mirror on the shipped config
    out = work / "verify"
    r = run(opts.bin, ["verify-mirror", "--config", str(root / "configs" / "paper_verify.json"), "--out", str(out)])
    check(r.returncode == 0, "verify-mirror paper config exits 0 (got %d)" % r.returncode)
    doc = valid_report(out / "verify_mirror.json", "verify-mirror")
    if doc:
        dims = [(d["dim_plus"], d["dim_minus"]) for d in doc["results"][0]["degrees"]]
        check(dims == [(0, 0), (0, 0)], "verify-mirror harmonic dims are zero")
    check((out / "eigenvalues" / "paper-weak-diag_k1_minus.csv").exists(), "verify-mirror writes eigenvalue CSVs")

    # malformed and invalid configs
    bad = write(work / "malformed.json", '{"lambda": [1, 0, 0], ')
    r = run(opts.bin, ["verify-mirror", "--config", str(bad), "--out", str(work / "bad")])
    check(r.returncode == 1, "malformed JSON exits 1 (got %d)" % r.returncode)
    bad_field = write(work / "bad_field.json", {"lambda": [1, 0], "curve": {"N": 20}})
    r = run(opts.bin, ["verify-mirror", "--config", str(bad_field), "--out", str(work / "bad")])
    check(r.returncode == 1 and "'lambda'" in r.stderr, "invalid field exits 1 and names the field")
    bad_n = write(work / "bad_n.json", {"lambda": [1, 0, 0], "curve": {"N": 1}})
    r = run(opts.bin, ["verify-mirror", "--config", str(bad_n), "--out", str(work / "bad")])
    check(r.returncode == 1 and "curve.N" in r.stderr, "N < 3 exits 1 and names curve.N")
    r = run(opts.bin, ["verify-mirror", "--out", str(work / "bad")])
    check(r.returncode == 1, "verify-mirror without --config exits 1")
    r = run(opts.bin, ["no-such-command"])
    check(r.returncode == 1, "unknown subcommand exits 1")

    # fault injection only in the faulty build
    faulty = write(work / "faulty.json", {"lambda": [1, 0, 0], "curve": {"N": 40}, "mode": "faithful",
                                         "fault_injection": "drop_mirror_coupling"})
    r = run(opts.bin, ["verify-mirror", "--config", str(faulty), "--out", str(work / "faulty-normal")])
    check(r.returncode == 1 and "fault_injection" in r.stderr, "release build rejects fault_injection")
    r = run(opts.faulty_bin, ["verify-mirror", "--config", str(faulty), "--out", str(work / "faulty")])
    check(r.returncode == 2, "injected mirror fault exits 2 (got %d)" % r.returncode)
    doc = valid_report(work / "faulty" / "verify_mirror.json", "faulty verify-mirror")
    if doc:
        check(doc["passed"] is False, "faulty report has passed = false")

    # sweeps
    empty = write(work / "empty.json", {"configs": []})
    r = run(opts.bin, ["sweep", "--config", str(empty), "--out", str(work / "empty")])
    check(r.returncode == 0, "empty sweep exits 0")
    doc = valid_report(work / "empty" / "sweep.json", "empty sweep")
    if doc:
        check(doc["results"]["rows"] == [], "empty sweep has no rows")
    small = write(work / "small.json", {
        "defaults": {"curve": {"N": 30}, "mode": "faithful"},
        "configs": [{"id": "p", "lambda": [1, 0, 0]}, {"id": "q", "lambda": [0.2, 0.3, 0.4]},
                    {"id": "broken", "curve": {"N": 30, "R": 1}, "q_max": 2, "lambda": [1, 1, 1]}]})
    r = run(opts.bin, ["sweep", "--config", str(small), "--out", str(work / "small"), "--dump-matrices"])
    check(r.returncode in (0, 2, 3), "small sweep runs (exit %d)" % r.returncode)
    doc = valid_report(work / "small" / "sweep.json", "small sweep")
    if doc:
        check(len(doc["results"]["rows"]) == 3, "small sweep reports every row")
    check((work / "small" / "sweep.csv").exists(), "sweep writes sweep.csv")
    check((work / "small" / "matrices" / "p" / "K1.csv").exists(), "--dump-matrices writes K")
    check((work / "small" / "matrices" / "p" / "delta_sym0.csv").exists(), "--dump-matrices writes delta tables")

    # environment variable and precedence
    env_dir = work / "from-env"
    r = run(opts.bin, ["riemann-roch", "--preset", "k3"], {"SPENCER_MIRROR_OUT": str(env_dir)})
    check(r.returncode == 0, "riemann-roch --preset k3 exits 0")
    doc = valid_report(env_dir / "riemann_roch.json", "riemann-roch k3")
    if doc:
        res = doc["results"]
        check(res["plus"] == res["minus"], "SRR values identical under tag flip")
        check([res["plus"][k] for k in ("A0", "A2", "chi")] == ["72", "2", "74"], "K3 flat rank-3 values")
    flag_dir = work / "from-flag"
    r = run(opts.bin, ["riemann-roch", "--preset", "k3", "--out", str(flag_dir)],
            {"SPENCER_MIRROR_OUT": str(env_dir / "unused")})
    check((flag_dir / "riemann_roch.json").exists() and not (env_dir / "unused").exists(), "--out beats environment")
    r = run(opts.bin, ["riemann-roch", "--config", str(root / "configs" / "cy3_example.json"), "--out",
                       str(work / "cy3")])
    check(r.returncode == 0, "riemann-roch on the threefold example exits 0")
    valid_report(work / "cy3" / "riemann_roch.json", "riemann-roch cy3")
    r = run(opts.bin, ["riemann-roch", "--preset", "quintic", "--out", str(work / "bad")])
    check(r.returncode == 1, "unknown preset exits 1")

    # determinism of reports apart from volatile fields
    def stable(path):
        doc = json.loads(path.read_text())
        doc.pop("timestamp")
        doc.pop("timings_ms")
        return json.dumps(doc, sort_keys=True)

    run(opts.bin, ["sweep", "--config", str(small), "--out", str(work / "small2")])
    check(stable(work / "small" / "sweep.json") == stable(work / "small2" / "sweep.json"), "sweep report deterministic")

    if opts.with_paper:
        r = run(opts.bin, ["paper", "--out", str(work / "paper")])
        check(r.returncode in (0, 2), "paper runs (exit %d)" % r.returncode)
        valid_report(work / "paper" / "paper.json", "paper")

    print("%d failure(s)" % len(FAILURES))
    return 1 if FAILURES else 0


if __name__ == "__main__":
    sys.exit(main())

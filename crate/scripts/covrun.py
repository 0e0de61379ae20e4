#!/usr/bin/env python3
"""Run a coverage-instrumented binary on one input and emit an LCOV tracefile.

Usage: covrun.py BUILD_DIR SOURCE_NAME INPUT_FILE LCOV_OUT

BUILD_DIR must contain the gcov-instrumented binary `translated` and the
`.gcno` notes file produced at compile time (see build_corpus.py). The
binary runs with GCOV_PREFIX pointed at a private temporary directory,
so concurrent runs never race on .gcda files and counts never accumulate
across runs.

The tracefile has a single SF section for SOURCE_NAME with one DA record
per executable line. When the run leaves no coverage data behind (the
program was killed before flushing, or never started) an empty section
is written: the caller then sees "no lines covered", which is the truth,
rather than a parse error.
"""
import json
import os
import shutil
import subprocess
import sys
import tempfile

RUN_TIMEOUT_S = 20


def extract_lines(gcov_stdout, source_name):
    """Pick the per-line counts for source_name out of gcov's JSON.

    gcov prints one JSON document per input file, newline-separated.
    """
    for raw in gcov_stdout.splitlines():
        raw = raw.strip()
        if not raw:
            continue
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError:
            continue
        for entry in doc.get("files", []):
            if entry.get("file", "").endswith(source_name):
                lines = [(l["line_number"], l["count"]) for l in entry.get("lines", [])]
                return sorted(lines)
    return []


def main():
    if len(sys.argv) != 5:
        print("usage: covrun.py BUILD_DIR SOURCE_NAME INPUT_FILE LCOV_OUT", file=sys.stderr)
        return 2
    build_dir, source_name, input_file, lcov_out = sys.argv[1:5]
    binary = os.path.join(build_dir, "translated")

    lines = []
    with tempfile.TemporaryDirectory(prefix="covrun.") as tmp:
        env = dict(os.environ, GCOV_PREFIX=tmp, GCOV_PREFIX_STRIP="99")
        try:
            with open(input_file, "rb") as stdin:
                subprocess.run(
                    [binary, input_file],
                    stdin=stdin,
                    stdout=subprocess.DEVNULL,
                    stderr=subprocess.DEVNULL,
                    env=env,
                    timeout=RUN_TIMEOUT_S,
                )
        except (subprocess.TimeoutExpired, OSError):
            pass  # emit whatever data (if any) the run left behind

        gcda = [n for n in os.listdir(tmp) if n.endswith(".gcda")]
        if gcda:
            for name in os.listdir(build_dir):
                if name.endswith(".gcno"):
                    shutil.copy(os.path.join(build_dir, name), tmp)
            proc = subprocess.run(
                ["gcov", "--json-format", "--stdout"] + sorted(gcda),
                cwd=tmp,
                capture_output=True,
                text=True,
                timeout=RUN_TIMEOUT_S,
            )
            lines = extract_lines(proc.stdout, source_name)

    with open(lcov_out, "w") as out:
        out.write(f"SF:{source_name}\n")
        for line_no, count in lines:
            out.write(f"DA:{line_no},{count}\n")
        out.write("end_of_record\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())

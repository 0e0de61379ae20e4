#!/usr/bin/env python3
"""Compile every corpus pair's translated program with gcov instrumentation.

For each corpus/pairs/<pair>/translated.cpp this produces

    corpus/build/<pair>/translated        the instrumented binary
    corpus/build/<pair>/translated.gcno   compile-time notes for gcov

using a separate compile step so the .gcno lands next to the object file
deterministically. Builds are skipped when the outputs are newer than the
source, so running this repeatedly is cheap.
"""
import os
import subprocess
import sys


def up_to_date(target, dep):
    return os.path.exists(target) and os.path.getmtime(target) >= os.path.getmtime(dep)


def build_pair(src, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    obj = os.path.join(out_dir, "translated.o")
    binary = os.path.join(out_dir, "translated")
    gcno = os.path.join(out_dir, "translated.gcno")
    if up_to_date(binary, src) and up_to_date(gcno, src):
        return "up to date"
    # -fwrapv: the corpus deliberately contains integer-overflow defects;
    # wrapping must be defined behavior so they reproduce identically
    # everywhere instead of being UB.
    steps = [
        ["g++", "--coverage", "-fwrapv", "-O0", "-c", src, "-o", obj],
        ["g++", "--coverage", obj, "-o", binary],
    ]
    for cmd in steps:
        if subprocess.run(cmd).returncode != 0:
            return "FAILED"
    return "built"


def main():
    scripts_dir = os.path.dirname(os.path.abspath(__file__))
    corpus = os.path.join(os.path.dirname(scripts_dir), "corpus")
    pairs_dir = os.path.join(corpus, "pairs")
    build_root = os.path.join(corpus, "build")

    failures = 0
    for pair in sorted(os.listdir(pairs_dir)):
        src = os.path.join(pairs_dir, pair, "translated.cpp")
        if not os.path.isfile(src):
            continue
        status = build_pair(src, os.path.join(build_root, pair))
        print(f"{pair}: {status}")
        if status == "FAILED":
            failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())

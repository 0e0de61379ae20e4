"""Fold large readings into a multiplicative checksum.

Values above 50 are folded into the checksum; the rest are only counted.
Prints the checksum and the small-value count.
"""
import sys


def read_tokens(path):
    try:
        with open(path) as f:
            return f.read().split()
    except OSError:
        return []


def parse_ints(tokens):
    vals = []
    for t in tokens:
        s = t[1:] if t.startswith("-") else t
        if not s.isdigit() or len(s) > 9:
            continue
        vals.append(int(t))
    return vals


def main():
    vals = parse_ints(read_tokens(sys.argv[1]))
    checksum = 3
    small = 0
    for x in vals:
        if x > 50:
            checksum = checksum * 1103515245 + x
        else:
            small += 1
    print(checksum)
    print(small)


main()

"""Classify each input year as "leap" or "common".

Years below 1 print "bad". Century years are leap only when divisible
by 400.
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
    for y in vals:
        if y < 1:
            print("bad")
            continue
        if y % 4 == 0:
            if y % 100 == 0:
                if y % 400 == 0:
                    print("leap")
                else:
                    print("common")
            else:
                print("leap")
        else:
            print("common")


main()

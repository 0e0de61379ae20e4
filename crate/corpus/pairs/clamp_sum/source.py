"""Sum the input values after clamping each one into the range [0, 100]."""
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
    total = 0
    for x in vals:
        if x < 0:
            x = 0
        if x > 100:
            x = 100
        total += x
    print(total)


main()

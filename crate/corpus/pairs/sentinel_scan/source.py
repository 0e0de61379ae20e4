"""Sum input values up to a -1 sentinel.

When the sentinel appears, its position is reported and summing stops.
The running total is printed last either way.
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
    total = 0
    for i, x in enumerate(vals):
        if x == -1:
            print("sentinel", i)
            break
        total += x
    print(total)


main()

"""Print the digit sum of each input value's absolute value."""
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
    for x in vals:
        if x < 0:
            x = -x
        total = 0
        while x > 0:
            total += x % 10
            x //= 10
        print(total)


main()

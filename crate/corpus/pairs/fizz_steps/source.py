"""Print the fizzbuzz word for each input value.

Multiples of 15 print "fizzbuzz", of 3 "fizz", of 5 "buzz"; anything else
prints the value itself.
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
    for x in vals:
        if x % 15 == 0:
            print("fizzbuzz")
        elif x % 3 == 0:
            print("fizz")
        elif x % 5 == 0:
            print("buzz")
        else:
            print(x)


main()

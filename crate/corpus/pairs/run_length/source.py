"""Run-length encode the first input token.

Each run of equal characters becomes the character followed by the run
length. An empty input prints an empty line.
"""
import sys


def read_tokens(path):
    try:
        with open(path) as f:
            return f.read().split()
    except OSError:
        return []


def main():
    tokens = read_tokens(sys.argv[1])
    if not tokens:
        print("")
        return
    s = tokens[0]
    out = []
    cur = s[0]
    count = 1
    for c in s[1:]:
        if c == cur:
            count += 1
        else:
            out.append(cur + str(count))
            cur = c
            count = 1
    out.append(cur + str(count))
    print("".join(out))


main()

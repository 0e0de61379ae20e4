"""Count row pairs of a 0/1 grid that share a column with a 1 in both rows.

Input: n followed by n*n grid entries in row-major order.
Prints the pair count, or -1 when the input is malformed.
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
    if not vals:
        print(-1)
        return
    n = vals[0]
    if n < 1 or n > 8 or len(vals) < 1 + n * n:
        print(-1)
        return
    g = [[vals[1 + i * n + j] for j in range(n)] for i in range(n)]
    count = 0
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                if g[i][k] == g[j][k] == 1:
                    count += 1
                    break
    print(count)


main()

"""Report the maximum parenthesis nesting depth of the first input token.

Prints the depth, then a "deep" marker when it exceeds 3. Unmatched
closers are ignored rather than driving the depth negative.
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
    s = tokens[0] if tokens else ""
    depth = 0
    max_depth = 0
    for c in s:
        if c == "(":
            depth += 1
            if depth > max_depth:
                max_depth = depth
        elif c == ")":
            if depth > 0:
                depth -= 1
    print(max_depth)
    if max_depth > 3:
        print("deep")


main()

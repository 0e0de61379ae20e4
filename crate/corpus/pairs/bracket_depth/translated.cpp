// Report the maximum parenthesis nesting depth of the first input token.
//
// Prints the depth, then a "deep" marker when it exceeds 3. Unmatched
// closers are ignored rather than driving the depth negative.
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>
using namespace std;

static vector<string> read_tokens(const char *path) {
    vector<string> tokens;
    ifstream in(path);
    string t;
    while (in >> t) {
        tokens.push_back(t);
    }
    return tokens;
}

int main(int argc, char **argv) {
    vector<string> tokens = read_tokens(argv[1]);
    string s = tokens.empty() ? "" : tokens[0];
    long long depth = 0;
    long long max_depth = 0;
    for (char c : s) {
        if (c == '(') {
            depth += 1;
            if (depth > max_depth) {
                max_depth = depth;
            }
        } else if (c == ')') {
            if (depth > 0) {
                depth -= 1;
            }
        }
    }
    printf("%lld\n", max_depth);
    if (max_depth > 3) {
        printf("Deep\n");
    }
    return 0;
}

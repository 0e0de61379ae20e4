// Count row pairs of a 0/1 grid that share a column with a 1 in both rows.
//
// Input: n followed by n*n grid entries in row-major order.
// Prints the pair count, or -1 when the input is malformed.
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

static vector<long long> parse_ints(const vector<string> &tokens) {
    vector<long long> vals;
    for (const string &t : tokens) {
        string s = (!t.empty() && t[0] == '-') ? t.substr(1) : t;
        if (s.empty() || s.size() > 9) {
            continue;
        }
        bool digits = true;
        for (char c : s) {
            if (c < '0' || c > '9') {
                digits = false;
            }
        }
        if (!digits) {
            continue;
        }
        vals.push_back(stoll(t));
    }
    return vals;
}

int main(int argc, char **argv) {
    vector<long long> vals = parse_ints(read_tokens(argv[1]));
    if (vals.empty()) {
        printf("-1\n");
        return 0;
    }
    long long n = vals[0];
    if (n < 1 || n > 8 || (long long)vals.size() < 1 + n * n) {
        printf("-1\n");
        return 0;
    }
    vector<vector<long long>> g(n, vector<long long>(n));
    for (long long i = 0; i < n; i++) {
        for (long long j = 0; j < n; j++) {
            g[i][j] = vals[1 + i * n + j];
        }
    }
    long long count = 0;
    for (long long i = 0; i < n; i++) {
        for (long long j = i + 1; j < n; j++) {
            for (long long k = 0; k < n; k++) {
                if (g[i][k] == g[j][k] == 1) {
                    count += 1;
                    break;
                }
            }
        }
    }
    printf("%lld\n", count);
    return 0;
}

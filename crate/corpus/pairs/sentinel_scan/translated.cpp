// Sum input values up to a -1 sentinel.
//
// When the sentinel appears, its position is reported and summing stops.
// The running total is printed last either way.
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
    long long total = 0;
    for (size_t i = 0; i < vals.size(); i++) {
        long long x = vals[i];
        if (x == -1) {
            printf("sentinel %lld\n", x);
            break;
        }
        total += x;
    }
    printf("%lld\n", total);
    return 0;
}

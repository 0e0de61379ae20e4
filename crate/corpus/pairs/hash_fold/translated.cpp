// Fold large readings into a multiplicative checksum.
//
// Values above 50 are folded into the checksum; the rest are only counted.
// Prints the checksum and the small-value count.
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
    int checksum = 3;
    long long small = 0;
    for (long long x : vals) {
        if (x > 50) {
            checksum = checksum * 1103515245 + x;
        } else {
            small += 1;
        }
    }
    printf("%d\n", checksum);
    printf("%lld\n", small);
    return 0;
}

// Print the digit sum of each input value's absolute value.
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
    for (long long x : vals) {
        if (x < 0) {
            x = x;
        }
        long long total = 0;
        while (x > 0) {
            total += x % 10;
            x /= 10;
        }
        printf("%lld\n", total);
    }
    return 0;
}

// Print the fizzbuzz word for each input value.
//
// Multiples of 15 print "fizzbuzz", of 3 "fizz", of 5 "buzz"; anything else
// prints the value itself.
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
        if (x % 15 == 0) {
            printf("fizz\n");
        } else if (x % 3 == 0) {
            printf("fizz\n");
        } else if (x % 5 == 0) {
            printf("buzz\n");
        } else {
            printf("%lld\n", x);
        }
    }
    return 0;
}

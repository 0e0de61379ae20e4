// Classify each input year as "leap" or "common".
//
// Years below 1 print "bad". Century years are leap only when divisible
// by 400.
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
    for (long long y : vals) {
        if (y < 1) {
            printf("bad\n");
            continue;
        }
        if (y % 4 == 0) {
            if (y % 100 == 0) {
                if (y % 400 != 0) {
                    printf("leap\n");
                } else {
                    printf("common\n");
                }
            } else {
                printf("leap\n");
            }
        } else {
            printf("common\n");
        }
    }
    return 0;
}

// Run-length encode the first input token.
//
// Each run of equal characters becomes the character followed by the run
// length. An empty input prints an empty line.
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
    if (tokens.empty()) {
        printf("\n");
        return 0;
    }
    string s = tokens[0];
    string out;
    char cur = s[0];
    long long count = 1;
    for (size_t i = 1; i < s.size(); i++) {
        char c = s[i];
        if (c == cur) {
            count += 1;
        } else {
            out += cur;
            out += to_string(count);
            cur = c;
            count = 0;
        }
    }
    out += cur;
    out += to_string(count);
    printf("%s\n", out.c_str());
    return 0;
}

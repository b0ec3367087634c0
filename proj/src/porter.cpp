#include "calsim/porter.hpp"

namespace calsim {
namespace {

// Working buffer for one word. b[0..k] is the current stem; j marks the
// stem boundary during suffix tests. Follows the original algorithm's
// structure: measure m(), vowel tests, and the condition/rewrite rules of
// steps 1 through 5.
struct Stemmer {
    std::string b;
    int k = 0;
    int j = 0;

    bool cons(int i) const {
        switch (b[i]) {
            case 'a': case 'e': case 'i': case 'o': case 'u':
                return false;
            case 'y':
                return i == 0 ? true : !cons(i - 1);
            default:
                return true;
        }
    }

    // Number of consonant-vowel sequences in b[0..j].
    int m() const {
        int n = 0;
        int i = 0;
        while (true) {
            if (i > j) return n;
            if (!cons(i)) break;
            ++i;
        }
        ++i;
        while (true) {
            while (true) {
                if (i > j) return n;
                if (cons(i)) break;
                ++i;
            }
            ++i;
            ++n;
            while (true) {
                if (i > j) return n;
                if (!cons(i)) break;
                ++i;
            }
            ++i;
        }
    }

    bool vowel_in_stem() const {
        for (int i = 0; i <= j; ++i)
            if (!cons(i)) return true;
        return false;
    }

    bool doublec(int i) const {
        if (i < 1) return false;
        if (b[i] != b[i - 1]) return false;
        return cons(i);
    }

    // consonant-vowel-consonant ending at i, where the final consonant is
    // not w, x or y; used to restore a trailing e (e.g. cav(e), hop(e)).
    bool cvc(int i) const {
        if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
        char ch = b[i];
        return ch != 'w' && ch != 'x' && ch != 'y';
    }

    bool ends(const char* s) {
        int len = static_cast<int>(*s);  // leading length byte, as in the original
        const char* suf = s + 1;
        if (len > k + 1) return false;
        for (int i = 0; i < len; ++i)
            if (b[k - len + 1 + i] != suf[i]) return false;
        j = k - len;
        return true;
    }

    void setto(const char* s) {
        int len = static_cast<int>(*s);
        const char* rep = s + 1;
        b.resize(static_cast<std::size_t>(j + 1 + len));
        for (int i = 0; i < len; ++i) b[static_cast<std::size_t>(j + 1 + i)] = rep[i];
        k = j + len;
    }

    void r(const char* s) {
        if (m() > 0) setto(s);
    }

    // Plurals and -ed / -ing.
    void step1ab() {
        if (b[k] == 's') {
            if (ends("\04" "sses")) k -= 2;
            else if (ends("\03" "ies")) setto("\01" "i");
            else if (b[k - 1] != 's') --k;
        }
        if (ends("\03" "eed")) {
            if (m() > 0) --k;
        } else if ((ends("\02" "ed") || ends("\03" "ing")) && vowel_in_stem()) {
            k = j;
            if (ends("\02" "at")) setto("\03" "ate");
            else if (ends("\02" "bl")) setto("\03" "ble");
            else if (ends("\02" "iz")) setto("\03" "ize");
            else if (doublec(k)) {
                char ch = b[k];
                if (ch != 'l' && ch != 's' && ch != 'z') --k;
            } else if (m() == 1 && cvc(k)) {
                setto("\01" "e");
            }
        }
    }

    void step1c() {
        if (ends("\01" "y") && vowel_in_stem()) b[k] = 'i';
    }

    void step2() {
        switch (b[k - 1]) {
            case 'a':
                if (ends("\07" "ational")) { r("\03" "ate"); break; }
                if (ends("\06" "tional")) { r("\04" "tion"); break; }
                break;
            case 'c':
                if (ends("\04" "enci")) { r("\04" "ence"); break; }
                if (ends("\04" "anci")) { r("\04" "ance"); break; }
                break;
            case 'e':
                if (ends("\04" "izer")) { r("\03" "ize"); break; }
                break;
            case 'l':
                if (ends("\04" "abli")) { r("\04" "able"); break; }
                if (ends("\04" "alli")) { r("\02" "al"); break; }
                if (ends("\05" "entli")) { r("\03" "ent"); break; }
                if (ends("\03" "eli")) { r("\01" "e"); break; }
                if (ends("\05" "ousli")) { r("\03" "ous"); break; }
                break;
            case 'o':
                if (ends("\07" "ization")) { r("\03" "ize"); break; }
                if (ends("\05" "ation")) { r("\03" "ate"); break; }
                if (ends("\04" "ator")) { r("\03" "ate"); break; }
                break;
            case 's':
                if (ends("\05" "alism")) { r("\02" "al"); break; }
                if (ends("\07" "iveness")) { r("\03" "ive"); break; }
                if (ends("\07" "fulness")) { r("\03" "ful"); break; }
                if (ends("\07" "ousness")) { r("\03" "ous"); break; }
                break;
            case 't':
                if (ends("\05" "aliti")) { r("\02" "al"); break; }
                if (ends("\05" "iviti")) { r("\03" "ive"); break; }
                if (ends("\06" "biliti")) { r("\03" "ble"); break; }
                break;
        }
    }

    void step3() {
        switch (b[k]) {
            case 'e':
                if (ends("\05" "icate")) { r("\02" "ic"); break; }
                if (ends("\05" "ative")) { r("\00" ""); break; }
                if (ends("\05" "alize")) { r("\02" "al"); break; }
                break;
            case 'i':
                if (ends("\05" "iciti")) { r("\02" "ic"); break; }
                break;
            case 'l':
                if (ends("\04" "ical")) { r("\02" "ic"); break; }
                if (ends("\03" "ful")) { r("\00" ""); break; }
                break;
            case 's':
                if (ends("\04" "ness")) { r("\00" ""); break; }
                break;
        }
    }

    void step4() {
        switch (b[k - 1]) {
            case 'a':
                if (ends("\02" "al")) break;
                return;
            case 'c':
                if (ends("\04" "ance")) break;
                if (ends("\04" "ence")) break;
                return;
            case 'e':
                if (ends("\02" "er")) break;
                return;
            case 'i':
                if (ends("\02" "ic")) break;
                return;
            case 'l':
                if (ends("\04" "able")) break;
                if (ends("\04" "ible")) break;
                return;
            case 'n':
                if (ends("\03" "ant")) break;
                if (ends("\05" "ement")) break;
                if (ends("\04" "ment")) break;
                if (ends("\03" "ent")) break;
                return;
            case 'o':
                if (ends("\03" "ion") && j >= 0 && (b[j] == 's' || b[j] == 't')) break;
                if (ends("\02" "ou")) break;
                return;
            case 's':
                if (ends("\03" "ism")) break;
                return;
            case 't':
                if (ends("\03" "ate")) break;
                if (ends("\03" "iti")) break;
                return;
            case 'u':
                if (ends("\03" "ous")) break;
                return;
            case 'v':
                if (ends("\03" "ive")) break;
                return;
            case 'z':
                if (ends("\03" "ize")) break;
                return;
            default:
                return;
        }
        if (m() > 1) k = j;
    }

    void step5() {
        j = k;
        if (b[k] == 'e') {
            int a = m();
            if (a > 1 || (a == 1 && !cvc(k - 1))) --k;
        }
        if (b[k] == 'l' && doublec(k) && m() > 1) --k;
    }

    std::string run(const std::string& word) {
        b = word;
        k = static_cast<int>(b.size()) - 1;
        if (k <= 1) return word;  // words of length 1 or 2 are left as-is
        step1ab();
        if (k > 0) {
            step1c();
            step2();
            step3();
            step4();
            step5();
        }
        b.resize(static_cast<std::size_t>(k + 1));
        return b;
    }
};

}  // namespace

std::string porter_stem(const std::string& word) {
    for (char c : word)
        if (c < 'a' || c > 'z') return word;  // stem pure a-z words only
    return Stemmer{}.run(word);
}

}  // namespace calsim

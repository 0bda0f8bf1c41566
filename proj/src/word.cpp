#include "w3/word.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace w3 {

std::vector<Letter> reduce(const std::vector<Letter>& raw) {
    std::vector<Letter> out;
    out.reserve(raw.size());
    for (Letter x : raw) {
        if (!out.empty() && out.back() == -x)
            out.pop_back();
        else
            out.push_back(x);
    }
    return out;
}

Word::Word(std::vector<Letter> letters) : letters_(reduce(letters)) {}

Word Word::inverse() const {
    Word r;
    r.letters_.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) r.letters_.push_back(-*it);
    return r;
}

Word Word::operator*(const Word& rhs) const {
    // Both sides are reduced, so cancellation only happens at the seam.
    std::size_t i = letters_.size(), j = 0;
    while (i > 0 && j < rhs.letters_.size() && letters_[i - 1] == -rhs.letters_[j]) {
        --i;
        ++j;
    }
    Word r;
    r.letters_.reserve(i + rhs.letters_.size() - j);
    r.letters_.insert(r.letters_.end(), letters_.begin(), letters_.begin() + static_cast<long>(i));
    r.letters_.insert(r.letters_.end(), rhs.letters_.begin() + static_cast<long>(j), rhs.letters_.end());
    return r;
}

Word Word::pow(long long k) const {
    Word base = k < 0 ? inverse() : *this;
    unsigned long long e = k < 0 ? static_cast<unsigned long long>(-k) : static_cast<unsigned long long>(k);
    Word r;
    for (unsigned long long i = 0; i < e; ++i) r = r * base;
    return r;
}

Word commutator(const Word& x, const Word& y) { return x * y * x.inverse() * y.inverse(); }

GenImageMap::GenImageMap(std::vector<Word> images) : images_(std::move(images)) {}

GenImageMap GenImageMap::identity(int rank) {
    std::vector<Word> im;
    for (int k = 1; k <= rank; ++k) im.push_back(Word::letter(k));
    return GenImageMap(std::move(im));
}

Word apply(const GenImageMap& f, const Word& w) {
    std::vector<Letter> raw;
    for (Letter x : w.letters()) {
        int k = std::abs(x);
        if (k > f.rank()) throw std::out_of_range("letter outside the map's alphabet");
        const auto& img = f.image(k).letters();
        if (x > 0) {
            raw.insert(raw.end(), img.begin(), img.end());
        } else {
            for (auto it = img.rbegin(); it != img.rend(); ++it) raw.push_back(-*it);
        }
    }
    return Word(std::move(raw));
}

GenImageMap compose(const GenImageMap& f, const GenImageMap& g) {
    if (f.rank() != g.rank()) throw std::invalid_argument("alphabet mismatch in compose");
    std::vector<Word> im;
    im.reserve(static_cast<std::size_t>(g.rank()));
    for (const Word& w : g.images()) im.push_back(apply(f, w));
    return GenImageMap(std::move(im));
}

GenImageMap conjugation(int rank, const Word& z) {
    std::vector<Word> im;
    for (int k = 1; k <= rank; ++k) im.push_back(z * Word::letter(k) * z.inverse());
    return GenImageMap(std::move(im));
}

CyclicForm cyclic_reduce(const Word& w) {
    const auto& l = w.letters();
    std::size_t i = 0, j = l.size();
    while (j - i >= 2 && l[i] == -l[j - 1]) {
        ++i;
        --j;
    }
    return {Word(std::vector<Letter>(l.begin(), l.begin() + static_cast<long>(i))),
            Word(std::vector<Letter>(l.begin() + static_cast<long>(i), l.begin() + static_cast<long>(j)))};
}

std::optional<Word> conjugacy_witness(const Word& w1, const Word& w2) {
    CyclicForm a = cyclic_reduce(w1), b = cyclic_reduce(w2);
    const auto& c1 = a.core.letters();
    const auto& c2 = b.core.letters();
    if (c1.size() != c2.size()) return std::nullopt;
    std::size_t n = c1.size();
    if (n == 0) return a.conj * b.conj.inverse();
    for (std::size_t s = 0; s < n; ++s) {
        // c1 = rotation of c2 starting at s: c2 = x y, c1 = y x, so c1 = x^-1 c2 x.
        bool match = true;
        for (std::size_t k = 0; k < n && match; ++k) match = c1[k] == c2[(s + k) % n];
        if (!match) continue;
        Word x(std::vector<Letter>(c2.begin(), c2.begin() + static_cast<long>(s)));
        return a.conj * x.inverse() * b.conj.inverse();
    }
    return std::nullopt;
}

std::string letter_name(Letter x, int g) {
    int k = std::abs(x);
    std::string s;
    if (k <= 2 * g)
        s = std::string(1, (k % 2 == 1) ? 'a' : 'b') + std::to_string((k + 1) / 2);
    else
        s = "u" + std::to_string(k - 2 * g);
    if (x < 0) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

std::string to_string(const Word& w, int g) {
    if (w.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ' ';
        out += letter_name(w[i], g);
    }
    return out;
}

Letter parse_letter(std::string_view tok, int g, int n) {
    if (tok.size() < 2) throw std::invalid_argument("unknown generator symbol '" + std::string(tok) + "'");
    char c = tok[0];
    bool inverse = std::isupper(static_cast<unsigned char>(c));
    char lc = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    int idx = 0;
    for (char d : tok.substr(1)) {
        if (!std::isdigit(static_cast<unsigned char>(d)))
            throw std::invalid_argument("unknown generator symbol '" + std::string(tok) + "'");
        idx = idx * 10 + (d - '0');
        if (idx > 1000) break;
    }
    int k = 0;
    if ((lc == 'a' || lc == 'b') && idx >= 1 && idx <= g)
        k = 2 * idx - (lc == 'a' ? 1 : 0);
    else if (lc == 'u' && idx >= 1 && idx <= n)
        k = 2 * g + idx;
    else
        throw std::invalid_argument("unknown generator symbol '" + std::string(tok) + "'");
    return inverse ? -k : k;
}

Word parse_word(std::string_view text, int g, int n) {
    std::vector<Letter> raw;
    std::string tok;
    std::istringstream in{std::string(text)};
    while (in >> tok) {
        if (tok == "1") continue;
        raw.push_back(parse_letter(tok, g, n));
    }
    return Word(std::move(raw));
}

}  // namespace w3

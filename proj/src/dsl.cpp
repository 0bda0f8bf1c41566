#include "w3/dsl.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace w3 {

namespace {

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    MappingClassExpr parse() {
        skip();
        if (at_end()) return {};
        if (s_[pos_] == '1') {
            std::size_t save = pos_;
            ++pos_;
            skip();
            if (at_end()) return {};
            pos_ = save;
        }
        MappingClassExpr e = product();
        skip();
        if (!at_end()) fail("unexpected character");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("expression parse error at position " + std::to_string(pos_) + ": " + what);
    }
    bool at_end() const { return pos_ >= s_.size(); }
    void skip() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (!at_end() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    MappingClassExpr product() {
        MappingClassExpr e = factor();
        while (eat('*')) {
            MappingClassExpr f = factor();
            e.terms.insert(e.terms.end(), f.terms.begin(), f.terms.end());
        }
        return e;
    }

    std::string name() {
        skip();
        std::size_t b = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '\'')) ++pos_;
        if (b == pos_) fail("expected a curve name");
        return s_.substr(b, pos_ - b);
    }

    long long integer() {
        skip();
        std::size_t b = pos_;
        if (!at_end() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
        std::size_t digits = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (digits == pos_) fail("expected an integer");
        try {
            return std::stoll(s_.substr(b, pos_ - b));
        } catch (const std::out_of_range&) {
            fail("integer out of range");
        }
    }

    MappingClassExpr factor() {
        skip();
        MappingClassExpr e;
        if (eat('(')) {
            e = product();
            expect(')');
            if (eat('^')) {
                long long k = integer();
                MappingClassExpr base = k < 0 ? inverse(e) : e;
                e.terms.clear();
                for (long long i = 0; i < (k < 0 ? -k : k); ++i) e.terms.insert(e.terms.end(), base.terms.begin(), base.terms.end());
            }
            return e;
        }
        Term t;
        std::size_t b = pos_;
        while (!at_end() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        std::string head = s_.substr(b, pos_ - b);
        expect('[');
        if (head == "T") {
            t.kind = Term::Kind::Twist;
            t.a = name();
        } else if (head == "BP") {
            t.kind = Term::Kind::BoundingPair;
            t.a = name();
            expect(',');
            t.b = name();
        } else if (head == "SEP") {
            t.kind = Term::Kind::Separating;
            long long k = integer();
            if (k < 0 || k > 64) fail("separating genus out of range");
            t.k = static_cast<int>(k);
        } else {
            pos_ = b;
            fail("expected T[...], BP[...], SEP[...] or '('");
        }
        expect(']');
        if (eat('^')) t.exp = integer();
        e.terms.push_back(t);
        return e;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

MappingClassExpr parse_expr(const std::string& text) { return Parser(text).parse(); }

std::string to_string(const MappingClassExpr& e) {
    if (e.terms.empty()) return "1";
    std::string out;
    for (const Term& t : e.terms) {
        if (!out.empty()) out += "*";
        switch (t.kind) {
        case Term::Kind::Twist:
            out += "T[" + t.a + "]";
            break;
        case Term::Kind::BoundingPair:
            out += "BP[" + t.a + "," + t.b + "]";
            break;
        case Term::Kind::Separating:
            out += "SEP[" + std::to_string(t.k) + "]";
            break;
        }
        if (t.exp != 1) out += "^" + std::to_string(t.exp);
    }
    return out;
}

MappingClassExpr inverse(const MappingClassExpr& e) {
    MappingClassExpr r;
    for (auto it = e.terms.rbegin(); it != e.terms.rend(); ++it) {
        Term t = *it;
        t.exp = -t.exp;
        r.terms.push_back(t);
    }
    return r;
}

ExprList parse_expr_list(const std::string& text) {
    ExprList out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        line = line.substr(b, line.find_last_not_of(" \t\r") - b + 1);
        if (line.rfind("signature", 0) == 0 && line.find('=') != std::string::npos) {
            out.sig = parse_sig(line.substr(line.find('=') + 1));
            continue;
        }
        try {
            out.exprs.push_back(parse_expr(line));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("list line " + std::to_string(lineno) + ": " + e.what());
        }
        out.source.push_back(line);
    }
    return out;
}

ExprList load_expr_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open list " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_expr_list(ss.str());
}

std::string torelli_list_path(SurfaceSig sig, const std::string& data_dir) {
    return data_dir + "/torelli/g" + std::to_string(sig.g) + "_n" + std::to_string(sig.n) + ".lst";
}

}  // namespace w3

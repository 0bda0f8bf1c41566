#include "w3/surface.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>

namespace w3 {

SurfaceSig parse_sig(const std::string& text) {
    SurfaceSig s;
    char comma = 0;
    std::istringstream in(text);
    if (!(in >> s.g >> comma >> s.n) || comma != ',' || s.g < 0 || s.n < 0)
        throw std::invalid_argument("malformed signature '" + text + "', expected g,n");
    std::string rest;
    if (in >> rest) throw std::invalid_argument("malformed signature '" + text + "'");
    return s;
}

Word relator(SurfaceSig sig) {
    std::vector<Letter> r;
    for (int i = 1; i <= sig.g; ++i) {
        int a = 2 * i - 1, b = 2 * i;
        r.insert(r.end(), {a, b, -a, -b});
    }
    for (int j = sig.n; j >= 1; --j) r.push_back(2 * sig.g + j);
    return Word(std::move(r));
}

Presentation presentation(SurfaceSig sig) {
    if (!sig.valid_part()) throw std::invalid_argument("invalid signature " + sig.str());
    Presentation p;
    p.sig = sig;
    for (int k = 1; k <= sig.rank(); ++k) p.generators.push_back(letter_name(k, sig.g));
    p.relator = relator(sig);
    return p;
}

AutoOnPi validate_auto(const GenImageMap& map, SurfaceSig sig) {
    if (map.rank() != sig.rank()) throw CertificationError("map rank does not match signature " + sig.str());
    AutoOnPi a;
    a.sig = sig;
    a.map = map;
    Word r = relator(sig);
    auto zr = conjugacy_witness(apply(map, r), r);
    if (!zr) throw CertificationError("relator image is not conjugate to the relator");
    a.cert.relator_conj = *zr;
    for (int j = 1; j <= sig.n; ++j) {
        Word u = Word::letter(2 * sig.g + j);
        auto z = conjugacy_witness(map.image(2 * sig.g + j), u);
        if (!z) throw CertificationError("puncture class u" + std::to_string(j) + " is moved");
        a.cert.puncture_conj.push_back(*z);
    }
    return a;
}

bool check_certificate(const AutoOnPi& a) {
    Word r = relator(a.sig);
    const Word& z = a.cert.relator_conj;
    if (apply(a.map, r) != z * r * z.inverse()) return false;
    if (static_cast<int>(a.cert.puncture_conj.size()) != a.sig.n) return false;
    for (int j = 1; j <= a.sig.n; ++j) {
        Word u = Word::letter(2 * a.sig.g + j);
        const Word& zj = a.cert.puncture_conj[static_cast<std::size_t>(j - 1)];
        if (a.map.image(2 * a.sig.g + j) != zj * u * zj.inverse()) return false;
    }
    return true;
}

CoefMat symplectic_form(int g) {
    CoefMat j(static_cast<std::size_t>(2 * g), CoefVec(static_cast<std::size_t>(2 * g), 0));
    for (int i = 0; i < g; ++i) {
        j[static_cast<std::size_t>(2 * i)][static_cast<std::size_t>(2 * i + 1)] = 1;
        j[static_cast<std::size_t>(2 * i + 1)][static_cast<std::size_t>(2 * i)] = -1;
    }
    return j;
}

bool is_symplectic(const CoefMat& m) {
    std::size_t d = m.size();
    if (d % 2) return false;
    CoefMat mt(d, CoefVec(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k) mt[i][k] = m[k][i];
    CoefMat j = symplectic_form(static_cast<int>(d / 2));
    return coef_mul(coef_mul(mt, j), m) == j;
}

CoefMat homology_matrix(const AutoOnPi& a) {
    std::size_t d = static_cast<std::size_t>(2 * a.sig.g);
    CoefMat m(d, CoefVec(d, 0));
    for (std::size_t k = 0; k < d; ++k)
        for (Letter x : a.map.image(static_cast<int>(k + 1)).letters()) {
            std::size_t i = static_cast<std::size_t>(std::abs(x) - 1);
            if (i < d) m[i][k] += x > 0 ? 1 : -1;
        }
    if (!is_symplectic(m)) throw CertificationError("homology matrix is not symplectic");
    return m;
}

std::string fnv1a64_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

GeneratorTable GeneratorTable::parse_text(const std::string& text) {
    GeneratorTable t;
    bool have_sig = false;
    std::string body;
    std::map<std::string, std::map<std::string, std::string>> raw;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string l = trim(line);
        if (l.empty() || l[0] == '#') continue;
        auto eq = l.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("table line " + std::to_string(lineno) + ": missing '='");
        std::string key = trim(l.substr(0, eq)), val = trim(l.substr(eq + 1));
        if (key == "signature") {
            t.sig_ = parse_sig(val);
            have_sig = true;
        } else if (key == "version") {
            t.version_ = val;
        } else if (key == "checksum") {
            t.checksum_ = val;
        } else {
            auto dot = key.rfind('.');
            if (dot == std::string::npos || dot == 0)
                throw std::invalid_argument("table line " + std::to_string(lineno) + ": expected name.generator");
            raw[key.substr(0, dot)][key.substr(dot + 1)] = val;
            body += l + "\n";
        }
    }
    if (!have_sig) throw std::invalid_argument("table has no signature header");
    if (t.checksum_.empty()) throw std::invalid_argument("table has no checksum header");
    if (fnv1a64_hex(body) != t.checksum_) throw std::invalid_argument("table checksum mismatch");
    const SurfaceSig s = t.sig_;
    for (const auto& [name, imgs] : raw) {
        std::vector<Word> im;
        for (int k = 1; k <= s.rank(); ++k) {
            auto it = imgs.find(letter_name(k, s.g));
            if (it == imgs.end())
                throw std::invalid_argument("table entry " + name + " lacks generator " + letter_name(k, s.g));
            im.push_back(parse_word(it->second, s.g, s.n));
        }
        if (static_cast<int>(imgs.size()) != s.rank())
            throw std::invalid_argument("table entry " + name + " names an unknown generator");
        t.entries_.emplace(name, GenImageMap(std::move(im)));
    }
    return t;
}

GeneratorTable GeneratorTable::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open table " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

std::string default_data_dir() {
#ifdef W3_DATA_DIR
    return W3_DATA_DIR;
#else
    return "data";
#endif
}

std::shared_ptr<const GeneratorTable> GeneratorTable::load(SurfaceSig sig, const std::string& data_dir) {
    static std::mutex mu;
    static std::map<std::pair<SurfaceSig, std::string>, std::shared_ptr<const GeneratorTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(sig, data_dir);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    if (!sig.valid_part()) throw std::invalid_argument("invalid signature " + sig.str());

    SurfaceSig file_sig = sig.n == 0 ? SurfaceSig{sig.g, 1} : sig;
    std::string path = data_dir + "/tables/g" + std::to_string(file_sig.g) + "_n" + std::to_string(file_sig.n) + ".tbl";
    GeneratorTable t = parse_file(path);
    if (t.sig_ != file_sig) throw std::invalid_argument("table " + path + " has signature " + t.sig_.str());
    if (sig.n == 0) {
        // Keep entries that fix u1 and never mention it; drop u1 from the alphabet.
        const int r = 2 * sig.g, u1 = r + 1;
        std::map<std::string, GenImageMap> kept;
        for (const auto& [name, f] : t.entries_) {
            if (f.image(u1) != Word::letter(u1)) continue;
            bool touches = false;
            std::vector<Word> im;
            for (int k = 1; k <= r; ++k) {
                for (Letter x : f.image(k).letters()) touches = touches || std::abs(x) == u1;
                im.push_back(f.image(k));
            }
            if (!touches) kept.emplace(name, GenImageMap(std::move(im)));
        }
        t.entries_ = std::move(kept);
        t.sig_ = sig;
    }
    auto failures = t.certify();
    if (!failures.empty()) throw CertificationError("table " + path + ": " + failures.front());
    auto ptr = std::make_shared<const GeneratorTable>(std::move(t));
    cache.emplace(key, ptr);
    return ptr;
}

const GenImageMap& GeneratorTable::get(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) throw std::invalid_argument("unknown generator name '" + name + "' for signature " + sig_.str());
    return it->second;
}

std::vector<std::string> GeneratorTable::curve_names() const {
    std::vector<std::string> out;
    for (const auto& [name, f] : entries_)
        if (name.size() < 3 || name.compare(name.size() - 3, 3, "^-1") != 0) out.push_back(name);
    return out;
}

std::vector<std::string> GeneratorTable::certify() const {
    std::vector<std::string> fails;
    const GenImageMap id = GenImageMap::identity(sig_.rank());
    for (const auto& [name, f] : entries_) {
        try {
            homology_matrix(validate_auto(f, sig_));
        } catch (const CertificationError& e) {
            fails.push_back(name + ": " + e.what());
        }
    }
    for (const auto& name : curve_names()) {
        auto inv = entries_.find(name + "^-1");
        if (inv == entries_.end()) {
            fails.push_back(name + ": no tabulated inverse");
            continue;
        }
        const GenImageMap& f = entries_.at(name);
        if (compose(f, inv->second) != id || compose(inv->second, f) != id)
            fails.push_back(name + ": tabulated inverse does not compose to the identity");
    }
    return fails;
}

MappingClassExpr separating_twist(SurfaceSig sig, int k) {
    MappingClassExpr e;
    auto T = [](const std::string& c) { return Term{Term::Kind::Twist, c, "", 0, 1}; };
    if (k == 0) {
        if (sig.n < 2 || (sig.g == 0 && sig.n <= 3))
            throw std::invalid_argument("no essential disc-of-punctures curve for signature " + sig.str());
        e.terms.push_back(T("d2"));
        return e;
    }
    if (k < 0 || k > sig.g || (k == sig.g && sig.n < 2))
        throw std::invalid_argument("no separating curve of genus " + std::to_string(k) + " for signature " + sig.str());
    std::vector<Term> chain{T("a1"), T("b1")};
    for (int i = 1; i < k; ++i) {
        chain.push_back(T("c" + std::to_string(i)));
        chain.push_back(T("b" + std::to_string(i + 1)));
    }
    for (int r = 0; r < 4 * k + 2; ++r) e.terms.insert(e.terms.end(), chain.begin(), chain.end());
    return e;
}

namespace {

GenImageMap signed_twist(const std::string& curve, bool inverse, const GeneratorTable& table) {
    return table.get(inverse ? curve + "^-1" : curve);
}

GenImageMap expr_map(const MappingClassExpr& e, const GeneratorTable& table, bool inverse);

GenImageMap unit_map(const Term& t, const GeneratorTable& table, bool inverse) {
    switch (t.kind) {
    case Term::Kind::Twist:
        return signed_twist(t.a, inverse, table);
    case Term::Kind::BoundingPair: {
        GenImageMap x = signed_twist(t.a, false, table), y = signed_twist(t.b, true, table);
        if (inverse) return compose(signed_twist(t.b, false, table), signed_twist(t.a, true, table));
        return compose(x, y);
    }
    case Term::Kind::Separating:
        return expr_map(separating_twist(table.sig(), t.k), table, inverse);
    }
    throw std::logic_error("unhandled term kind");
}

GenImageMap expr_map(const MappingClassExpr& e, const GeneratorTable& table, bool inverse) {
    GenImageMap acc = GenImageMap::identity(table.sig().rank());
    if (!inverse) {
        for (const Term& t : e.terms) acc = compose(acc, term_map(t, table));
    } else {
        for (auto it = e.terms.rbegin(); it != e.terms.rend(); ++it) {
            Term inv = *it;
            inv.exp = -inv.exp;
            acc = compose(acc, term_map(inv, table));
        }
    }
    return acc;
}

}  // namespace

GenImageMap term_map(const Term& t, const GeneratorTable& table) {
    GenImageMap unit = unit_map(t, table, t.exp < 0);
    GenImageMap acc = GenImageMap::identity(table.sig().rank());
    long long e = t.exp < 0 ? -t.exp : t.exp;
    for (long long i = 0; i < e; ++i) acc = compose(acc, unit);
    return acc;
}

AutoOnPi realize(const MappingClassExpr& e, const GeneratorTable& table) {
    return validate_auto(expr_map(e, table, false), table.sig());
}

}  // namespace w3

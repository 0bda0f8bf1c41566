#include "w3/johnson.hpp"

#include <stdexcept>

namespace w3 {

namespace {

CoefVec unit(int dim, int i) {
    CoefVec v(static_cast<std::size_t>(dim), 0);
    v[static_cast<std::size_t>(i)] = 1;
    return v;
}

CoefVec column(const CoefMat& m, int k) {
    CoefVec c;
    for (const auto& row : m) c.push_back(row[static_cast<std::size_t>(k)]);
    return c;
}

Coef to_coef(const Int& x) {
    if (!x.fits_slong_p()) throw OverflowError("coefficient overflow");
    return x.get_si();
}

std::string term_key(const Term& t) {
    return std::to_string(static_cast<int>(t.kind)) + "|" + t.a + "|" + t.b + "|" + std::to_string(t.k);
}

}  // namespace

IntVec flatten(const HomMatrix& h) {
    IntVec v;
    for (const auto& row : h)
        for (Coef x : row) v.emplace_back(static_cast<long>(x));
    return v;
}

HomMatrix unflatten(const IntVec& v, int rows, int cols) {
    HomMatrix h(static_cast<std::size_t>(rows), CoefVec(static_cast<std::size_t>(cols)));
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            h[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = to_coef(v[static_cast<std::size_t>(r * cols + c)]);
    return h;
}

HomMatrix m_n(const NilQuotient& q, const NilAuto& f) {
    if (f.m != coef_identity(static_cast<std::size_t>(q.d1()))) throw NotTorelliError("mapping class acts nontrivially on H");
    return f.s;
}

Lattice inner_lattice(const NilQuotient& q, const CoefMat& m) {
    const int d = q.d1();
    IntMat gens;
    for (int h = 0; h < d; ++h) {
        HomMatrix row;
        for (int k = 0; k < d; ++k) row.push_back(q.bracket(unit(d, h), column(m, k)));
        gens.push_back(flatten(row));
    }
    return Lattice::span(static_cast<std::size_t>(d * q.r2()), gens);
}

Lattice ad_lattice(const NilQuotient& q) { return inner_lattice(q, coef_identity(static_cast<std::size_t>(q.d1()))); }

long long expected_torelli_rank(SurfaceSig sig) {
    long long d = 2LL * sig.g;
    if (sig.g == 0) return 0;
    return d * (d - 1) * (d - 2) / 6 + d * (sig.n - 1);
}

W3Context::W3Context(SurfaceSig sig, const std::string& data_dir)
    : sig_(sig), table_(GeneratorTable::load(sig, data_dir)), q_(sig), ad_(ad_lattice(q_)) {}

NilAuto W3Context::unit_nil(const Term& t) const {
    Term u = t;
    u.exp = 1;
    const std::string key = term_key(u);
    {
        std::lock_guard<std::mutex> lock(mu_);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    NilAuto f;
    switch (u.kind) {
    case Term::Kind::Twist:
        f = induced_auto_map(table_->get(u.a), q_);
        break;
    case Term::Kind::BoundingPair:
        f = nil_compose(q_, induced_auto_map(table_->get(u.a), q_), induced_auto_map(table_->get(u.b + "^-1"), q_));
        break;
    case Term::Kind::Separating:
        f = nil_of(separating_twist(sig_, u.k));
        break;
    }
    std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(key, f);
    return f;
}

NilAuto W3Context::nil_of(const MappingClassExpr& e) const {
    NilAuto acc = nil_identity(q_);
    for (const Term& t : e.terms) {
        NilAuto f = t.kind == Term::Kind::Twist && t.exp == -1 && table_->has(t.a + "^-1")
                        ? induced_auto_map(table_->get(t.a + "^-1"), q_)
                        : nil_pow(q_, unit_nil(t), t.exp);
        acc = nil_compose(q_, acc, f);
    }
    return acc;
}

bool W3Context::is_torelli(const MappingClassExpr& e) const {
    return nil_of(e).m == coef_identity(static_cast<std::size_t>(q_.d1()));
}

HomExtClass W3Context::hom_ext(const HomMatrix& h) const { return {ad_.residue(flatten(h))}; }

HomExtClass W3Context::johnson(const MappingClassExpr& e) const { return hom_ext(m_n(q_, nil_of(e))); }

PiCTElement W3Context::pict(const NilAuto& f) const {
    PiCTElement x{sig_, f};
    x.f.s = unflatten(inner_lattice(q_, f.m).residue(flatten(f.s)), q_.d1(), q_.r2());
    return x;
}

PiCTElement W3Context::rho_w3(const MappingClassExpr& e) const { return pict(nil_of(e)); }

PiCTElement W3Context::pict_identity() const { return pict(nil_identity(q_)); }

PiCTElement W3Context::pict_mul(const PiCTElement& x, const PiCTElement& y) const {
    if (x.sig != sig_ || y.sig != sig_) throw std::invalid_argument("signature mismatch in pict_mul");
    return pict(nil_compose(q_, x.f, y.f));
}

PiCTElement W3Context::pict_inv(const PiCTElement& x) const {
    if (x.sig != sig_) throw std::invalid_argument("signature mismatch in pict_inv");
    return pict(nil_inverse(q_, x.f));
}

bool W3Context::pict_eq(const PiCTElement& x, const PiCTElement& y) const {
    if (x.sig != y.sig) throw std::invalid_argument("signature mismatch in pict_eq");
    if (x.f.m != y.f.m) return false;
    IntVec diff = flatten(x.f.s);
    IntVec fy = flatten(y.f.s);
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= fy[i];
    return inner_lattice(q_, x.f.m).contains(diff);
}

std::size_t W3Context::torelli_image_rank(const std::vector<MappingClassExpr>& exprs) const {
    IntMat gens = ad_.basis();
    for (const auto& e : exprs) gens.push_back(flatten(m_n(q_, nil_of(e))));
    return Lattice::span(ad_.dim(), gens).rank() - ad_.rank();
}

bool W3Context::in_level_w3m(const MappingClassExpr& e, int m) const { return in_level_w3m(nil_of(e), m); }

bool W3Context::in_level_w3m(const NilAuto& f, int m) const {
    if (m < 2) throw std::invalid_argument("level must be at least 2");
    const int d = q_.d1(), r2 = q_.r2();
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            Coef v = f.m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] - (i == k ? 1 : 0);
            if (v % m != 0) return false;
        }
    Lattice l2;
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = level2_.find(m);
        if (it == level2_.end()) it = level2_.emplace(m, power_level2(q_, m)).first;
        l2 = it->second;
    }
    // f(x_k) (z x_k z^-1)^-1 must lie in the power subgroup for a common z.
    HomMatrix v;
    for (int k = 0; k < d; ++k) {
        CoefVec ek = unit(d, k), mk = column(f.m, k);
        CoefVec row = f.s[static_cast<std::size_t>(k)];
        CoefVec c1 = q_.cocycle(ek, ek), c2 = q_.cocycle(mk, ek);
        for (int c = 0; c < r2; ++c) {
            auto C = static_cast<std::size_t>(c);
            row[C] = csub(cadd(row[C], c1[C]), c2[C]);
        }
        v.push_back(row);
    }
    IntMat gens = ad_.basis();
    for (int k = 0; k < d; ++k)
        for (const auto& b : l2.basis()) {
            IntVec g(static_cast<std::size_t>(d * r2));
            for (int c = 0; c < r2; ++c) g[static_cast<std::size_t>(k * r2 + c)] = b[static_cast<std::size_t>(c)];
            gens.push_back(g);
        }
    return Lattice::span(static_cast<std::size_t>(d * r2), gens).contains(flatten(v));
}

}  // namespace w3

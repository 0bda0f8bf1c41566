#include "w3/nilq.hpp"

#include <cstdlib>
#include <stdexcept>

namespace w3 {

namespace {

Coef to_coef(const Int& x) {
    if (!x.fits_slong_p()) throw OverflowError("coefficient overflow");
    return x.get_si();
}

CoefVec add(const CoefVec& a, const CoefVec& b) {
    CoefVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = cadd(a[i], b[i]);
    return r;
}

CoefVec scale(const CoefVec& a, Coef k) {
    CoefVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = cmul(a[i], k);
    return r;
}

CoefVec unit(int dim, int i) {
    CoefVec v(static_cast<std::size_t>(dim), 0);
    v[static_cast<std::size_t>(i)] = 1;
    return v;
}

}  // namespace

NilQuotient::NilQuotient(SurfaceSig sig) : sig_(sig) {
    if (!sig.valid_part()) throw std::invalid_argument("invalid signature " + sig.str());
    int d = 2 * sig.g;
    wedge_ = d * (d - 1) / 2;
    if (sig.n >= 1) {
        full_dim_ = wedge_ + sig.n - 1;
        r2_ = full_dim_;
    } else {
        full_dim_ = wedge_;
        r2_ = wedge_ - 1;
    }
}

int NilQuotient::pair_index(int i, int j) const {
    int d = d1();
    if (i < 0 || j <= i || j >= d) throw std::out_of_range("bad wedge pair");
    return i * (2 * d - i - 1) / 2 + (j - i - 1);
}

std::vector<std::string> NilQuotient::gr2_labels() const {
    std::vector<std::string> full;
    for (int i = 0; i < d1(); ++i)
        for (int j = i + 1; j < d1(); ++j) full.push_back(letter_name(i + 1, sig_.g) + "^" + letter_name(j + 1, sig_.g));
    for (int j = 1; j < sig_.n; ++j) full.push_back("u" + std::to_string(j));
    if (sig_.n == 0) full.erase(full.begin());
    return full;
}

CoefVec NilQuotient::project_full(const CoefVec& full) const {
    if (sig_.n >= 1) return full;
    Coef t12 = full.empty() ? 0 : full[0];
    CoefVec r(full.begin() + (full.empty() ? 0 : 1), full.end());
    for (int i = 1; i < sig_.g; ++i) {
        std::size_t k = static_cast<std::size_t>(pair_index(2 * i, 2 * i + 1) - 1);
        r[k] = csub(r[k], t12);
    }
    return r;
}

NilElement NilQuotient::identity() const {
    return {CoefVec(static_cast<std::size_t>(d1()), 0), CoefVec(static_cast<std::size_t>(r2_), 0)};
}

CoefVec NilQuotient::cocycle(const CoefVec& e, const CoefVec& f) const {
    CoefVec full(static_cast<std::size_t>(full_dim_), 0);
    for (int i = 0; i < d1(); ++i) {
        if (e[static_cast<std::size_t>(i)] == 0) continue;
        for (int j = 0; j < i; ++j) {
            Coef fj = f[static_cast<std::size_t>(j)];
            if (fj == 0) continue;
            auto& slot = full[static_cast<std::size_t>(pair_index(j, i))];
            slot = csub(slot, cmul(e[static_cast<std::size_t>(i)], fj));
        }
    }
    return project_full(full);
}

CoefVec NilQuotient::bracket(const CoefVec& e, const CoefVec& f) const {
    return add(cocycle(e, f), scale(cocycle(f, e), -1));
}

CoefMat NilQuotient::gr2_action(const CoefMat& m) const {
    const int d = d1();
    CoefMat out(static_cast<std::size_t>(r2_), CoefVec(static_cast<std::size_t>(r2_), 0));
    const int offset = sig_.n == 0 ? 1 : 0;
    for (int c = 0; c < r2_; ++c) {
        int fc = c + offset;
        CoefVec full(static_cast<std::size_t>(full_dim_), 0);
        if (fc < wedge_) {
            int i = 0;
            while (pair_index(i, d - 1) < fc) ++i;
            int j = fc - pair_index(i, i + 1) + i + 1;
            for (int k = 0; k < d; ++k)
                for (int l = k + 1; l < d; ++l) {
                    auto K = static_cast<std::size_t>(k), L = static_cast<std::size_t>(l);
                    auto I = static_cast<std::size_t>(i), J = static_cast<std::size_t>(j);
                    full[static_cast<std::size_t>(pair_index(k, l))] =
                        csub(cmul(m[K][I], m[L][J]), cmul(m[K][J], m[L][I]));
                }
        } else {
            full[static_cast<std::size_t>(fc)] = 1;
        }
        CoefVec col = project_full(full);
        for (int r = 0; r < r2_; ++r) out[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = col[static_cast<std::size_t>(r)];
    }
    return out;
}

NilElement NilQuotient::mul(const NilElement& a, const NilElement& b) const {
    return {add(a.e, b.e), add(add(a.t, b.t), cocycle(a.e, b.e))};
}

NilElement NilQuotient::inv(const NilElement& a) const {
    return {scale(a.e, -1), add(scale(a.t, -1), cocycle(a.e, a.e))};
}

NilElement NilQuotient::pow(const NilElement& a, Coef k) const {
    return {scale(a.e, k), add(scale(a.t, k), scale(cocycle(a.e, a.e), binom2(k)))};
}

NilElement NilQuotient::commutator(const NilElement& a, const NilElement& b) const {
    return {CoefVec(static_cast<std::size_t>(d1()), 0), bracket(a.e, b.e)};
}

NilElement NilQuotient::generator(Letter x) const {
    int k = std::abs(x);
    const int d = d1();
    NilElement r = identity();
    if (k >= 1 && k <= d) {
        r.e[static_cast<std::size_t>(k - 1)] = 1;
    } else if (k > d && k <= d + sig_.n) {
        int j = k - d;
        if (j < sig_.n) {
            r.t[static_cast<std::size_t>(wedge_ + j - 1)] = 1;
        } else {
            // u_n = -(omega + u_1 + ... + u_{n-1})
            CoefVec full(static_cast<std::size_t>(full_dim_), 0);
            for (int i = 0; i < sig_.g; ++i) full[static_cast<std::size_t>(pair_index(2 * i, 2 * i + 1))] = -1;
            for (int i = wedge_; i < full_dim_; ++i) full[static_cast<std::size_t>(i)] = -1;
            r.t = project_full(full);
        }
    } else {
        throw std::out_of_range("letter outside the alphabet of " + sig_.str());
    }
    return x > 0 ? r : inv(r);
}

NilElement NilQuotient::normal_form(const Word& w) const {
    NilElement r = identity();
    for (Letter x : w.letters()) r = mul(r, generator(x));
    return r;
}

namespace {

// Applies f with precomputed gr2 action g2.
NilElement apply_with(const NilQuotient& q, const NilAuto& f, const CoefMat& g2, const NilElement& x) {
    NilElement r = q.identity();
    for (int k = 0; k < q.d1(); ++k) {
        Coef ek = x.e[static_cast<std::size_t>(k)];
        if (ek == 0) continue;
        NilElement img{CoefVec(static_cast<std::size_t>(q.d1())), f.s[static_cast<std::size_t>(k)]};
        for (int i = 0; i < q.d1(); ++i) img.e[static_cast<std::size_t>(i)] = f.m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
        r = q.mul(r, q.pow(img, ek));
    }
    bool central = false;
    for (Coef c : x.t) central = central || c != 0;
    if (central) r.t = add(r.t, coef_apply(g2, x.t));
    return r;
}

}  // namespace

NilAuto nil_identity(const NilQuotient& q) {
    NilAuto f;
    f.m = coef_identity(static_cast<std::size_t>(q.d1()));
    f.s.assign(static_cast<std::size_t>(q.d1()), CoefVec(static_cast<std::size_t>(q.r2()), 0));
    return f;
}

NilElement nil_apply(const NilQuotient& q, const NilAuto& f, const NilElement& x) {
    return apply_with(q, f, q.gr2_action(f.m), x);
}

NilAuto nil_compose(const NilQuotient& q, const NilAuto& f, const NilAuto& g) {
    CoefMat g2 = q.gr2_action(f.m);
    NilAuto h;
    h.m = coef_mul(f.m, g.m);
    for (int k = 0; k < q.d1(); ++k) {
        NilElement gx{CoefVec(static_cast<std::size_t>(q.d1())), g.s[static_cast<std::size_t>(k)]};
        for (int i = 0; i < q.d1(); ++i) gx.e[static_cast<std::size_t>(i)] = g.m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
        h.s.push_back(apply_with(q, f, g2, gx).t);
    }
    return h;
}

NilAuto nil_inverse(const NilQuotient& q, const NilAuto& f) {
    const std::size_t d = static_cast<std::size_t>(q.d1());
    CoefMat j = symplectic_form(q.sig().g), mt(d, CoefVec(d));
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) mt[a][b] = f.m[b][a];
    CoefMat minv = coef_mul(coef_mul(j, mt), j);
    for (auto& row : minv)
        for (auto& x : row) x = -x;
    if (coef_mul(f.m, minv) != coef_identity(d)) throw std::invalid_argument("gr1 matrix is not symplectic");
    NilAuto lin{f.m, f.s};
    CoefMat g2 = q.gr2_action(f.m), g2inv = q.gr2_action(minv);
    NilAuto out;
    out.m = minv;
    for (std::size_t k = 0; k < d; ++k) {
        NilElement pre{CoefVec(d), CoefVec(static_cast<std::size_t>(q.r2()), 0)};
        for (std::size_t i = 0; i < d; ++i) pre.e[i] = minv[i][k];
        CoefVec tau = apply_with(q, lin, g2, pre).t;
        out.s.push_back(scale(coef_apply(g2inv, tau), -1));
    }
    return out;
}

NilAuto nil_pow(const NilQuotient& q, const NilAuto& f, long long k) {
    NilAuto base = k < 0 ? nil_inverse(q, f) : f;
    unsigned long long e = k < 0 ? 0ULL - static_cast<unsigned long long>(k) : static_cast<unsigned long long>(k);
    NilAuto acc = nil_identity(q);
    while (e) {
        if (e & 1) acc = nil_compose(q, acc, base);
        e >>= 1;
        if (e) base = nil_compose(q, base, base);
    }
    return acc;
}

NilAuto nil_inner(const NilQuotient& q, const CoefVec& ez) {
    NilAuto f = nil_identity(q);
    for (int k = 0; k < q.d1(); ++k) f.s[static_cast<std::size_t>(k)] = q.bracket(ez, unit(q.d1(), k));
    return f;
}

NilAuto induced_auto_map(const GenImageMap& f, const NilQuotient& q) {
    if (f.rank() != q.sig().rank()) throw std::invalid_argument("map rank does not match quotient signature");
    NilAuto a;
    const std::size_t d = static_cast<std::size_t>(q.d1());
    a.m.assign(d, CoefVec(d, 0));
    for (std::size_t k = 0; k < d; ++k) {
        NilElement x = q.normal_form(f.image(static_cast<int>(k) + 1));
        for (std::size_t i = 0; i < d; ++i) a.m[i][k] = x.e[i];
        a.s.push_back(x.t);
    }
    return a;
}

NilAuto induced_auto(const AutoOnPi& a, const NilQuotient& q) {
    if (a.sig != q.sig()) throw std::invalid_argument("signature mismatch: " + a.sig.str() + " vs " + q.sig().str());
    return induced_auto_map(a.map, q);
}

Lattice power_subgroup_lattice(const NilQuotient& q, int m) {
    if (m < 2) throw std::invalid_argument("power exponent must be at least 2");
    const int d = q.d1(), r2 = q.r2();
    const std::size_t dim = static_cast<std::size_t>(d + r2);
    auto pack = [&](const CoefVec& e, const CoefVec& t) {
        IntVec v;
        for (Coef x : e) v.emplace_back(static_cast<long>(x));
        for (Coef x : t) v.emplace_back(static_cast<long>(x));
        return v;
    };
    IntMat gens;
    std::vector<CoefVec> es;
    for (int i = 0; i < d; ++i) {
        es.push_back(unit(d, i));
        for (int j = i + 1; j < d; ++j) es.push_back(add(unit(d, i), unit(d, j)));
    }
    for (const auto& e : es) {
        NilElement z = q.pow({e, CoefVec(static_cast<std::size_t>(r2), 0)}, m);
        gens.push_back(pack(z.e, z.t));
    }
    for (int c = 0; c < r2; ++c) gens.push_back(pack(CoefVec(static_cast<std::size_t>(d), 0), scale(unit(r2, c), m)));
    Lattice l = Lattice::span(dim, gens);
    // Close under the group law: the products of basis elements differ from their
    // sums by central cocycle values.
    for (;;) {
        IntMat extra = l.basis();
        std::vector<CoefVec> be;
        for (const auto& row : l.basis()) {
            CoefVec e;
            for (int i = 0; i < d; ++i) e.push_back(to_coef(row[static_cast<std::size_t>(i)]));
            be.push_back(e);
        }
        for (const auto& a : be)
            for (const auto& b : be) extra.push_back(pack(CoefVec(static_cast<std::size_t>(d), 0), q.cocycle(a, b)));
        Lattice next = Lattice::span(dim, extra);
        if (next == l) return l;
        l = next;
    }
}

Lattice power_level2(const NilQuotient& q, int m) {
    Lattice l = power_subgroup_lattice(q, m);
    const std::size_t d = static_cast<std::size_t>(q.d1());
    IntMat rows;
    auto piv = l.pivots();
    for (std::size_t i = 0; i < l.rank(); ++i)
        if (piv[i] >= d) rows.emplace_back(l.basis()[i].begin() + static_cast<std::ptrdiff_t>(d), l.basis()[i].end());
    return Lattice::span(static_cast<std::size_t>(q.r2()), rows);
}

NilElement project_to_closed(const NilQuotient& src, const NilQuotient& dst, const NilElement& x) {
    if (src.sig().n != 1 || dst.sig().n != 0 || src.sig().g != dst.sig().g)
        throw std::invalid_argument("project_to_closed needs (g,1) -> (g,0)");
    return {x.e, dst.project_full(x.t)};
}

std::string to_string(const NilElement& x) {
    auto vs = [](const CoefVec& v) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
        return s + "]";
    };
    return "e=" + vs(x.e) + " t=" + vs(x.t);
}

}  // namespace w3

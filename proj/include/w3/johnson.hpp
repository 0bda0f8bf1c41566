// Johnson homomorphisms, Hom_ext classes, the image of rho_{W^3} as
// (Sp matrix, outer class) pairs, Torelli and level membership.
#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "w3/lattice.hpp"
#include "w3/nilq.hpp"
#include "w3/surface.hpp"

namespace w3 {

// Rows indexed by x_1..x_{2g}, columns by the gr2 basis.
using HomMatrix = std::vector<CoefVec>;

IntVec flatten(const HomMatrix& h);
HomMatrix unflatten(const IntVec& v, int rows, int cols);

struct NotTorelliError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Row k is the gr2 part of f(x_k) x_k^-1. Throws NotTorelliError unless f acts
// trivially on gr1.
HomMatrix m_n(const NilQuotient& q, const NilAuto& f);
// Spanned by x -> [h, x] for h = x_1..x_{2g}, in flattened Hom coordinates.
Lattice ad_lattice(const NilQuotient& q);
// Lattice of t-part changes produced by inner automorphisms after a map with
// gr1 matrix m; equals ad_lattice when m is the identity.
Lattice inner_lattice(const NilQuotient& q, const CoefMat& m);

struct HomExtClass {
    IntVec rep;  // canonical residue modulo the ad lattice
    bool is_zero() const { return w3::is_zero(rep); }
    bool operator==(const HomExtClass&) const = default;
};

struct PiCTElement {
    SurfaceSig sig;
    NilAuto f;  // t-parts reduced modulo inner_lattice(f.m)
    const CoefMat& sp() const { return f.m; }
    bool operator==(const PiCTElement&) const = default;
};

// Per-signature state: the generator table, the quotient, the ad lattice and a
// cache of per-term nilpotent actions. Safe for concurrent use.
class W3Context {
public:
    W3Context(SurfaceSig sig, const std::string& data_dir = default_data_dir());

    SurfaceSig sig() const { return sig_; }
    const GeneratorTable& table() const { return *table_; }
    const NilQuotient& quotient() const { return q_; }
    const Lattice& ad() const { return ad_; }

    // Composes cached per-term actions; no free-group words are formed.
    NilAuto nil_of(const MappingClassExpr& e) const;
    CoefMat homology(const MappingClassExpr& e) const { return nil_of(e).m; }
    bool is_torelli(const MappingClassExpr& e) const;
    // Throws NotTorelliError for non-Torelli input.
    HomExtClass johnson(const MappingClassExpr& e) const;
    HomExtClass hom_ext(const HomMatrix& h) const;
    PiCTElement rho_w3(const MappingClassExpr& e) const;
    std::size_t torelli_image_rank(const std::vector<MappingClassExpr>& exprs) const;
    bool in_level_w3m(const MappingClassExpr& e, int m) const;
    bool in_level_w3m(const NilAuto& f, int m) const;

    PiCTElement pict(const NilAuto& f) const;
    PiCTElement pict_identity() const;
    PiCTElement pict_mul(const PiCTElement& x, const PiCTElement& y) const;
    PiCTElement pict_inv(const PiCTElement& x) const;
    bool pict_eq(const PiCTElement& x, const PiCTElement& y) const;

private:
    NilAuto unit_nil(const Term& t) const;

    SurfaceSig sig_;
    std::shared_ptr<const GeneratorTable> table_;
    NilQuotient q_;
    Lattice ad_;
    mutable std::mutex mu_;
    mutable std::map<std::string, NilAuto> cache_;
    mutable std::map<int, Lattice> level2_;
};

// Expected Torelli-image rank C(2g,3) + 2g(n-1) for g >= 2, 2(n-1) for g = 1.
long long expected_torelli_rank(SurfaceSig sig);

}  // namespace w3

// The 2-step weighted nilpotent quotient Q = Pi_{g,n} / W^3 Pi.
//
// Elements are (e, t): e in Z^{2g} are exponents of the ordered normal form
// x1^e1 ... x_{2g}^e_{2g}, t in Z^{r2} is the central part. For n >= 1 the gr2
// basis is x_i^x_j (i<j, lexicographic) followed by u1..u_{n-1}; u_n is
// eliminated through the relator. For n = 0 the basis is x_i^x_j with (1,2)
// omitted, using x1^x2 = -(x3^x4 + ... + x_{2g-1}^x_{2g}).
#pragma once

#include <string>
#include <vector>

#include "w3/coef.hpp"
#include "w3/lattice.hpp"
#include "w3/surface.hpp"

namespace w3 {

struct NilElement {
    CoefVec e;
    CoefVec t;
    bool operator==(const NilElement&) const = default;
};

class NilQuotient {
public:
    explicit NilQuotient(SurfaceSig sig);

    SurfaceSig sig() const { return sig_; }
    int d1() const { return 2 * sig_.g; }
    int r2() const { return r2_; }
    // Coordinate of x_i^x_j (0-based, i<j) in the full wedge block.
    int pair_index(int i, int j) const;
    std::vector<std::string> gr2_labels() const;

    NilElement identity() const;
    NilElement generator(Letter x) const;  // image of a presentation letter
    NilElement mul(const NilElement& a, const NilElement& b) const;
    NilElement inv(const NilElement& a) const;
    NilElement pow(const NilElement& a, Coef k) const;
    NilElement commutator(const NilElement& a, const NilElement& b) const;
    NilElement normal_form(const Word& w) const;

    // Bilinear collection cocycle: (e,0)(e',0) = (e+e', c(e,e')).
    CoefVec cocycle(const CoefVec& e, const CoefVec& f) const;
    // Commutator form: [(e,.),(f,.)] = (0, B(e,f)).
    CoefVec bracket(const CoefVec& e, const CoefVec& f) const;
    // Induced action of a gr1 matrix (column k = image of x_k) on gr2.
    CoefMat gr2_action(const CoefMat& m) const;

    // Sends a vector in full wedge coordinates (plus u block when n >= 1) to gr2.
    CoefVec project_full(const CoefVec& full) const;
    int full_dim() const { return full_dim_; }

private:
    SurfaceSig sig_;
    int r2_ = 0;
    int full_dim_ = 0;
    int wedge_ = 0;
};

// Automorphism of Q, stored as the gr1 matrix and the t-parts of the images of
// x_1..x_{2g}. Puncture classes are fixed on gr2.
struct NilAuto {
    CoefMat m;               // column k = gr1 image of x_k
    std::vector<CoefVec> s;  // s[k] = t-part of the image of x_k
    bool operator==(const NilAuto&) const = default;
};

NilAuto nil_identity(const NilQuotient& q);
NilElement nil_apply(const NilQuotient& q, const NilAuto& f, const NilElement& x);
// f after g.
NilAuto nil_compose(const NilQuotient& q, const NilAuto& f, const NilAuto& g);
NilAuto nil_inverse(const NilQuotient& q, const NilAuto& f);
NilAuto nil_pow(const NilQuotient& q, const NilAuto& f, long long k);
// x -> z x z^-1.
NilAuto nil_inner(const NilQuotient& q, const CoefVec& ez);
// Throws std::invalid_argument when a's signature differs from q's.
NilAuto induced_auto(const AutoOnPi& a, const NilQuotient& q);
NilAuto induced_auto_map(const GenImageMap& f, const NilQuotient& q);

// Image of Pi^m W^3 / W^3 as a lattice in the (e, t) coordinates.
Lattice power_subgroup_lattice(const NilQuotient& q, int m);
// Its intersection with the central coordinates, as a lattice in Z^{r2}.
Lattice power_level2(const NilQuotient& q, int m);

// (g,1) element to (g,0): substitutes u1 = -omega.
NilElement project_to_closed(const NilQuotient& src, const NilQuotient& dst, const NilElement& x);

std::string to_string(const NilElement& x);

}  // namespace w3

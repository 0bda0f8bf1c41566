// Fixed-width coefficients for the nilpotent quotient, with overflow trapping.
// Lattice work converts to arbitrary precision (lattice.hpp).
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "w3/lattice.hpp"

namespace w3 {

using Coef = std::int64_t;
using CoefVec = std::vector<Coef>;
using CoefMat = std::vector<CoefVec>;  // row-major

struct OverflowError : std::overflow_error {
    using std::overflow_error::overflow_error;
};

inline Coef cadd(Coef a, Coef b) {
    Coef r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("coefficient overflow");
    return r;
}
inline Coef cmul(Coef a, Coef b) {
    Coef r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("coefficient overflow");
    return r;
}
inline Coef csub(Coef a, Coef b) { return cadd(a, cmul(-1, b)); }
inline Coef binom2(Coef k) { return k % 2 == 0 ? cmul(k / 2, k - 1) : cmul(k, (k - 1) / 2); }

inline IntVec to_int(const CoefVec& v) {
    IntVec r;
    r.reserve(v.size());
    for (Coef x : v) r.emplace_back(static_cast<long>(x));
    return r;
}

inline CoefMat coef_identity(std::size_t n) {
    CoefMat m(n, CoefVec(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline CoefMat coef_mul(const CoefMat& a, const CoefMat& b) {
    std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    CoefMat c(n, CoefVec(m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (std::size_t j = 0; j < m; ++j) c[i][j] = cadd(c[i][j], cmul(a[i][l], b[l][j]));
        }
    return c;
}

inline CoefVec coef_apply(const CoefMat& a, const CoefVec& v) {
    CoefVec r(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            if (v[j] != 0) r[i] = cadd(r[i], cmul(a[i][j], v[j]));
    return r;
}

}  // namespace w3

#include "w3/lattice.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace w3 {

namespace {

// Floor division with nonnegative remainder for a positive divisor.
Int floor_div(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

void row_axpy(IntVec& dst, const Int& k, const IntVec& src) {
    if (k == 0) return;
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += k * src[j];
}

// Replace (p, q) by (s p + t q, (a/g) q - (b/g) p) where a = p[c], b = q[c], g = gcd.
void combine(IntVec& p, IntVec& q, std::size_t c) {
    Int a = p[c], b = q[c], g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    Int ag = a / g, bg = b / g;
    IntVec np(p.size()), nq(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) {
        np[j] = s * p[j] + t * q[j];
        nq[j] = ag * q[j] - bg * p[j];
    }
    p.swap(np);
    q.swap(nq);
}

struct Reducer {
    IntMat a;
    IntMat u;
    bool track = false;
    std::size_t cols = 0;

    void comb(std::size_t i, std::size_t k, std::size_t c) {
        if (!track) {
            combine(a[i], a[k], c);
            return;
        }
        // Apply the same unimodular step to both the data and the transform rows.
        Int x = a[i][c], y = a[k][c], g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
        Int xg = x / g, yg = y / g;
        auto step = [&](IntVec& p, IntVec& q) {
            IntVec np(p.size()), nq(p.size());
            for (std::size_t j = 0; j < p.size(); ++j) {
                np[j] = s * p[j] + t * q[j];
                nq[j] = xg * q[j] - yg * p[j];
            }
            p.swap(np);
            q.swap(nq);
        };
        step(a[i], a[k]);
        step(u[i], u[k]);
    }
    void axpy(std::size_t dst, const Int& k, std::size_t src) {
        row_axpy(a[dst], k, a[src]);
        if (track) row_axpy(u[dst], k, u[src]);
    }
    void negate(std::size_t i) {
        for (auto& x : a[i]) x = -x;
        if (track)
            for (auto& x : u[i]) x = -x;
    }
    void swap_rows(std::size_t i, std::size_t k) {
        std::swap(a[i], a[k]);
        if (track) std::swap(u[i], u[k]);
    }

    std::size_t run() {
        std::size_t r = 0;
        for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
            std::size_t piv = a.size();
            for (std::size_t i = r; i < a.size(); ++i)
                if (a[i][c] != 0) {
                    piv = i;
                    break;
                }
            if (piv == a.size()) continue;
            swap_rows(r, piv);
            for (std::size_t i = r + 1; i < a.size(); ++i)
                if (a[i][c] != 0) comb(r, i, c);
            if (a[r][c] < 0) negate(r);
            for (std::size_t i = 0; i < r; ++i)
                if (a[i][c] != 0) axpy(i, -floor_div(a[i][c], a[r][c]), r);
            ++r;
        }
        return r;
    }
};

}  // namespace

IntMat hnf(IntMat rows) {
    if (rows.empty()) return {};
    Reducer red;
    red.cols = rows[0].size();
    red.a = std::move(rows);
    std::size_t r = red.run();
    red.a.resize(r);
    return red.a;
}

HnfTransform hnf_with_transform(const IntMat& rows) {
    HnfTransform out;
    if (rows.empty()) return out;
    Reducer red;
    red.cols = rows[0].size();
    red.a = rows;
    red.u = identity_matrix(rows.size());
    red.track = true;
    out.rank = red.run();
    out.h = std::move(red.a);
    out.u = std::move(red.u);
    return out;
}

std::size_t matrix_rank(const IntMat& rows) { return hnf(rows).size(); }

std::vector<Int> smith_invariants(IntMat m) {
    std::vector<Int> out;
    if (m.empty()) return out;
    std::size_t R = m.size(), C = m[0].size();
    for (std::size_t t = 0; t < std::min(R, C); ++t) {
        for (;;) {
            // Smallest nonzero entry of the trailing block goes to (t, t).
            std::size_t bi = R, bj = C;
            for (std::size_t i = t; i < R; ++i)
                for (std::size_t j = t; j < C; ++j)
                    if (m[i][j] != 0 && (bi == R || abs(m[i][j]) < abs(m[bi][bj]))) {
                        bi = i;
                        bj = j;
                    }
            if (bi == R) return out;
            std::swap(m[t], m[bi]);
            for (auto& row : m) std::swap(row[t], row[bj]);
            bool clean = true;
            for (std::size_t i = t + 1; i < R; ++i) {
                if (m[i][t] == 0) continue;
                Int q = m[i][t] / m[t][t];
                row_axpy(m[i], -q, m[t]);
                if (m[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < C; ++j) {
                if (m[t][j] == 0) continue;
                Int q = m[t][j] / m[t][t];
                for (std::size_t i = 0; i < R; ++i) m[i][j] -= q * m[i][t];
                if (m[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            std::size_t bad = R;
            for (std::size_t i = t + 1; i < R && bad == R; ++i)
                for (std::size_t j = t + 1; j < C; ++j)
                    if (m[i][j] % m[t][t] != 0) {
                        bad = i;
                        break;
                    }
            if (bad == R) break;
            row_axpy(m[t], Int(1), m[bad]);
        }
        out.push_back(abs(m[t][t]));
    }
    return out;
}

IntMat transpose(const IntMat& m, std::size_t cols) {
    IntMat t(cols, IntVec(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) t[j][i] = m[i][j];
    return t;
}

IntMat mat_mul(const IntMat& a, const IntMat& b) {
    if (a.empty()) return {};
    std::size_t n = b.empty() ? 0 : b[0].size();
    IntMat c(a.size(), IntVec(n));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) {
            if (a[i][k] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

IntMat identity_matrix(std::size_t n) {
    IntMat m(n, IntVec(n));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

IntMat integer_kernel(const IntMat& a, std::size_t cols) {
    if (a.empty()) return identity_matrix(cols);
    // Row-reduce A^T with transform U; rows of U beyond the rank span the kernel.
    HnfTransform t = hnf_with_transform(transpose(a, cols));
    IntMat k;
    for (std::size_t i = t.rank; i < t.u.size(); ++i) k.push_back(t.u[i]);
    return k;
}

Lattice Lattice::span(std::size_t dim, const IntMat& gens) {
    Lattice l(dim);
    IntMat rows;
    for (const auto& v : gens) {
        if (v.size() != dim) throw std::invalid_argument("lattice generator dimension mismatch");
        if (!is_zero(v)) rows.push_back(v);
    }
    l.basis_ = hnf(std::move(rows));
    return l;
}

Lattice Lattice::scaled_identity(std::size_t dim, const Int& m) {
    IntMat rows = identity_matrix(dim);
    for (std::size_t i = 0; i < dim; ++i) rows[i][i] = m;
    return span(dim, rows);
}

std::vector<std::size_t> Lattice::pivots() const {
    std::vector<std::size_t> p;
    for (const auto& row : basis_) {
        std::size_t c = 0;
        while (row[c] == 0) ++c;
        p.push_back(c);
    }
    return p;
}

IntVec Lattice::residue(const IntVec& v) const {
    if (v.size() != dim_) throw std::invalid_argument("dimension mismatch");
    IntVec r = v;
    auto piv = pivots();
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        std::size_t c = piv[i];
        if (r[c] != 0) row_axpy(r, -floor_div(r[c], basis_[i][c]), basis_[i]);
    }
    return r;
}

bool Lattice::contains(const IntVec& v) const { return is_zero(residue(v)); }

bool Lattice::contains(const Lattice& other) const {
    if (other.dim_ != dim_) return false;
    for (const auto& row : other.basis_)
        if (!contains(row)) return false;
    return true;
}

Lattice Lattice::saturation() const {
    if (basis_.empty()) return Lattice(dim_);
    IntMat k = integer_kernel(basis_, dim_);
    if (k.empty()) return span(dim_, identity_matrix(dim_));
    return span(dim_, integer_kernel(k, dim_));
}

bool Lattice::is_saturated() const { return saturation() == *this; }

Lattice Lattice::operator+(const Lattice& other) const {
    if (other.dim_ != dim_) throw std::invalid_argument("dimension mismatch");
    IntMat rows = basis_;
    rows.insert(rows.end(), other.basis_.begin(), other.basis_.end());
    return span(dim_, rows);
}

IntVec vec_add(const IntVec& a, const IntVec& b) {
    IntVec c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

IntVec vec_scale(const IntVec& a, const Int& k) {
    IntVec c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] * k;
    return c;
}

bool is_zero(const IntVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

std::string to_string(const IntVec& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += v[i].get_str();
    }
    return s + "]";
}

}  // namespace w3

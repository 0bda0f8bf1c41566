// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "w3/dsl.hpp"
#include "w3/johnson.hpp"
#include "w3/nilq.hpp"
#include "w3/strata.hpp"
#include "w3/surface.hpp"

using namespace w3;

namespace {

const std::string kData = W3_DATA_DIR;

long long choose(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Rank of the Johnson image computed from scratch: m_n rows stacked with the
// generators of the ad lattice, minus the rank of the ad lattice.
std::size_t image_rank(const W3Context& c, const std::vector<MappingClassExpr>& exprs) {
    const NilQuotient& q = c.quotient();
    IntMat ad_rows;
    for (int h = 0; h < q.d1(); ++h) {
        IntVec row;
        for (int k = 0; k < q.d1(); ++k) {
            CoefVec eh(static_cast<std::size_t>(q.d1()), 0), ek(static_cast<std::size_t>(q.d1()), 0);
            eh[static_cast<std::size_t>(h)] = 1;
            ek[static_cast<std::size_t>(k)] = 1;
            for (Coef x : q.bracket(eh, ek)) row.emplace_back(static_cast<long>(x));
        }
        ad_rows.push_back(row);
    }
    IntMat all = ad_rows;
    for (const auto& e : exprs) all.push_back(flatten(m_n(q, c.nil_of(e))));
    return matrix_rank(all) - matrix_rank(ad_rows);
}

IntMat diag(std::size_t n, const std::vector<long long>& d) {
    IntMat m(n, IntVec(n));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = static_cast<long>(d[i]);
    return m;
}

// Depth-first connectivity of the graph with some edges removed.
bool connected_without(const DualGraph& g, const std::set<int>& cut) {
    std::vector<int> seen(g.vertices.size(), 0), stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
            if (cut.count(static_cast<int>(e))) continue;
            int a = g.edges[e].v1, b = g.edges[e].v2;
            int w = a == v ? b : (b == v ? a : -1);
            if (w >= 0 && !seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                stack.push_back(w);
            }
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](int s) { return s != 0; });
}

// Genus and puncture count of the component containing `start` after the cut.
std::pair<int, int> side_of(const DualGraph& g, const std::set<int>& cut, int start) {
    std::vector<int> seen(g.vertices.size(), 0), stack{start};
    seen[static_cast<std::size_t>(start)] = 1;
    int genus = 0, punct = 0, nv = 0, ne = 0;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        ++nv;
        genus += g.vertices[static_cast<std::size_t>(v)].genus;
        punct += static_cast<int>(g.vertices[static_cast<std::size_t>(v)].punctures.size());
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
            if (cut.count(static_cast<int>(e))) continue;
            int a = g.edges[e].v1, b = g.edges[e].v2;
            int w = a == v ? b : (b == v ? a : -1);
            if (w >= 0 && !seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                stack.push_back(w);
            }
        }
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        if (cut.count(static_cast<int>(e))) continue;
        if (seen[static_cast<std::size_t>(g.edges[e].v1)]) ++ne;
    }
    return {genus + ne - nv + 1, punct};
}

// The kernel rows written out directly from an independent classification.
Lattice row_oracle(const DualGraph& g, const std::string& k, int m) {
    const int ne = static_cast<int>(g.edges.size());
    const long long m2 = m / std::gcd(m, 2), m6 = m / std::gcd(m, 6);
    std::vector<int> n, s, s1;
    std::vector<std::pair<int, int>> p, pun;
    for (int e = 0; e < ne; ++e) {
        if (connected_without(g, {e})) {
            n.push_back(e);
            continue;
        }
        s.push_back(e);
        for (int end : {g.edges[static_cast<std::size_t>(e)].v1, g.edges[static_cast<std::size_t>(e)].v2}) {
            auto [gen, pc] = side_of(g, {e}, end);
            if (gen == 1 && pc == 0) {
                s1.push_back(e);
                break;
            }
        }
    }
    for (std::size_t i = 0; i < n.size(); ++i)
        for (std::size_t j = i + 1; j < n.size(); ++j) {
            std::set<int> cut{n[i], n[j]};
            if (connected_without(g, cut)) continue;
            p.push_back({n[i], n[j]});
            const auto& edge = g.edges[static_cast<std::size_t>(n[i])];
            if (side_of(g, cut, edge.v1).second == 0 || side_of(g, cut, edge.v2).second == 0) pun.push_back({n[i], n[j]});
        }
    IntMat rows;
    auto unit = [&](int e, long long c) {
        IntVec v(static_cast<std::size_t>(ne));
        v[static_cast<std::size_t>(e)] = static_cast<long>(c);
        rows.push_back(v);
    };
    auto pair = [&](std::pair<int, int> pr, long long c) {
        IntVec v(static_cast<std::size_t>(ne));
        v[static_cast<std::size_t>(pr.first)] = static_cast<long>(c);
        v[static_cast<std::size_t>(pr.second)] = static_cast<long>(-c);
        rows.push_back(v);
    };
    if (k == "4+") {
        for (int e = 0; e < ne; ++e) unit(e, m);
        return Lattice::span(static_cast<std::size_t>(ne), rows);
    }
    for (int e : n) unit(e, m);
    if (k == "2") {
        for (auto pr : p) pair(pr, 1);
        for (int e : s) unit(e, 1);
    } else if (k == "3") {
        for (auto pr : pun) pair(pr, m2);
        for (int e : s) unit(e, 1);
    } else {
        if (m % 4 == 2)
            for (auto pr : p) pair(pr, m2);
        for (int e : s) unit(e, m2);
        for (int e : s1) unit(e, m6);
    }
    return Lattice::span(static_cast<std::size_t>(ne), rows);
}

MappingClassExpr random_expr(std::mt19937_64& rng, const GeneratorTable& t, int max_len) {
    auto names = t.curve_names();
    MappingClassExpr e;
    int len = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_len));
    for (int i = 0; i < len; ++i) {
        Term term;
        term.a = names[rng() % names.size()];
        term.exp = rng() % 2 ? 1 : -1;
        e.terms.push_back(term);
    }
    return e;
}

MappingClassExpr cat(MappingClassExpr x, const MappingClassExpr& y) {
    x.terms.insert(x.terms.end(), y.terms.begin(), y.terms.end());
    return x;
}

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << title;
    if (!o.detail.empty()) std::cout << " [" << o.detail << "]";
    std::cout << std::endl;
}

}  // namespace

int main() {
    report(1, "Torelli image ranks", [] {
        Outcome o;
        const std::vector<std::pair<SurfaceSig, long long>> want{{{1, 2}, 2}, {{2, 0}, 0}, {{2, 1}, 4}, {{2, 2}, 8}, {{3, 0}, 14}, {{3, 1}, 20}};
        for (auto [s, r] : want) {
            long long formula = s.g >= 2 ? choose(2 * s.g, 3) + 2LL * s.g * (s.n - 1) : 2LL * (s.n - 1);
            W3Context c(s, kData);
            auto list = load_expr_list(torelli_list_path(s, kData));
            long long got = static_cast<long long>(image_rank(c, list.exprs));
            long long lib = static_cast<long long>(c.torelli_image_rank(list.exprs));
            o.detail += (o.detail.empty() ? "" : " ") + s.str() + ":" + std::to_string(got);
            o.pass = o.pass && got == r && lib == r && formula == r;
        }
        return o;
    });

    report(2, "separating twists lie in the kernel", [] {
        Outcome o;
        int count = 0;
        for (SurfaceSig s : std::vector<SurfaceSig>{{2, 0}, {2, 1}, {2, 2}, {3, 0}, {3, 1}}) {
            W3Context c(s, kData);
            for (int k = 0; k <= s.g; ++k) {
                MappingClassExpr e;
                try {
                    e = separating_twist(s, k);
                } catch (const std::invalid_argument&) {
                    continue;
                }
                ++count;
                bool ok = c.pict_eq(c.rho_w3(e), c.pict_identity()) && c.johnson(e).is_zero();
                if (!ok) o.detail += s.str() + " SEP[" + std::to_string(k) + "] ";
                o.pass = o.pass && ok;
            }
        }
        if (o.pass) o.detail = std::to_string(count) + " macros";
        return o;
    });

    report(3, "power subgroup level-2 structure", [] {
        Outcome o;
        for (int g : {2, 3})
            for (int n : {0, 1}) {
                NilQuotient q({g, n});
                const std::size_t r2 = static_cast<std::size_t>(q.r2());
                for (int m : {2, 3, 4, 5, 6, 7, 12}) {
                    long long scale = m % 2 ? m : m / 2;
                    Lattice want = Lattice::span(r2, diag(r2, std::vector<long long>(r2, scale)));
                    Lattice got = power_level2(q, m);
                    // Level-1 part of the full lattice is m Z^{2g}.
                    Lattice full = power_subgroup_lattice(q, m);
                    bool gr1 = true;
                    for (std::size_t i = 0; i < static_cast<std::size_t>(q.d1()); ++i)
                        gr1 = gr1 && full.basis()[i][i] == m;
                    if (!(got == want) || !gr1) {
                        o.pass = false;
                        o.detail += SurfaceSig{g, n}.str() + "@m=" + std::to_string(m) + " ";
                    }
                }
            }
        return o;
    });

    report(4, "kernel lattice rows, stable row and refinement", [] {
        Outcome o;
        std::vector<std::string> files;
        for (const auto& p : std::filesystem::directory_iterator(kData + "/graphs"))
            if (p.path().extension() == ".graph") files.push_back(p.path().string());
        std::sort(files.begin(), files.end());
        std::size_t seen_n = 0, seen_s = 0, seen_s1 = 0, seen_p = 0, seen_pun = 0;
        std::string rows_bad, stable_bad, chain_bad;
        for (const auto& f : files) {
            std::string name = std::filesystem::path(f).stem().string();
            DualGraph g = load_graph(f);
            EdgeClassification c = classify_edges(g);
            seen_n += c.n.size();
            seen_s += c.s.size();
            seen_s1 += c.s1.size();
            seen_p += c.p.size();
            seen_pun += c.p_un.size();
            for (int m = 2; m <= 12; ++m) {
                for (const char* k : {"2", "3", "4"})
                    if (!(kernel_lattice(g, parse_kernel_spec(k, m)) == row_oracle(g, k, m))) rows_bad += name + "/k" + k + "@" + std::to_string(m) + " ";
                if (std::gcd(m, 6) == 1) {
                    Lattice l = kernel_lattice(g, parse_kernel_spec("4+", m));
                    if (!(l == row_oracle(g, "4+", m))) stable_bad += name + "@" + std::to_string(m) + " ";
                }
                Lattice l2 = kernel_lattice(g, parse_kernel_spec("2", m));
                Lattice l3 = kernel_lattice(g, parse_kernel_spec("3", m));
                Lattice l4 = kernel_lattice(g, parse_kernel_spec("4", m));
                if (!l2.contains(l3) || !l3.contains(l4)) chain_bad += name + "@m=" + std::to_string(m) + " ";
            }
        }
        bool coverage = files.size() >= 10 && seen_n && seen_s && seen_s1 && seen_p && seen_pun;
        o.pass = coverage && rows_bad.empty() && stable_bad.empty() && chain_bad.empty();
        std::ostringstream d;
        d << files.size() << " graphs; rows " << (rows_bad.empty() ? "ok" : "differ: " + rows_bad) << "; mE " << (stable_bad.empty() ? "ok" : "differs: " + stable_bad)
          << "; refinement " << (chain_bad.empty() ? "ok" : "fails: " + chain_bad);
        if (!coverage) d << "; corpus coverage incomplete";
        o.detail = d.str();
        return o;
    });

    report(5, "ad lattice is primitive", [] {
        Outcome o;
        for (int g = 1; g <= 4; ++g)
            for (int n = 0; n <= 3; ++n) {
                if (!SurfaceSig{g, n}.valid_top()) continue;
                NilQuotient q({g, n});
                Lattice ad = ad_lattice(q);
                bool ok = ad.rank() == static_cast<std::size_t>(2 * g);
                for (const auto& x : smith_invariants(ad.basis())) ok = ok && x == 1;
                if (!ok) o.detail += SurfaceSig{g, n}.str() + " ";
                o.pass = o.pass && ok;
            }
        return o;
    });

    report(6, "gr2 ranks", [] {
        Outcome o;
        for (int g = 0; g <= 4; ++g)
            for (int n = 0; n <= 3; ++n) {
                if (!SurfaceSig{g, n}.valid_top()) continue;
                long long want = n >= 1 ? choose(2 * g, 2) + n - 1 : choose(2 * g, 2) - 1;
                NilQuotient q({g, n});
                if (q.r2() != want) {
                    o.pass = false;
                    o.detail += SurfaceSig{g, n}.str() + ":" + std::to_string(q.r2()) + " ";
                }
            }
        return o;
    });

    report(7, "rank steps of the Torelli image", [] {
        Outcome o;
        for (int g : {2, 3})
            for (int n : {0, 1}) {
                auto rank = [&](SurfaceSig s) {
                    W3Context c(s, kData);
                    return static_cast<long long>(image_rank(c, load_expr_list(torelli_list_path(s, kData)).exprs));
                };
                long long d = rank({g, n + 1}) - rank({g, n});
                o.detail += std::to_string(g) + "," + std::to_string(n) + "->+" + std::to_string(d) + " ";
                o.pass = o.pass && d == 2 * g;
            }
        return o;
    });

    report(8, "level membership", [] {
        Outcome o;
        int count = 0;
        for (SurfaceSig s : std::vector<SurfaceSig>{{2, 0}, {3, 0}, {2, 1}}) {
            W3Context c(s, kData);
            std::vector<std::string> twists, bps;
            for (const auto& name : c.table().curve_names()) {
                if (name[0] == 'a' || name[0] == 'b' || name[0] == 'c') {
                    if (name.find("_u") == std::string::npos) twists.push_back(name);
                }
            }
            // Bounding pairs a_i, a_i_j cobound the unpunctured handles i..j-1.
            for (int i = 1; i <= s.g; ++i)
                for (int j = i + 1; j <= s.g; ++j) {
                    std::string other = "a" + std::to_string(i) + "_" + std::to_string(j);
                    if (c.table().has(other)) bps.push_back("BP[a" + std::to_string(i) + "," + other + "]");
                }
            for (int m : {2, 3, 4, 6}) {
                const int m2 = m % 2 ? m : m / 2;
                for (const auto& t : twists) {
                    bool ok = c.in_level_w3m(parse_expr("T[" + t + "]^" + std::to_string(m)), m) && !c.in_level_w3m(parse_expr("T[" + t + "]"), m);
                    if (!ok) o.detail += s.str() + " T[" + t + "]@" + std::to_string(m) + " ";
                    o.pass = o.pass && ok;
                    ++count;
                }
                for (const auto& b : bps) {
                    bool ok = c.in_level_w3m(parse_expr(b + "^" + std::to_string(m2)), m);
                    if (!ok) o.detail += s.str() + " " + b + "@" + std::to_string(m) + " ";
                    o.pass = o.pass && ok;
                    ++count;
                }
            }
        }
        if (o.pass) o.detail = std::to_string(count) + " checks";
        return o;
    });

    report(9, "clutching is injective", [] {
        Outcome o;
        int splittings = 0, pairs = 0;
        for (SurfaceSig t : std::vector<SurfaceSig>{{3, 0}, {3, 1}}) {
            NilQuotient q(t);
            for (int g0 = 0; g0 <= t.g; ++g0)
                for (int n0 = 0; n0 <= t.n; ++n0) {
                    SurfaceSig p0{g0, n0}, p1{t.g - g0, t.n - n0};
                    if (2 * p0.g - 1 + p0.n <= 0 || 2 * p1.g - 1 + p1.n <= 0) continue;
                    ClutchInclusion c = clutch_inclusion(p0, p1, t);
                    for (int side = 0; side < 2; ++side) {
                        CoefMat m1 = clutch_gr1(c, side, q), m2 = clutch_gr2(c, side, q);
                        bool ok = coef_rank(m1) == m1[0].size() && coef_rank(m2) == m2[0].size();
                        if (!ok) o.detail += p0.str() + "+" + p1.str() + " ";
                        o.pass = o.pass && ok;
                    }
                    ++splittings;
                }
        }
        // Distinct inputs: pict-distinct pairs on the parts of (1,0)+(2,0) -> (3,0).
        SurfaceSig t{3, 0};
        ClutchInclusion c = clutch_inclusion({1, 0}, {2, 0}, t);
        W3Context tc(t, kData), c0(c.part[0], kData), c1(c.part[1], kData);
        std::mt19937_64 rng(20240611);
        std::vector<std::pair<PiCTElement, PiCTElement>> inputs;
        std::vector<PiCTElement> images;
        for (int tries = 0; inputs.size() < 200 && tries < 5000; ++tries) {
            MappingClassExpr e0 = random_expr(rng, c0.table(), 4), e1 = random_expr(rng, c1.table(), 4);
            PiCTElement x0 = c0.rho_w3(e0), x1 = c1.rho_w3(e1);
            bool dup = std::any_of(inputs.begin(), inputs.end(), [&](const auto& pr) { return c0.pict_eq(pr.first, x0) && c1.pict_eq(pr.second, x1); });
            if (dup) continue;
            inputs.push_back({x0, x1});
            images.push_back(clutch_pict(tc, c, realize(e0, c0.table()), realize(e1, c1.table())));
        }
        int collisions = 0;
        for (std::size_t i = 0; i < images.size(); ++i)
            for (std::size_t j = i + 1; j < images.size(); ++j)
                if (tc.pict_eq(images[i], images[j])) ++collisions;
        pairs = static_cast<int>(images.size());
        o.pass = o.pass && pairs == 200 && collisions == 0;
        o.detail += std::to_string(splittings) + " splittings, " + std::to_string(pairs) + " pairs, " + std::to_string(collisions) + " collisions";
        return o;
    });

    report(10, "algebraic soundness", [] {
        Outcome o;
        std::mt19937_64 rng(20240611);
        for (int g = 0; g <= 4; ++g)
            for (int n = 0; n <= 3; ++n) {
                SurfaceSig s{g, n};
                if (!s.valid_top()) continue;
                NilQuotient q(s);
                if (!(q.normal_form(relator(s)) == q.identity())) {
                    o.pass = false;
                    o.detail += "relator " + s.str() + " ";
                }
            }
        auto rnd = [&](const NilQuotient& q) {
            NilElement x = q.identity();
            for (auto& v : x.e) v = static_cast<Coef>(rng() % 9) - 4;
            for (auto& v : x.t) v = static_cast<Coef>(rng() % 9) - 4;
            return x;
        };
        for (SurfaceSig s : std::vector<SurfaceSig>{{2, 1}, {3, 0}}) {
            NilQuotient q(s);
            W3Context c(s, kData);
            for (int i = 0; i < 500; ++i) {
                NilElement a = rnd(q), b = rnd(q), d = rnd(q);
                bool ok = q.mul(q.mul(a, b), d) == q.mul(a, q.mul(b, d)) && q.mul(a, q.inv(a)) == q.identity() && q.mul(q.identity(), a) == a;
                if (!ok) o.detail += "mul " + s.str() + " ";
                o.pass = o.pass && ok;
            }
            for (int i = 0; i < 500; ++i) {
                PiCTElement x = c.rho_w3(random_expr(rng, c.table(), 3)), y = c.rho_w3(random_expr(rng, c.table(), 3)),
                            z = c.rho_w3(random_expr(rng, c.table(), 3));
                bool ok = c.pict_eq(c.pict_mul(c.pict_mul(x, y), z), c.pict_mul(x, c.pict_mul(y, z))) &&
                          c.pict_eq(c.pict_mul(x, c.pict_inv(x)), c.pict_identity()) && c.pict_eq(c.pict_mul(c.pict_identity(), x), x);
                if (!ok) {
                    o.detail += "pict_mul " + s.str() + " ";
                    o.pass = false;
                    break;
                }
            }
            for (int i = 0; i < 200; ++i) {
                MappingClassExpr x = random_expr(rng, c.table(), 4), y = random_expr(rng, c.table(), 4);
                if (!c.pict_eq(c.rho_w3(cat(x, y)), c.pict_mul(c.rho_w3(x), c.rho_w3(y)))) {
                    o.detail += "rho " + s.str() + " ";
                    o.pass = false;
                    break;
                }
            }
        }
        std::size_t entries = 0;
        for (int g = 0; g <= 4; ++g)
            for (int n = 1; n <= 3; ++n) {
                SurfaceSig s{g, n};
                if (!s.valid_top() || (g == 0 && n != 3)) continue;
                auto t = GeneratorTable::load(s, kData);
                for (const auto& [name, map] : t->entries()) {
                    ++entries;
                    AutoOnPi a = validate_auto(map, s);
                    if (!check_certificate(a) || !is_symplectic(homology_matrix(a))) {
                        o.pass = false;
                        o.detail += "table " + s.str() + ":" + name + " ";
                    }
                }
            }
        if (o.pass) o.detail = std::to_string(entries) + " table entries certified";
        return o;
    });

    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criterion(s) failed") << std::endl;
    return failures == 0 ? 0 : 1;
}

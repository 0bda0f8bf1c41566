#include "w3/verify.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include "w3/dsl.hpp"
#include "w3/johnson.hpp"
#include "w3/nilq.hpp"
#include "w3/strata.hpp"
#include "w3/surface.hpp"

namespace w3 {

namespace {

using Rng = std::mt19937_64;

std::vector<SurfaceSig> table_sigs() {
    std::vector<SurfaceSig> out;
    for (int g = 0; g <= 4; ++g)
        for (int n = 0; n <= 3; ++n) {
            SurfaceSig s{g, n};
            if (!s.valid_top()) continue;
            if (g == 0 && n != 3) continue;  // only (0,3) is tabulated in genus 0
            out.push_back(s);
        }
    return out;
}

Word random_word(Rng& rng, int rank, int len) {
    std::vector<Letter> w;
    for (int i = 0; i < len; ++i) {
        Letter x = static_cast<Letter>(rng() % static_cast<unsigned>(rank)) + 1;
        w.push_back(rng() % 2 ? x : -x);
    }
    return Word(std::move(w));
}

MappingClassExpr random_expr(Rng& rng, const GeneratorTable& t, int max_len) {
    auto names = t.curve_names();
    MappingClassExpr e;
    int len = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_len));
    for (int i = 0; i < len; ++i) {
        Term term;
        term.a = names[rng() % names.size()];
        term.exp = static_cast<long long>(rng() % 5) - 2;
        if (term.exp == 0) term.exp = 1;
        e.terms.push_back(term);
    }
    return e;
}

NilElement random_nil(Rng& rng, const NilQuotient& q) {
    NilElement x = q.identity();
    for (auto& v : x.e) v = static_cast<Coef>(rng() % 11) - 5;
    for (auto& v : x.t) v = static_cast<Coef>(rng() % 11) - 5;
    return x;
}

class Suite {
public:
    Suite(std::uint64_t seed, std::string data_dir) : seed_(seed), dir_(std::move(data_dir)) {}

    void check(const std::string& scope, const std::string& name, const std::function<std::string(bool&)>& body) {
        CheckResult r{scope, name, false, ""};
        try {
            bool ok = true;
            r.detail = body(ok);
            r.pass = ok;
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        if (!r.pass) r.detail += " (seed " + std::to_string(seed_) + ")";
        results.push_back(r);
    }

    void tables();
    void nilq();
    void johnson();
    void strata();

    std::vector<CheckResult> results;

private:
    std::uint64_t seed_;
    std::string dir_;
};

void Suite::tables() {
    for (SurfaceSig s : table_sigs()) {
        check("tables", "certify " + s.str(), [&](bool& ok) {
            auto t = GeneratorTable::load(s, dir_);
            auto fails = t->certify();
            ok = fails.empty();
            return std::to_string(t->entries().size()) + " entries" + (ok ? "" : ", first failure: " + fails.front());
        });
    }
    for (SurfaceSig s : std::vector<SurfaceSig>{{2, 1}, {3, 2}, {4, 3}}) {
        check("tables", "homology is a homomorphism " + s.str(), [&](bool& ok) {
            auto t = GeneratorTable::load(s, dir_);
            Rng rng(seed_);
            auto names = t->curve_names();
            for (int i = 0; i < 100 && ok; ++i) {
                const auto& f = t->get(names[rng() % names.size()]);
                const auto& g = t->get(names[rng() % names.size()]);
                CoefMat lhs = homology_matrix(validate_auto(compose(f, g), s));
                CoefMat rhs = coef_mul(homology_matrix(validate_auto(f, s)), homology_matrix(validate_auto(g, s)));
                ok = lhs == rhs;
            }
            return std::string("100 sampled pairs");
        });
        check("tables", "disjoint twists commute " + s.str(), [&](bool& ok) {
            auto t = GeneratorTable::load(s, dir_);
            int pairs = 0;
            for (int i = 1; i <= s.g; ++i)
                for (int j = 1; j <= s.g; ++j) {
                    if (i == j) continue;
                    for (const char* x : {"a", "b"})
                        for (const char* y : {"a", "b"}) {
                            const auto& f = t->get(x + std::to_string(i));
                            const auto& g = t->get(y + std::to_string(j));
                            ok = ok && compose(f, g) == compose(g, f);
                            ++pairs;
                        }
                }
            return std::to_string(pairs) + " pairs";
        });
    }
}

void Suite::nilq() {
    for (int g = 0; g <= 4; ++g)
        for (int n = 0; n <= 3; ++n) {
            SurfaceSig s{g, n};
            if (!s.valid_top()) continue;
            check("nilq", "relator and gr2 rank " + s.str(), [&](bool& ok) {
                NilQuotient q(s);
                int wedge = 2 * g * (2 * g - 1) / 2;
                int expect = n >= 1 ? wedge + n - 1 : wedge - 1;
                ok = q.normal_form(relator(s)) == q.identity() && q.r2() == expect;
                return "r2=" + std::to_string(q.r2());
            });
        }
    check("nilq", "group axioms on random triples", [&](bool& ok) {
        Rng rng(seed_);
        for (SurfaceSig s : std::vector<SurfaceSig>{{2, 0}, {2, 1}, {3, 2}}) {
            NilQuotient q(s);
            for (int i = 0; i < 500 && ok; ++i) {
                NilElement a = random_nil(rng, q), b = random_nil(rng, q), c = random_nil(rng, q);
                ok = q.mul(q.mul(a, b), c) == q.mul(a, q.mul(b, c)) && q.mul(a, q.inv(a)) == q.identity() &&
                     q.mul(q.identity(), a) == a;
            }
        }
        return std::string("500 triples per signature");
    });
    check("nilq", "normal form is multiplicative", [&](bool& ok) {
        Rng rng(seed_ + 1);
        for (SurfaceSig s : std::vector<SurfaceSig>{{2, 1}, {3, 2}, {3, 0}}) {
            NilQuotient q(s);
            for (int i = 0; i < 500 && ok; ++i) {
                Word w = random_word(rng, s.rank(), 12), v = random_word(rng, s.rank(), 12);
                ok = q.normal_form(w * v) == q.mul(q.normal_form(w), q.normal_form(v));
            }
        }
        return std::string("500 word pairs per signature");
    });
    for (int g : {2, 3})
        for (int n : {0, 1})
            check("nilq", "power subgroup closed form " + SurfaceSig{g, n}.str(), [&, g, n](bool& ok) {
                NilQuotient q({g, n});
                const int wedge = 2 * g * (2 * g - 1) / 2;
                for (int m = 2; m <= 12 && ok; ++m) {
                    int m2 = m % 2 ? m : m / 2;
                    IntMat rows;
                    for (int c = 0; c < q.r2(); ++c) {
                        IntVec v(static_cast<std::size_t>(q.r2()));
                        v[static_cast<std::size_t>(c)] = (n == 0 || c < wedge) ? m2 : m;
                        rows.push_back(v);
                    }
                    ok = power_level2(q, m) == Lattice::span(static_cast<std::size_t>(q.r2()), rows);
                }
                return std::string("m = 2..12");
            });
    check("nilq", "power subgroups are invariant", [&](bool& ok) {
        int count = 0;
        for (SurfaceSig s : std::vector<SurfaceSig>{{2, 0}, {2, 1}, {1, 2}}) {
            NilQuotient q(s);
            auto t = GeneratorTable::load(s, dir_);
            for (int m = 2; m <= 12 && ok; ++m) {
                Lattice l = power_subgroup_lattice(q, m);
                for (const auto& [name, map] : t->entries()) {
                    NilAuto f = induced_auto_map(map, q);
                    for (const auto& row : l.basis()) {
                        NilElement x = q.identity();
                        for (int i = 0; i < q.d1(); ++i) x.e[static_cast<std::size_t>(i)] = row[static_cast<std::size_t>(i)].get_si();
                        for (int c = 0; c < q.r2(); ++c) x.t[static_cast<std::size_t>(c)] = row[static_cast<std::size_t>(q.d1() + c)].get_si();
                        NilElement y = nil_apply(q, f, x);
                        IntVec v = to_int(y.e);
                        IntVec vt = to_int(y.t);
                        v.insert(v.end(), vt.begin(), vt.end());
                        ok = ok && l.contains(v);
                        ++count;
                    }
                }
            }
        }
        return std::to_string(count) + " images";
    });
    check("nilq", "induced action is functorial", [&](bool& ok) {
        Rng rng(seed_ + 2);
        for (SurfaceSig s : std::vector<SurfaceSig>{{2, 1}, {3, 0}, {1, 3}}) {
            NilQuotient q(s);
            auto t = GeneratorTable::load(s, dir_);
            auto names = t->curve_names();
            for (int i = 0; i < 100 && ok; ++i) {
                const auto& f = t->get(names[rng() % names.size()]);
                const auto& g = t->get(names[rng() % names.size()]);
                ok = induced_auto_map(compose(f, g), q) == nil_compose(q, induced_auto_map(f, q), induced_auto_map(g, q));
            }
        }
        return std::string("100 pairs per signature");
    });
}

void Suite::johnson() {
    std::map<SurfaceSig, std::size_t> ranks;
    for (SurfaceSig s : table_sigs()) {
        if (s.g == 0) continue;
        std::string path = torelli_list_path(s, dir_);
        if (!std::filesystem::exists(path)) continue;
        check("johnson", "Torelli image rank " + s.str(), [&](bool& ok) {
            W3Context c(s, dir_);
            auto list = load_expr_list(path);
            std::size_t r = c.torelli_image_rank(list.exprs);
            ranks[s] = r;
            long long expect = expected_torelli_rank(s);
            ok = static_cast<long long>(r) == expect;
            return "rank " + std::to_string(r) + ", expected " + std::to_string(expect);
        });
    }
    for (int g : {2, 3})
        for (int n : {0, 1}) {
            SurfaceSig a{g, n}, b{g, n + 1};
            if (!ranks.count(a) || !ranks.count(b)) continue;
            check("johnson", "rank step " + a.str() + " -> " + b.str(), [&](bool& ok) {
                long long d = static_cast<long long>(ranks[b]) - static_cast<long long>(ranks[a]);
                ok = d == 2 * g;
                return "difference " + std::to_string(d);
            });
        }
    for (SurfaceSig s : std::vector<SurfaceSig>{{2, 0}, {2, 1}, {2, 2}, {3, 0}, {3, 1}}) {
        check("johnson", "separating twists vanish " + s.str(), [&](bool& ok) {
            W3Context c(s, dir_);
            int count = 0;
            for (int k = 0; k <= s.g; ++k) {
                MappingClassExpr e;
                try {
                    e = separating_twist(s, k);
                } catch (const std::invalid_argument&) {
                    continue;
                }
                ok = ok && c.pict_eq(c.rho_w3(e), c.pict_identity()) && c.johnson(e).is_zero();
                ++count;
            }
            return std::to_string(count) + " macros";
        });
    }
    check("johnson", "ad lattice is primitive", [&](bool& ok) {
        for (int g = 1; g <= 4; ++g)
            for (int n = 0; n <= 3; ++n) {
                if (!SurfaceSig{g, n}.valid_top()) continue;
                NilQuotient q({g, n});
                Lattice ad = ad_lattice(q);
                auto inv = smith_invariants(ad.basis());
                ok = ok && ad.rank() == static_cast<std::size_t>(2 * g);
                for (const auto& x : inv) ok = ok && x == 1;
            }
        return std::string("1 <= g <= 4, 0 <= n <= 3");
    });
    for (SurfaceSig s : std::vector<SurfaceSig>{{2, 0}, {3, 0}, {2, 1}}) {
        check("johnson", "level membership " + s.str(), [&](bool& ok) {
            W3Context c(s, dir_);
            int count = 0;
            for (int m : {2, 3, 4, 6}) {
                for (const auto& name : c.table().curve_names()) {
                    MappingClassExpr one{{Term{Term::Kind::Twist, name, "", 0, 1}}};
                    MappingClassExpr pw{{Term{Term::Kind::Twist, name, "", 0, m}}};
                    ok = ok && c.in_level_w3m(pw, m) && !c.in_level_w3m(one, m);
                    ++count;
                }
            }
            return std::to_string(count) + " twist checks";
        });
    }
    check("johnson", "Johnson homomorphism is additive", [&](bool& ok) {
        Rng rng(seed_ + 3);
        for (SurfaceSig s : std::vector<SurfaceSig>{{2, 1}, {3, 0}}) {
            W3Context c(s, dir_);
            auto list = load_expr_list(torelli_list_path(s, dir_)).exprs;
            for (int i = 0; i < 50 && ok; ++i) {
                const auto& x = list[rng() % list.size()];
                const auto& y = list[rng() % list.size()];
                MappingClassExpr xy = x;
                xy.terms.insert(xy.terms.end(), y.terms.begin(), y.terms.end());
                IntVec sum = vec_add(c.johnson(x).rep, c.johnson(y).rep);
                ok = c.johnson(xy) == c.hom_ext(unflatten(sum, c.quotient().d1(), c.quotient().r2()));
            }
        }
        return std::string("50 pairs per signature");
    });
    check("johnson", "rho is a homomorphism", [&](bool& ok) {
        Rng rng(seed_ + 4);
        for (SurfaceSig s : std::vector<SurfaceSig>{{2, 1}, {3, 0}}) {
            W3Context c(s, dir_);
            for (int i = 0; i < 200 && ok; ++i) {
                MappingClassExpr x = random_expr(rng, c.table(), 4), y = random_expr(rng, c.table(), 4);
                MappingClassExpr xy = x;
                xy.terms.insert(xy.terms.end(), y.terms.begin(), y.terms.end());
                ok = c.pict_eq(c.rho_w3(xy), c.pict_mul(c.rho_w3(x), c.rho_w3(y)));
            }
        }
        return std::string("200 pairs per signature");
    });
}

// Connectivity by depth-first search, independent of the library's union-find.
bool connected_without(const DualGraph& g, const std::vector<int>& cut) {
    std::vector<std::vector<int>> adj(g.vertices.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        if (std::find(cut.begin(), cut.end(), static_cast<int>(e)) != cut.end()) continue;
        adj[static_cast<std::size_t>(g.edges[e].v1)].push_back(g.edges[e].v2);
        adj[static_cast<std::size_t>(g.edges[e].v2)].push_back(g.edges[e].v1);
    }
    std::vector<bool> seen(g.vertices.size(), false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[static_cast<std::size_t>(v)])
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = true;
                stack.push_back(w);
            }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

void Suite::strata() {
    std::vector<std::pair<std::string, DualGraph>> corpus;
    std::string gdir = dir_ + "/graphs";
    if (std::filesystem::exists(gdir)) {
        std::vector<std::string> files;
        for (const auto& p : std::filesystem::directory_iterator(gdir))
            if (p.path().extension() == ".graph") files.push_back(p.path().string());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) corpus.emplace_back(std::filesystem::path(f).stem().string(), load_graph(f));
    }
    check("strata", "classification agrees with brute force", [&](bool& ok) {
        for (const auto& [name, g] : corpus) {
            EdgeClassification c = classify_edges(g);
            const int ne = static_cast<int>(g.edges.size());
            std::vector<int> s;
            std::vector<EdgePair> p;
            for (int e = 0; e < ne; ++e)
                if (!connected_without(g, {e})) s.push_back(e);
            for (int a = 0; a < ne; ++a)
                for (int b = a + 1; b < ne; ++b)
                    if (connected_without(g, {a}) && connected_without(g, {b}) && !connected_without(g, {a, b})) p.push_back({a, b});
            ok = ok && c.s == s && c.p == p;
        }
        return std::to_string(corpus.size()) + " graphs";
    });
    check("strata", "stable row equals mE", [&](bool& ok) {
        for (const auto& [name, g] : corpus)
            for (int m : {5, 7, 11, 13}) {
                IntMat rows = identity_matrix(g.edges.size());
                for (auto& r : rows) r = vec_scale(r, m);
                ok = ok && kernel_lattice(g, parse_kernel_spec("4+", m)) == Lattice::span(g.edges.size(), rows);
            }
        return std::string("m in {5,7,11,13}");
    });
    check("strata", "levels refine (k=2 > k=3 > k=4)", [&](bool& ok) {
        std::string bad;
        for (const auto& [name, g] : corpus)
            for (int m = 2; m <= 12; ++m) {
                Lattice l2 = kernel_lattice(g, parse_kernel_spec("2", m));
                Lattice l3 = kernel_lattice(g, parse_kernel_spec("3", m));
                Lattice l4 = kernel_lattice(g, parse_kernel_spec("4", m));
                if (!l2.contains(l3) || !l3.contains(l4)) {
                    ok = false;
                    bad += (bad.empty() ? "" : " ") + name + "@m=" + std::to_string(m);
                }
            }
        return bad.empty() ? std::string("m = 2..12") : "fails on " + bad;
    });
    check("strata", "clutching graded maps are injective", [&](bool& ok) {
        int count = 0;
        for (SurfaceSig t : std::vector<SurfaceSig>{{3, 0}, {3, 1}})
            for (int g0 = 0; g0 <= t.g; ++g0)
                for (int n0 = 0; n0 <= t.n; ++n0) {
                    SurfaceSig p0{g0, n0}, p1{t.g - g0, t.n - n0};
                    if (2 * p0.g - 1 + p0.n <= 0 || 2 * p1.g - 1 + p1.n <= 0) continue;
                    ClutchInclusion c = clutch_inclusion(p0, p1, t);
                    NilQuotient q(t);
                    for (int side = 0; side < 2; ++side) {
                        CoefMat m1 = clutch_gr1(c, side, q), m2 = clutch_gr2(c, side, q);
                        ok = ok && coef_rank(m1) == m1[0].size() && coef_rank(m2) == m2[0].size();
                    }
                    ++count;
                }
        return std::to_string(count) + " splittings";
    });
}

}  // namespace

std::vector<CheckResult> run_verify(const std::string& scope, std::uint64_t seed, const std::string& data_dir) {
    Suite s(seed, data_dir);
    bool all = scope == "all";
    if (!all && scope != "tables" && scope != "nilq" && scope != "johnson" && scope != "strata")
        throw std::invalid_argument("unknown verify scope '" + scope + "'");
    if (all || scope == "tables") s.tables();
    if (all || scope == "nilq") s.nilq();
    if (all || scope == "johnson") s.johnson();
    if (all || scope == "strata") s.strata();
    return s.results;
}

}  // namespace w3

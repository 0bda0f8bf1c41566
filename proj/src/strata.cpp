#include "w3/strata.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace w3 {

namespace {

// Union-find over vertices restricted to the edges that are not removed.
std::vector<int> components(const DualGraph& g, const std::vector<bool>& removed, int& count) {
    std::vector<int> parent(g.vertices.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        return x;
    };
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        if (!removed.empty() && removed[e]) continue;
        int a = find(g.edges[e].v1), b = find(g.edges[e].v2);
        if (a != b) parent[static_cast<std::size_t>(a)] = b;
    }
    std::vector<int> comp(g.vertices.size());
    std::map<int, int> label;
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        int r = find(static_cast<int>(v));
        auto it = label.emplace(r, static_cast<int>(label.size())).first;
        comp[v] = it->second;
    }
    count = static_cast<int>(label.size());
    return comp;
}

struct Side {
    int genus = 0;
    int punctures = 0;
};

// Genus and puncture count of each component after removing edges.
std::vector<Side> sides(const DualGraph& g, const std::vector<bool>& removed, std::vector<int>& comp) {
    int count = 0;
    comp = components(g, removed, count);
    std::vector<Side> out(static_cast<std::size_t>(count));
    std::vector<int> nv(static_cast<std::size_t>(count), 0), ne(static_cast<std::size_t>(count), 0);
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        auto c = static_cast<std::size_t>(comp[v]);
        out[c].genus += g.vertices[v].genus;
        out[c].punctures += static_cast<int>(g.vertices[v].punctures.size());
        ++nv[c];
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e)
        if (!removed[e]) ++ne[static_cast<std::size_t>(comp[static_cast<std::size_t>(g.edges[e].v1)])];
    for (std::size_t c = 0; c < out.size(); ++c) out[c].genus += ne[c] - nv[c] + 1;
    return out;
}

int gcd_int(int a, int b) { return std::gcd(a, b); }

bool parse_int(const std::string& s, int& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

int DualGraph::betti(const std::vector<bool>& removed) const {
    int count = 0;
    components(*this, removed, count);
    int e = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) e += removed.empty() || !removed[i];
    return e - static_cast<int>(vertices.size()) + count;
}

int DualGraph::genus() const {
    int s = betti();
    for (const auto& v : vertices) s += v.genus;
    return s;
}

int DualGraph::punctures() const {
    int s = 0;
    for (const auto& v : vertices) s += static_cast<int>(v.punctures.size());
    return s;
}

void validate_graph(const DualGraph& g) {
    if (g.vertices.empty()) throw std::invalid_argument("graph has no vertices");
    int count = 0;
    components(g, {}, count);
    if (count != 1) throw std::invalid_argument("graph is not connected");
    std::vector<int> degree(g.vertices.size(), 0);
    for (const auto& e : g.edges) {
        ++degree[static_cast<std::size_t>(e.v1)];
        ++degree[static_cast<std::size_t>(e.v2)];
    }
    std::set<int> labels;
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        const auto& x = g.vertices[v];
        if (x.genus < 0) throw std::invalid_argument("vertex " + x.id + " has negative genus");
        if (2 * x.genus - 2 + degree[v] + static_cast<int>(x.punctures.size()) <= 0)
            throw std::invalid_argument("vertex " + x.id + " is unstable");
        for (int p : x.punctures)
            if (!labels.insert(p).second) throw std::invalid_argument("puncture " + std::to_string(p) + " appears twice");
    }
    int n = static_cast<int>(labels.size());
    if (n > 0 && (*labels.begin() != 1 || *labels.rbegin() != n))
        throw std::invalid_argument("puncture labels must be exactly 1.." + std::to_string(n));
}

DualGraph parse_graph(const std::string& text) {
    DualGraph g;
    std::map<std::string, int> vindex;
    std::vector<std::pair<std::string, std::string>> ends;
    std::set<std::string> edge_ids;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& what) {
        throw std::invalid_argument("graph line " + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) continue;
        if (kind == "vertex") {
            GraphVertex v;
            if (!(ls >> v.id)) fail("vertex needs an id");
            std::string field;
            bool have_genus = false;
            while (ls >> field) {
                auto eq = field.find('=');
                if (eq == std::string::npos) fail("expected key=value, got '" + field + "'");
                std::string key = field.substr(0, eq), val = field.substr(eq + 1);
                if (key == "genus") {
                    if (!parse_int(val, v.genus)) fail("bad genus '" + val + "'");
                    have_genus = true;
                } else if (key == "punctures") {
                    std::istringstream ps(val);
                    std::string p;
                    while (std::getline(ps, p, ',')) {
                        int label = 0;
                        if (!parse_int(p, label) || label < 1) fail("bad puncture label '" + p + "'");
                        v.punctures.push_back(label);
                    }
                } else {
                    fail("unknown vertex field '" + key + "'");
                }
            }
            if (!have_genus) fail("vertex needs genus=");
            if (!vindex.emplace(v.id, static_cast<int>(g.vertices.size())).second) fail("duplicate vertex " + v.id);
            g.vertices.push_back(v);
        } else if (kind == "edge") {
            GraphEdge e;
            std::string a, b, extra;
            if (!(ls >> e.id >> a >> b) || (ls >> extra)) fail("expected: edge <id> <v1> <v2>");
            if (!edge_ids.insert(e.id).second) fail("duplicate edge " + e.id);
            g.edges.push_back(e);
            ends.emplace_back(a, b);
        } else {
            fail("unknown record '" + kind + "'");
        }
    }
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        auto a = vindex.find(ends[i].first), b = vindex.find(ends[i].second);
        if (a == vindex.end() || b == vindex.end()) throw std::invalid_argument("edge " + g.edges[i].id + " names an unknown vertex");
        g.edges[i].v1 = a->second;
        g.edges[i].v2 = b->second;
    }
    validate_graph(g);
    return g;
}

DualGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open graph " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_graph(ss.str());
}

EdgeClassification classify_edges(const DualGraph& g) {
    EdgeClassification c;
    const std::size_t ne = g.edges.size();
    std::vector<bool> bridge(ne, false);
    for (std::size_t e = 0; e < ne; ++e) {
        std::vector<bool> removed(ne, false);
        removed[e] = true;
        std::vector<int> comp;
        auto sd = sides(g, removed, comp);
        if (sd.size() == 1) {
            c.n.push_back(static_cast<int>(e));
            continue;
        }
        bridge[e] = true;
        c.s.push_back(static_cast<int>(e));
        for (const auto& s : sd)
            if (s.genus == 1 && s.punctures == 0) {
                c.s1.push_back(static_cast<int>(e));
                break;
            }
    }
    for (std::size_t a = 0; a < ne; ++a)
        for (std::size_t b = a + 1; b < ne; ++b) {
            if (bridge[a] || bridge[b]) continue;
            std::vector<bool> removed(ne, false);
            removed[a] = removed[b] = true;
            std::vector<int> comp;
            auto sd = sides(g, removed, comp);
            if (sd.size() == 1) continue;
            EdgePair p{static_cast<int>(a), static_cast<int>(b)};
            c.p.push_back(p);
            if (std::any_of(sd.begin(), sd.end(), [](const Side& s) { return s.punctures == 0; })) c.p_un.push_back(p);
        }
    return c;
}

std::string KernelSpec::str() const { return "k=" + std::string(stable ? "4+" : std::to_string(k)) + ",m=" + std::to_string(m); }

KernelSpec parse_kernel_spec(const std::string& k, int m) {
    KernelSpec s;
    s.m = m;
    if (m < 2) throw std::invalid_argument("level m must be at least 2");
    if (k == "2" || k == "3" || k == "4") {
        s.k = k[0] - '0';
    } else if (k == "4+") {
        s.k = 4;
        s.stable = true;
        if (std::gcd(m, 6) != 1) throw std::invalid_argument("k=4+ requires gcd(m,6)=1");
    } else {
        throw std::invalid_argument("k must be 2, 3, 4 or 4+");
    }
    return s;
}

Lattice kernel_lattice(const DualGraph& g, const KernelSpec& spec) {
    const std::size_t ne = g.edges.size();
    const int m = spec.m, m2 = m / gcd_int(m, 2), m6 = m / gcd_int(m, 6);
    EdgeClassification c = classify_edges(g);
    IntMat gens;
    auto edge = [&](int e, int coef) {
        IntVec v(ne);
        v[static_cast<std::size_t>(e)] = coef;
        gens.push_back(v);
    };
    auto pair = [&](const EdgePair& p, int coef) {
        IntVec v(ne);
        v[static_cast<std::size_t>(p.first)] = coef;
        v[static_cast<std::size_t>(p.second)] = -coef;
        gens.push_back(v);
    };
    if (spec.stable) {
        for (std::size_t e = 0; e < ne; ++e) edge(static_cast<int>(e), m);
        return Lattice::span(ne, gens);
    }
    for (int e : c.n) edge(e, m);
    switch (spec.k) {
    case 2:
        for (const auto& p : c.p) pair(p, 1);
        for (int e : c.s) edge(e, 1);
        break;
    case 3:
        for (const auto& p : c.p_un) pair(p, m2);
        for (int e : c.s) edge(e, 1);
        break;
    case 4:
        if (m % 4 == 2)
            for (const auto& p : c.p) pair(p, m2);
        for (int e : c.s) edge(e, m2);
        for (int e : c.s1) edge(e, m6);
        break;
    default:
        throw std::invalid_argument("invalid kernel spec");
    }
    return Lattice::span(ne, gens);
}

bool member(const Lattice& l, const IntVec& v) {
    if (v.size() != l.dim()) throw std::invalid_argument("vector dimension does not match the lattice");
    return l.contains(v);
}

namespace {

Word commutator_block(int first_handle, int last_handle) {
    std::vector<Letter> r;
    for (int i = first_handle; i <= last_handle; ++i) {
        int a = 2 * i - 1, b = 2 * i;
        r.insert(r.end(), {a, b, -a, -b});
    }
    return Word(std::move(r));
}

// u_hi ... u_lo in the target alphabet.
Word puncture_block(int g, int lo, int hi) {
    std::vector<Letter> r;
    for (int j = hi; j >= lo; --j) r.push_back(2 * g + j);
    return Word(std::move(r));
}

}  // namespace

ClutchInclusion clutch_inclusion(SurfaceSig p0, SurfaceSig p1, SurfaceSig target) {
    for (const auto& p : {p0, p1})
        if (p.g < 0 || p.n < 0 || 2 * p.g - 1 + p.n <= 0) throw std::invalid_argument("clutching part " + p.str() + " is not allowed");
    if (p0.g + p1.g != target.g || p0.n + p1.n != target.n)
        throw std::invalid_argument("parts " + p0.str() + " + " + p1.str() + " do not add up to " + target.str());
    if (!target.valid_top()) throw std::invalid_argument("invalid target signature " + target.str());
    ClutchInclusion c;
    c.target = target;
    const int g = target.g;
    const int first_handle[2] = {1, p0.g + 1};
    const int first_puncture[2] = {1, p0.n + 1};
    const SurfaceSig parts[2] = {p0, p1};
    for (int side = 0; side < 2; ++side) {
        const SurfaceSig p = parts[side];
        c.part[side] = {p.g, p.n + 1};
        std::vector<Word> images;
        std::vector<Letter> block;
        for (int k = 1; k <= 2 * p.g; ++k) block.push_back(2 * (first_handle[side] - 1) + k);
        for (int j = 1; j <= p.n; ++j) block.push_back(2 * g + first_puncture[side] - 1 + j);
        for (Letter t : block) images.push_back(Word::letter(t));
        Word zeta = commutator_block(first_handle[side], first_handle[side] + p.g - 1);
        Word us = puncture_block(g, first_puncture[side], first_puncture[side] + p.n - 1);
        const Letter bl = 2 * p.g + p.n + 1;
        if (side == 0) {
            // zeta0 u' U0 = 1 and U0 zeta0 is a cyclic block of the target relator.
            images.push_back((us * zeta).inverse());
            c.boundary[0] = Word::letter(bl);
        } else {
            // zeta1 u' U1 = 1; the block zeta1 U1 is carried by zeta1 u' zeta1^-1.
            images.push_back(zeta.inverse() * us.inverse());
            Word pz = commutator_block(1, p.g);
            c.boundary[1] = pz * Word::letter(bl) * pz.inverse();
        }
        block.push_back(0);
        c.iota[side] = GenImageMap(std::move(images));
        c.block[side] = std::move(block);
    }
    return c;
}

CoefMat clutch_gr1(const ClutchInclusion& c, int side, const NilQuotient& q) {
    const int dp = 2 * c.part[side].g, d = q.d1();
    CoefMat m(static_cast<std::size_t>(d), CoefVec(static_cast<std::size_t>(dp), 0));
    for (int k = 0; k < dp; ++k) {
        NilElement x = q.normal_form(c.iota[side].image(k + 1));
        for (int i = 0; i < d; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = x.e[static_cast<std::size_t>(i)];
    }
    return m;
}

CoefMat clutch_gr2(const ClutchInclusion& c, int side, const NilQuotient& q) {
    const SurfaceSig p = c.part[side];
    const int dp = 2 * p.g;
    std::vector<CoefVec> gr1;
    for (int k = 0; k < dp; ++k) gr1.push_back(q.normal_form(c.iota[side].image(k + 1)).e);
    std::vector<CoefVec> cols;
    for (int i = 0; i < dp; ++i)
        for (int j = i + 1; j < dp; ++j) cols.push_back(q.bracket(gr1[static_cast<std::size_t>(i)], gr1[static_cast<std::size_t>(j)]));
    for (int j = 1; j < p.n; ++j) cols.push_back(q.normal_form(c.iota[side].image(dp + j)).t);
    CoefMat m(static_cast<std::size_t>(q.r2()), CoefVec(cols.size(), 0));
    for (std::size_t col = 0; col < cols.size(); ++col)
        for (int r = 0; r < q.r2(); ++r) m[static_cast<std::size_t>(r)][col] = cols[col][static_cast<std::size_t>(r)];
    return m;
}

std::size_t coef_rank(const CoefMat& m) {
    IntMat rows;
    for (const auto& r : m) rows.push_back(to_int(r));
    return matrix_rank(rows);
}

GenImageMap clutch_extend(const ClutchInclusion& c, int side, const AutoOnPi& a) {
    if (a.sig != c.part[side]) throw std::invalid_argument("automorphism signature " + a.sig.str() + " is not part " + c.part[side].str());
    const Word& beta = c.boundary[side];
    auto z = conjugacy_witness(apply(a.map, beta), beta);
    if (!z) throw CertificationError("part automorphism moves the boundary class");
    GenImageMap psi = compose(conjugation(a.sig.rank(), z->inverse()), a.map);
    if (apply(psi, beta) != beta) throw std::logic_error("boundary normalization failed");
    std::vector<Word> images;
    for (int k = 1; k <= c.target.rank(); ++k) images.push_back(Word::letter(k));
    const auto& block = c.block[side];
    for (std::size_t p = 0; p < block.size(); ++p)
        if (block[p] != 0) images[static_cast<std::size_t>(block[p] - 1)] = apply(c.iota[side], psi.image(static_cast<int>(p) + 1));
    GenImageMap f(std::move(images));
    validate_auto(f, c.target);
    return f;
}

PiCTElement clutch_pict(const W3Context& target, const ClutchInclusion& c, const AutoOnPi& a0, const AutoOnPi& a1) {
    if (target.sig() != c.target) throw std::invalid_argument("target context does not match the clutching");
    const NilQuotient& q = target.quotient();
    NilAuto f0 = induced_auto_map(clutch_extend(c, 0, a0), q);
    NilAuto f1 = induced_auto_map(clutch_extend(c, 1, a1), q);
    return target.pict(nil_compose(q, f0, f1));
}

}  // namespace w3

// w3tool: command-line front end for the w3 library.
//
// Exit codes: 0 success, 1 verification failure, 2 input error, 3 internal error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "w3/dsl.hpp"
#include "w3/johnson.hpp"
#include "w3/nilq.hpp"
#include "w3/strata.hpp"
#include "w3/surface.hpp"
#include "w3/verify.hpp"

using json = nlohmann::ordered_json;
using namespace w3;

namespace {

constexpr int kOk = 0, kFailed = 1, kInput = 2, kInternal = 3;

struct Options {
    std::string sig;
    std::uint64_t seed = 20240611;
    std::string out;
    std::string format = "json";
    std::string config;
    std::string data_dir = default_data_dir();
    bool timing = false;
};

// Integers are written as decimal strings throughout.
json jint(long long x) { return std::to_string(x); }
json jint(const Int& x) { return x.get_str(); }

json jvec(const CoefVec& v) {
    json a = json::array();
    for (Coef x : v) a.push_back(jint(x));
    return a;
}

json jvec(const IntVec& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(jint(x));
    return a;
}

json jmat(const CoefMat& m) {
    json a = json::array();
    for (const auto& r : m) a.push_back(jvec(r));
    return a;
}

json jmat(const IntMat& m) {
    json a = json::array();
    for (const auto& r : m) a.push_back(jvec(r));
    return a;
}

json jnil(const NilElement& x) { return {{"e", jvec(x.e)}, {"t", jvec(x.t)}}; }

json jtable(const GeneratorTable& t) { return {{"version", t.version()}, {"checksum", t.checksum()}}; }

void flatten_text(const json& j, const std::string& prefix, std::ostream& os) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) flatten_text(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
    } else if (j.is_array() && std::any_of(j.begin(), j.end(), [](const json& x) { return x.is_object(); })) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten_text(j[i], prefix + "[" + std::to_string(i) + "]", os);
    } else if (j.is_string()) {
        os << prefix << ": " << j.get<std::string>() << "\n";
    } else {
        os << prefix << ": " << j.dump() << "\n";
    }
}

const auto kStart = std::chrono::steady_clock::now();

void emit(const Options& opt, json report) {
    if (opt.timing) report["timing_ms"] = jint(static_cast<long long>(std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - kStart).count()));
    std::ostringstream os;
    if (opt.format == "text")
        flatten_text(report, "", os);
    else
        os << report.dump(2) << "\n";
    if (opt.out.empty()) {
        std::cout << os.str();
        return;
    }
    std::ofstream f(opt.out);
    if (!f) throw std::invalid_argument("cannot write " + opt.out);
    f << os.str();
}

// Line-based key=value defaults; flags given on the command line win.
void apply_config(CLI::App& app, Options& opt) {
    if (opt.config.empty()) return;
    std::ifstream in(opt.config);
    if (!in) throw std::invalid_argument("cannot open config " + opt.config);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t\r"));
            s.erase(s.find_last_not_of(" \t\r") + 1);
            return s;
        };
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        auto unset = [&](const std::string& flag) { return app.get_option(flag)->count() == 0; };
        if (key == "sig") {
            if (unset("--sig")) opt.sig = val;
        } else if (key == "seed") {
            if (unset("--seed")) opt.seed = std::stoull(val);
        } else if (key == "format") {
            if (unset("--format")) opt.format = val;
        } else if (key == "out") {
            if (unset("--out")) opt.out = val;
        } else if (key == "data-dir") {
            if (unset("--data-dir")) opt.data_dir = val;
        } else {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    if (opt.format != "json" && opt.format != "text") throw std::invalid_argument("format must be json or text");
}

SurfaceSig require_sig(const Options& opt) {
    if (opt.sig.empty()) throw std::invalid_argument("--sig g,n is required");
    SurfaceSig s = parse_sig(opt.sig);
    if (!s.valid_top()) throw std::invalid_argument("signature " + s.str() + " violates 2g-2+n > 0");
    return s;
}

json base_report(const std::string& command, const Options& opt) {
    json r;
    r["command"] = command;
    if (!opt.sig.empty()) r["signature"] = opt.sig;
    return r;
}

std::string cache_dir() {
    if (const char* env = std::getenv("W3TOOL_CACHE_DIR"); env && *env) return env;
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::string(xdg) + "/w3tool";
    if (const char* home = std::getenv("HOME"); home && *home) return std::string(home) + "/.cache/w3tool";
    return "";
}

// Johnson values of list entries, keyed by (signature, table checksum) on disk.
class JohnsonCache {
public:
    JohnsonCache(const W3Context& c) {
        std::string dir = cache_dir();
        if (dir.empty()) return;
        path_ = dir + "/johnson_g" + std::to_string(c.sig().g) + "_n" + std::to_string(c.sig().n) + "_" + c.table().checksum() + ".json";
        std::ifstream in(path_);
        if (!in) return;
        try {
            data_ = json::parse(in);
        } catch (const json::exception&) {
            data_ = json::object();
        }
    }
    std::optional<HomMatrix> get(const std::string& key, int rows, int cols) const {
        if (!data_.contains(key)) return std::nullopt;
        IntVec v;
        for (const auto& x : data_[key]) v.emplace_back(x.get<std::string>());
        if (v.size() != static_cast<std::size_t>(rows * cols)) return std::nullopt;
        return unflatten(v, rows, cols);
    }
    void put(const std::string& key, const HomMatrix& h) {
        data_[key] = jvec(flatten(h));
        dirty_ = true;
    }
    ~JohnsonCache() {
        if (!dirty_ || path_.empty()) return;
        std::error_code ec;
        std::filesystem::create_directories(std::filesystem::path(path_).parent_path(), ec);
        std::ofstream out(path_);
        if (out) out << data_.dump() << "\n";
    }

private:
    std::string path_;
    json data_ = json::object();
    bool dirty_ = false;
};

int cmd_johnson(const Options& opt, const std::string& expr_text) {
    SurfaceSig s = require_sig(opt);
    W3Context c(s, opt.data_dir);
    MappingClassExpr e = parse_expr(expr_text);
    HomExtClass j = c.johnson(e);
    json r = base_report("johnson", opt);
    r["inputs"] = {{"expr", to_string(e)}};
    json gr2 = json::array();
    for (const auto& l : c.quotient().gr2_labels()) gr2.push_back(l);
    r["outputs"] = {{"torelli", true},
                    {"zero", j.is_zero()},
                    {"class", jmat(unflatten(j.rep, c.quotient().d1(), c.quotient().r2()))},
                    {"gr2_basis", gr2}};
    r["tables"] = jtable(c.table());
    emit(opt, r);
    return kOk;
}

int cmd_rank(const Options& opt, const std::string& list_path) {
    SurfaceSig s = require_sig(opt);
    W3Context c(s, opt.data_dir);
    std::string path = list_path.empty() ? torelli_list_path(s, opt.data_dir) : list_path;
    ExprList list = load_expr_list(path);
    if (list.sig && *list.sig != s) throw std::invalid_argument("list " + path + " is for signature " + list.sig->str());
    JohnsonCache cache(c);
    const NilQuotient& q = c.quotient();
    IntMat gens = c.ad().basis();
    for (std::size_t i = 0; i < list.exprs.size(); ++i) {
        auto h = cache.get(list.source[i], q.d1(), q.r2());
        if (!h) {
            try {
                h = m_n(q, c.nil_of(list.exprs[i]));
            } catch (const NotTorelliError&) {
                throw NotTorelliError("list entry '" + list.source[i] + "' is not in the Torelli group");
            }
            cache.put(list.source[i], *h);
        }
        gens.push_back(flatten(*h));
    }
    long long rank = static_cast<long long>(Lattice::span(c.ad().dim(), gens).rank() - c.ad().rank());
    long long expect = expected_torelli_rank(s);
    bool pass = rank == expect;
    json r = base_report("rank", opt);
    r["inputs"] = {{"list", std::filesystem::path(path).filename().string()}, {"entries", jint(static_cast<long long>(list.exprs.size()))}};
    r["outputs"] = {{"rank", jint(rank)}, {"expected", jint(expect)}, {"pass", pass}};
    if (!pass) r["outputs"]["annotation"] = "list spans rank " + std::to_string(rank);
    r["tables"] = jtable(c.table());
    emit(opt, r);
    return pass ? kOk : kFailed;
}

IntVec parse_vector(const std::string& text) {
    IntVec v;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        try {
            v.emplace_back(tok);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("bad vector entry '" + tok + "'");
        }
    }
    return v;
}

int cmd_strata(const Options& opt, const std::string& graph_path, const std::string& k, int m, const std::vector<std::string>& vectors) {
    DualGraph g = load_graph(graph_path);
    KernelSpec spec = parse_kernel_spec(k, m);
    EdgeClassification c = classify_edges(g);
    Lattice l = kernel_lattice(g, spec);
    auto ids = [&](const std::vector<int>& es) {
        json a = json::array();
        for (int e : es) a.push_back(g.edges[static_cast<std::size_t>(e)].id);
        return a;
    };
    auto pairs = [&](const std::vector<EdgePair>& ps) {
        json a = json::array();
        for (const auto& p : ps) a.push_back(json::array({g.edges[static_cast<std::size_t>(p.first)].id, g.edges[static_cast<std::size_t>(p.second)].id}));
        return a;
    };
    json edges = json::array();
    for (const auto& e : g.edges) edges.push_back(e.id);
    json r = base_report("strata", opt);
    r["signature"] = g.sig().str();
    r["inputs"] = {{"graph", std::filesystem::path(graph_path).filename().string()}, {"k", spec.stable ? "4+" : std::to_string(spec.k)}, {"m", jint(m)}};
    r["outputs"] = {{"edges", edges},
                    {"classification", {{"N", ids(c.n)}, {"S", ids(c.s)}, {"S1", ids(c.s1)}, {"P", pairs(c.p)}, {"P_un", pairs(c.p_un)}}},
                    {"lattice_hnf", jmat(l.basis())},
                    {"lattice_rank", jint(static_cast<long long>(l.rank()))}};
    if (spec.flagged()) r["outputs"]["flag"] = "k=4 with 2||m: row includes m_2 P; see README";
    if (!vectors.empty()) {
        json mem = json::array();
        for (const auto& v : vectors) mem.push_back({{"vector", jvec(parse_vector(v))}, {"member", member(l, parse_vector(v))}});
        r["outputs"]["membership"] = mem;
    }
    emit(opt, r);
    return kOk;
}

int cmd_act(const Options& opt, const std::string& expr_text, const std::string& word_text) {
    SurfaceSig s = require_sig(opt);
    auto table = GeneratorTable::load(s, opt.data_dir);
    MappingClassExpr e = parse_expr(expr_text);
    Word w = parse_word(word_text, s.g, s.n);
    AutoOnPi a = realize(e, *table);
    NilQuotient q(s);
    Word img = apply(a.map, w);
    json r = base_report("act", opt);
    r["inputs"] = {{"expr", to_string(e)}, {"word", to_string(w, s.g)}};
    r["outputs"] = {{"image", to_string(img, s.g)}, {"normal_form", jnil(q.normal_form(img))}};
    r["tables"] = jtable(*table);
    emit(opt, r);
    return kOk;
}

int cmd_level(const Options& opt, const std::string& expr_text, int m) {
    SurfaceSig s = require_sig(opt);
    W3Context c(s, opt.data_dir);
    MappingClassExpr e = parse_expr(expr_text);
    bool in = c.in_level_w3m(e, m);
    json r = base_report("level", opt);
    r["inputs"] = {{"expr", to_string(e)}, {"m", jint(m)}};
    r["outputs"] = {{"in_level", in}};
    r["tables"] = jtable(c.table());
    emit(opt, r);
    return kOk;
}

int cmd_clutch(const Options& opt, const std::string& p0s, const std::string& p1s, const std::string& e0s, const std::string& e1s) {
    SurfaceSig p0 = parse_sig(p0s), p1 = parse_sig(p1s);
    SurfaceSig t{p0.g + p1.g, p0.n + p1.n};
    if (!opt.sig.empty() && parse_sig(opt.sig) != t) throw std::invalid_argument("--sig does not match the sum of the parts");
    ClutchInclusion c = clutch_inclusion(p0, p1, t);
    W3Context tc(t, opt.data_dir);
    const NilQuotient& q = tc.quotient();
    json r = base_report("clutch", opt);
    r["signature"] = t.str();
    r["inputs"] = {{"part0", p0.str()}, {"part1", p1.str()}, {"expr0", e0s}, {"expr1", e1s}};
    json sides = json::array();
    for (int side = 0; side < 2; ++side) {
        CoefMat m1 = clutch_gr1(c, side, q), m2 = clutch_gr2(c, side, q);
        json boundary = to_string(apply(c.iota[side], c.boundary[side]), t.g);
        sides.push_back({{"part", c.part[side].str()},
                         {"boundary_word", boundary},
                         {"gr1_rank", jint(static_cast<long long>(coef_rank(m1)))},
                         {"gr1_columns", jint(static_cast<long long>(m1.empty() ? 0 : m1[0].size()))},
                         {"gr2_rank", jint(static_cast<long long>(coef_rank(m2)))},
                         {"gr2_columns", jint(static_cast<long long>(m2.empty() ? 0 : m2[0].size()))}});
    }
    r["outputs"]["sides"] = sides;
    if (!e0s.empty() || !e1s.empty()) {
        auto t0 = GeneratorTable::load(c.part[0], opt.data_dir);
        auto t1 = GeneratorTable::load(c.part[1], opt.data_dir);
        PiCTElement x = clutch_pict(tc, c, realize(parse_expr(e0s), *t0), realize(parse_expr(e1s), *t1));
        json img = {{"sp", jmat(x.sp())}, {"outer", jmat(x.f.s)}};
        if (tc.quotient().d1() > 0 && x.sp() == coef_identity(static_cast<std::size_t>(q.d1()))) {
            HomExtClass j = tc.hom_ext(x.f.s);
            img["johnson_zero"] = j.is_zero();
        }
        r["outputs"]["image"] = img;
    }
    emit(opt, r);
    return kOk;
}

int cmd_verify(const Options& opt, const std::string& scope) {
    auto results = run_verify(scope, opt.seed, opt.data_dir);
    json checks = json::array();
    bool all = true;
    for (const auto& c : results) {
        checks.push_back({{"scope", c.scope}, {"check", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        all = all && c.pass;
    }
    json r = base_report("verify", opt);
    r["inputs"] = {{"scope", scope}, {"seed", jint(static_cast<long long>(opt.seed))}};
    r["outputs"] = {{"pass", all}, {"checks", checks}};
    emit(opt, r);
    return all ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mapping class actions on Pi/W^3, Johnson homomorphisms and monodromy lattices"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--sig", opt.sig, "surface signature g,n");
    app.add_option("--seed", opt.seed, "seed for randomized checks");
    app.add_option("--out", opt.out, "write the report to a file");
    app.add_option("--format", opt.format, "report format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--config", opt.config, "key=value defaults file");
    app.add_option("--data-dir", opt.data_dir, "directory holding tables/, torelli/ and graphs/");
    app.add_flag("--timing", opt.timing, "add wall-clock timing to the report (breaks byte stability)");
    app.fallthrough();

    std::string expr, word, list, graph, k = "2", scope = "all", part0, part1, expr0, expr1;
    int m = 2;
    std::vector<std::string> vectors;

    auto* johnson = app.add_subcommand("johnson", "Johnson class of a Torelli element");
    johnson->add_option("expr", expr, "mapping class expression")->required();
    auto* rank = app.add_subcommand("rank", "rank of the Johnson image of a list of Torelli elements");
    rank->add_option("list", list, "expression list (defaults to the shipped list)");
    auto* strata = app.add_subcommand("strata", "edge classification and monodromy kernel lattice");
    strata->add_option("graph", graph, "dual graph file")->required();
    strata->add_option("--k", k, "2, 3, 4 or 4+");
    strata->add_option("--m", m, "level")->required();
    strata->add_option("--vector", vectors, "comma-separated edge coefficients to test");
    auto* act = app.add_subcommand("act", "apply a mapping class to a word");
    act->add_option("expr", expr, "mapping class expression")->required();
    act->add_option("word", word, "word such as 'a1 B2 u1'")->required();
    auto* level = app.add_subcommand("level", "membership in the level Gamma^{w(3,m)}");
    level->add_option("expr", expr, "mapping class expression")->required();
    level->add_option("--m", m, "level")->required();
    auto* clutch = app.add_subcommand("clutch", "clutching inclusion of two parts");
    clutch->add_option("--part0", part0, "g0,n0")->required();
    clutch->add_option("--part1", part1, "g1,n1")->required();
    clutch->add_option("--expr0", expr0, "element on part 0");
    clutch->add_option("--expr1", expr1, "element on part 1");
    auto* verify = app.add_subcommand("verify", "run the self-checks");
    verify->add_option("scope", scope, "tables, nilq, johnson, strata or all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kInput;
    }

    try {
        apply_config(app, opt);
        int rc = kOk;
        if (*johnson) rc = cmd_johnson(opt, expr);
        else if (*rank) rc = cmd_rank(opt, list);
        else if (*strata) rc = cmd_strata(opt, graph, k, m, vectors);
        else if (*act) rc = cmd_act(opt, expr, word);
        else if (*level) rc = cmd_level(opt, expr, m);
        else if (*clutch) rc = cmd_clutch(opt, part0, part1, expr0, expr1);
        else if (*verify) rc = cmd_verify(opt, scope);
        return rc;
    } catch (const NotTorelliError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const CertificationError& e) {
        std::cerr << "certification failure: " << e.what() << "\n";
        return kFailed;
    } catch (const OverflowError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}

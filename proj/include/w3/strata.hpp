// Dual graphs of stable curves, the local monodromy kernels of the weight
// levels, and clutching inclusions of surface groups.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "w3/johnson.hpp"
#include "w3/lattice.hpp"
#include "w3/nilq.hpp"
#include "w3/surface.hpp"

namespace w3 {

struct GraphVertex {
    std::string id;
    int genus = 0;
    std::vector<int> punctures;
};

struct GraphEdge {
    std::string id;
    int v1 = 0;  // vertex indices
    int v2 = 0;
};

struct DualGraph {
    std::vector<GraphVertex> vertices;
    std::vector<GraphEdge> edges;

    int betti(const std::vector<bool>& removed = {}) const;
    // Total genus: vertex genera plus the first Betti number.
    int genus() const;
    int punctures() const;
    SurfaceSig sig() const { return {genus(), punctures()}; }
};

// Line format: "vertex <id> genus=<g> punctures=<list>", "edge <id> <v1> <v2>",
// '#' comments. Throws std::invalid_argument on malformed or unstable graphs.
DualGraph parse_graph(const std::string& text);
DualGraph load_graph(const std::string& path);
void validate_graph(const DualGraph& g);

using EdgePair = std::pair<int, int>;

struct EdgeClassification {
    std::vector<int> n;  // non-separating
    std::vector<int> s;  // separating
    std::vector<int> s1;  // separating, one side unpunctured of genus 1
    std::vector<EdgePair> p;  // cut pairs
    std::vector<EdgePair> p_un;  // cut pairs with an unpunctured side
};

EdgeClassification classify_edges(const DualGraph& g);

struct KernelSpec {
    int k = 2;  // 2, 3 or 4
    bool stable = false;  // "k >= 4 with gcd(m,6) = 1"
    int m = 2;
    std::string str() const;
    // The (k = 4, 2||m) row, reported for scrutiny.
    bool flagged() const { return !stable && k == 4 && m % 4 == 2; }
};

// k is "2", "3", "4" or "4+"; throws std::invalid_argument on an invalid pair.
KernelSpec parse_kernel_spec(const std::string& k, int m);

// Sublattice of E = Z^{edges} in edge order.
Lattice kernel_lattice(const DualGraph& g, const KernelSpec& spec);
// Throws std::invalid_argument on dimension mismatch.
bool member(const Lattice& l, const IntVec& v);

// Part i is (g_i, n_i); its surface group Pi_{g_i, n_i + 1} embeds in the target.
// Part 0 carries handles 1..g0 and punctures 1..n0, part 1 the rest. The extra
// puncture of each part is its boundary.
struct ClutchInclusion {
    SurfaceSig part[2];        // (g_i, n_i + 1)
    SurfaceSig target;
    GenImageMap iota[2];       // part letters -> target words
    Word boundary[2];          // part word mapped onto the inverse of the boundary block
    std::vector<Letter> block[2];  // target letter of each part letter, 0 for the boundary
};

ClutchInclusion clutch_inclusion(SurfaceSig part0, SurfaceSig part1, SurfaceSig target);

// Induced maps on Q, columns indexed by the part's basis.
CoefMat clutch_gr1(const ClutchInclusion& c, int side, const NilQuotient& target_q);
CoefMat clutch_gr2(const ClutchInclusion& c, int side, const NilQuotient& target_q);
std::size_t coef_rank(const CoefMat& m);

// Extends an automorphism of part `side` by the identity on the other block,
// after normalizing it to fix the part boundary word exactly.
GenImageMap clutch_extend(const ClutchInclusion& c, int side, const AutoOnPi& a);
// Product of both extensions as an element of the target's rho_{W^3} image.
PiCTElement clutch_pict(const W3Context& target, const ClutchInclusion& c, const AutoOnPi& a0, const AutoOnPi& a1);

}  // namespace w3

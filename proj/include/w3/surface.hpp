// Surface group presentations, the curated generator tables, and certification
// of generator-image maps as elements of A(g,n).
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "w3/coef.hpp"
#include "w3/word.hpp"

namespace w3 {

struct SurfaceSig {
    int g = 0;
    int n = 0;

    int rank() const { return 2 * g + n; }
    bool valid_top() const { return g >= 0 && n >= 0 && 2 * g - 2 + n > 0; }
    bool valid_part() const { return g >= 0 && n >= 0 && 2 * g - 1 + n > 0; }
    std::string str() const { return std::to_string(g) + "," + std::to_string(n); }
    bool operator==(const SurfaceSig&) const = default;
    auto operator<=>(const SurfaceSig&) const = default;
};

// Parses "g,n"; throws std::invalid_argument.
SurfaceSig parse_sig(const std::string& text);

struct Presentation {
    SurfaceSig sig;
    std::vector<std::string> generators;
    Word relator;  // prod [a_i,b_i] * u_n ... u_1
};

Presentation presentation(SurfaceSig sig);
Word relator(SurfaceSig sig);

struct CertificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Certificate {
    Word relator_conj;               // f(R) = z R z^-1
    std::vector<Word> puncture_conj;  // f(u_j) = z_j u_j z_j^-1
};

struct AutoOnPi {
    SurfaceSig sig;
    GenImageMap map;
    Certificate cert;
};

// Throws CertificationError when the relator or a puncture class is moved.
AutoOnPi validate_auto(const GenImageMap& map, SurfaceSig sig);
// Checks a certificate by direct substitution.
bool check_certificate(const AutoOnPi& a);

CoefMat symplectic_form(int g);
bool is_symplectic(const CoefMat& m);
// Action on H_1 in the basis a1,b1,...; column k is the image of generator k.
// Throws CertificationError if the result is not symplectic.
CoefMat homology_matrix(const AutoOnPi& a);

// Curated, versioned table of mapping-class generator actions.
class GeneratorTable {
public:
    // Loads the shipped table for sig. Closed surfaces use the one-puncture
    // table restricted to entries supported away from the puncture.
    static std::shared_ptr<const GeneratorTable> load(SurfaceSig sig, const std::string& data_dir);
    static GeneratorTable parse_file(const std::string& path);
    static GeneratorTable parse_text(const std::string& text);

    SurfaceSig sig() const { return sig_; }
    const std::string& version() const { return version_; }
    const std::string& checksum() const { return checksum_; }

    bool has(const std::string& name) const { return entries_.count(name) != 0; }
    // Throws std::invalid_argument for an unknown name.
    const GenImageMap& get(const std::string& name) const;
    // Names without the ^-1 suffix.
    std::vector<std::string> curve_names() const;
    const std::map<std::string, GenImageMap>& entries() const { return entries_; }

    // Per-entry certification and inverse-pair check; returns failure messages.
    std::vector<std::string> certify() const;

private:
    SurfaceSig sig_;
    std::string version_;
    std::string checksum_;
    std::map<std::string, GenImageMap> entries_;
};

std::string default_data_dir();
std::string fnv1a64_hex(const std::string& data);

// One factor of a mapping class expression.
struct Term {
    enum class Kind { Twist, BoundingPair, Separating };
    Kind kind = Kind::Twist;
    std::string a;  // curve name
    std::string b;  // second curve of a bounding pair
    int k = 0;      // genus parameter of a separating macro
    long long exp = 1;
    bool operator==(const Term&) const = default;
};

// Product of terms; realize(t1*t2) = realize(t1) after realize(t2).
struct MappingClassExpr {
    std::vector<Term> terms;
    bool operator==(const MappingClassExpr&) const = default;
};

// Chain-relation macro for the twist along the boundary of the first k handles
// (k >= 1), or the twist around the disc holding u1,u2 (k = 0).
// Throws std::invalid_argument when no such essential separating curve exists.
MappingClassExpr separating_twist(SurfaceSig sig, int k);

// Generator map of a single term (no certification).
GenImageMap term_map(const Term& t, const GeneratorTable& table);
AutoOnPi realize(const MappingClassExpr& e, const GeneratorTable& table);

}  // namespace w3

// Free-group words over the generators of a surface group presentation.
//
// A letter is a nonzero int: +k is the k-th generator (1-based), -k its inverse.
// Generator order is a1,b1,...,ag,bg,u1,...,un.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace w3 {

using Letter = int;

class Word {
public:
    Word() = default;
    // Freely reduces its input.
    explicit Word(std::vector<Letter> letters);
    static Word letter(Letter x) { return Word(std::vector<Letter>{x}); }

    const std::vector<Letter>& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    Letter operator[](std::size_t i) const { return letters_[i]; }

    Word inverse() const;
    Word operator*(const Word& rhs) const;
    Word pow(long long k) const;
    bool operator==(const Word&) const = default;
    auto operator<=>(const Word&) const = default;

private:
    std::vector<Letter> letters_;
};

std::vector<Letter> reduce(const std::vector<Letter>& raw);
Word commutator(const Word& x, const Word& y);

// Endomorphism of a free group given by images of generators 1..rank.
class GenImageMap {
public:
    GenImageMap() = default;
    explicit GenImageMap(std::vector<Word> images);
    static GenImageMap identity(int rank);

    int rank() const { return static_cast<int>(images_.size()); }
    const Word& image(int gen) const { return images_.at(gen - 1); }
    const std::vector<Word>& images() const { return images_; }
    bool operator==(const GenImageMap&) const = default;

private:
    std::vector<Word> images_;
};

// Throws std::out_of_range on a letter outside the map's alphabet.
Word apply(const GenImageMap& f, const Word& w);
// compose(f, g) acts as f after g.
GenImageMap compose(const GenImageMap& f, const GenImageMap& g);
GenImageMap conjugation(int rank, const Word& z);  // x -> z x z^-1

struct CyclicForm {
    Word conj;  // w = conj * core * conj^-1
    Word core;  // cyclically reduced
};
CyclicForm cyclic_reduce(const Word& w);

// z with w1 = z w2 z^-1, or nullopt when not conjugate in the free group.
std::optional<Word> conjugacy_witness(const Word& w1, const Word& w2);

// Text form: a1 B2 u1, uppercase is the inverse; "1" is the empty word.
std::string letter_name(Letter x, int g);
std::string to_string(const Word& w, int g);
// Throws std::invalid_argument on unknown symbols.
Letter parse_letter(std::string_view tok, int g, int n);
Word parse_word(std::string_view text, int g, int n);

}  // namespace w3

#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "apar/errors.hpp"

namespace apar {

/// Five Factor Model traits, in the fixed tie-break order used everywhere.
enum class Trait : int {
    Openness = 0,
    Conscientiousness = 1,
    Extraversion = 2,
    Agreeableness = 3,
    Neuroticism = 4,
};

inline constexpr std::array<Trait, 5> kTraitOrder = {
    Trait::Openness, Trait::Conscientiousness, Trait::Extraversion, Trait::Agreeableness,
    Trait::Neuroticism};

const char* trait_name(Trait t);
char trait_letter(Trait t);  // O, C, E, A, N
std::optional<Trait> trait_from_name(std::string_view name);

/// Lowercase tokens: ASCII case-folded, split on maximal runs of
/// non-alphanumeric bytes. Bytes above 0x7f are treated as word characters
/// so multi-byte sequences survive intact.
std::vector<std::string> tokenize(std::string_view text);

/// Word-category dictionary. A pattern is either an exact token or a prefix
/// stem with a single trailing '*'.
class Lexicon {
public:
    /// Format: "%category NAME" opens a category, following nonblank lines
    /// are patterns, '#' starts a comment. Errors carry line numbers.
    static Lexicon load(std::istream& in);
    static Lexicon load_file(const std::string& path);

    const std::vector<std::string>& category_names() const { return names_; }
    bool has_category(const std::string& name) const;

    /// True when the token equals an exact pattern or starts with a stem.
    bool matches(const std::string& category, const std::string& token) const;

private:
    struct Patterns {
        std::unordered_set<std::string> exact;
        std::vector<std::string> stems;  // '*' stripped
    };
    std::vector<std::string> names_;  // file order
    std::map<std::string, Patterns> categories_;
};

/// frequency(category) = matching tokens / total tokens; all zero for an
/// empty token sequence. A token may count toward several categories.
std::map<std::string, double> category_frequencies(const std::vector<std::string>& tokens,
                                                   const Lexicon& lex);

/// Weighted sum over categories; categories absent from either map
/// contribute nothing. Throws on non-finite inputs.
double trait_score(const std::map<std::string, double>& freqs,
                   const std::map<std::string, double>& weights);

/// Per-trait category weights (the regression coefficients). All five
/// traits must be present with at least one nonzero weight each.
class WeightTable {
public:
    /// CSV with header "trait,category,weight".
    static WeightTable load(std::istream& in);
    static WeightTable load_file(const std::string& path);

    const std::map<std::string, double>& weights(Trait t) const {
        return weights_[static_cast<int>(t)];
    }

private:
    std::array<std::map<std::string, double>, 5> weights_;
};

}  // namespace apar

#include "apar/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace apar {

const char* trait_name(Trait t) {
    switch (t) {
        case Trait::Openness: return "Openness";
        case Trait::Conscientiousness: return "Conscientiousness";
        case Trait::Extraversion: return "Extraversion";
        case Trait::Agreeableness: return "Agreeableness";
        case Trait::Neuroticism: return "Neuroticism";
    }
    return "?";
}

char trait_letter(Trait t) { return "OCEAN"[static_cast<int>(t)]; }

std::optional<Trait> trait_from_name(std::string_view name) {
    for (Trait t : kTraitOrder)
        if (name == trait_name(t)) return t;
    return std::nullopt;
}

namespace {

bool is_word_byte(unsigned char c) {
    if (c >= 0x80) return true;  // keep multi-byte sequences together
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

char fold(unsigned char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

std::string trimmed(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        if (is_word_byte(c)) {
            current.push_back(fold(c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

Lexicon Lexicon::load(std::istream& in) {
    Lexicon lex;
    std::string line;
    std::size_t lineno = 0;
    std::string open_category;

    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::string body = trimmed(line);
        if (body.empty()) continue;

        if (body.starts_with("%category")) {
            std::string name = trimmed(body.substr(9));
            if (name.empty()) throw ParseError(lineno, "%category without a name");
            if (lex.categories_.count(name))
                throw ParseError(lineno, "duplicate category '" + name + "'");
            lex.categories_.emplace(name, Patterns{});
            lex.names_.push_back(name);
            open_category = std::move(name);
            continue;
        }
        if (open_category.empty()) throw ParseError(lineno, "pattern before any %category");

        std::string pattern;
        pattern.reserve(body.size());
        for (unsigned char c : body) pattern.push_back(fold(c));

        auto star = pattern.find('*');
        auto& pats = lex.categories_.at(open_category);
        if (star == std::string::npos) {
            pats.exact.insert(std::move(pattern));
        } else {
            if (star != pattern.size() - 1)
                throw ParseError(lineno, "'*' allowed only as the final character");
            pattern.pop_back();
            if (pattern.empty()) throw ParseError(lineno, "bare '*' is not a pattern");
            pats.stems.push_back(std::move(pattern));
        }
    }
    if (lex.categories_.empty()) throw std::runtime_error("lexicon defines no categories");
    return lex;
}

Lexicon Lexicon::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open lexicon file: " + path);
    return load(in);
}

bool Lexicon::has_category(const std::string& name) const { return categories_.count(name) > 0; }

bool Lexicon::matches(const std::string& category, const std::string& token) const {
    auto it = categories_.find(category);
    if (it == categories_.end()) return false;
    if (it->second.exact.count(token)) return true;
    for (const auto& stem : it->second.stems)
        if (token.size() >= stem.size() && token.compare(0, stem.size(), stem) == 0) return true;
    return false;
}

std::map<std::string, double> category_frequencies(const std::vector<std::string>& tokens,
                                                   const Lexicon& lex) {
    std::map<std::string, double> freqs;
    for (const auto& name : lex.category_names()) freqs[name] = 0.0;
    if (tokens.empty()) return freqs;

    for (const auto& name : lex.category_names()) {
        std::size_t matched = 0;
        for (const auto& token : tokens)
            if (lex.matches(name, token)) ++matched;
        freqs[name] = static_cast<double>(matched) / static_cast<double>(tokens.size());
    }
    return freqs;
}

double trait_score(const std::map<std::string, double>& freqs,
                   const std::map<std::string, double>& weights) {
    double score = 0.0;
    for (const auto& [category, weight] : weights) {
        if (!std::isfinite(weight))
            throw std::invalid_argument("non-finite weight for category " + category);
        auto it = freqs.find(category);
        if (it == freqs.end()) continue;
        if (!std::isfinite(it->second))
            throw std::invalid_argument("non-finite frequency for category " + category);
        score += weight * it->second;
    }
    return score;
}

WeightTable WeightTable::load(std::istream& in) {
    WeightTable table;
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) throw std::runtime_error("empty weight table");
    ++lineno;
    if (trimmed(line) != "trait,category,weight")
        throw ParseError(lineno, "expected header 'trait,category,weight'");

    while (std::getline(in, line)) {
        ++lineno;
        std::string body = trimmed(line);
        if (body.empty()) continue;

        std::istringstream fields(body);
        std::string trait_str, category, weight_str;
        if (!std::getline(fields, trait_str, ',') || !std::getline(fields, category, ',') ||
            !std::getline(fields, weight_str))
            throw ParseError(lineno, "expected trait,category,weight");

        auto trait = trait_from_name(trimmed(trait_str));
        if (!trait) throw ParseError(lineno, "unknown trait '" + trimmed(trait_str) + "'");

        double weight;
        try {
            weight = std::stod(trimmed(weight_str));
        } catch (const std::exception&) {
            throw ParseError(lineno, "invalid weight '" + trimmed(weight_str) + "'");
        }
        if (!std::isfinite(weight)) throw ParseError(lineno, "weight must be finite");

        table.weights_[static_cast<int>(*trait)][trimmed(category)] = weight;
    }

    for (Trait t : kTraitOrder) {
        const auto& w = table.weights_[static_cast<int>(t)];
        bool any_nonzero = std::any_of(w.begin(), w.end(), [](auto& kv) { return kv.second != 0.0; });
        if (w.empty() || !any_nonzero)
            throw std::runtime_error(std::string("weight table missing nonzero weights for ") +
                                     trait_name(t));
    }
    return table;
}

WeightTable WeightTable::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open weight table: " + path);
    return load(in);
}

}  // namespace apar

#include "apar/dataset.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace apar {

UserItemIndex::UserItemIndex(std::vector<std::string> users, std::vector<std::string> items)
    : users_(std::move(users)), items_(std::move(items)) {
    user_rows_.reserve(users_.size());
    item_cols_.reserve(items_.size());
    for (std::size_t i = 0; i < users_.size(); ++i) user_rows_[users_[i]] = static_cast<int>(i);
    for (std::size_t j = 0; j < items_.size(); ++j) item_cols_[items_[j]] = static_cast<int>(j);
}

std::optional<int> UserItemIndex::user_row(const std::string& id) const {
    auto it = user_rows_.find(id);
    if (it == user_rows_.end()) return std::nullopt;
    return it->second;
}

std::optional<int> UserItemIndex::item_col(const std::string& id) const {
    auto it = item_cols_.find(id);
    if (it == item_cols_.end()) return std::nullopt;
    return it->second;
}

RatingsDataset RatingsDataset::from_records(std::vector<ReviewRecord> records, RatingScale scale) {
    RatingsDataset ds;
    ds.scale_ = scale;

    std::vector<ReviewRecord> kept;
    kept.reserve(records.size());
    std::map<std::pair<std::string, std::string>, std::size_t> position;
    std::size_t duplicates = 0;

    for (auto& rec : records) {
        if (rec.user_id.empty() || rec.item_id.empty())
            throw std::invalid_argument("record with empty user or item id");
        if (!scale.contains(rec.rating))
            throw std::invalid_argument("rating " + std::to_string(rec.rating) +
                                        " outside declared scale");
        if (rec.helpful_votes < 0 || rec.total_votes < 0 || rec.helpful_votes > rec.total_votes)
            throw std::invalid_argument("helpful_votes exceed total_votes for user " + rec.user_id);

        auto key = std::make_pair(rec.user_id, rec.item_id);
        auto it = position.find(key);
        if (it == position.end()) {
            position.emplace(std::move(key), kept.size());
            kept.push_back(std::move(rec));
        } else {
            ++duplicates;
            // keep the latest timestamp; ties resolved in favor of file order
            if (rec.timestamp >= kept[it->second].timestamp) kept[it->second] = std::move(rec);
        }
    }
    if (kept.empty()) throw std::runtime_error("empty dataset");

    std::sort(kept.begin(), kept.end(), [](const ReviewRecord& a, const ReviewRecord& b) {
        if (a.user_id != b.user_id) return a.user_id < b.user_id;
        if (a.item_id != b.item_id) return a.item_id < b.item_id;
        return a.timestamp < b.timestamp;
    });

    std::vector<std::string> users, items;
    users.reserve(kept.size());
    items.reserve(kept.size());
    for (const auto& rec : kept) {
        users.push_back(rec.user_id);
        items.push_back(rec.item_id);
    }
    std::sort(users.begin(), users.end());
    users.erase(std::unique(users.begin(), users.end()), users.end());
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());

    ds.records_ = std::move(kept);
    ds.index_ = std::make_shared<UserItemIndex>(std::move(users), std::move(items));
    ds.stats_.parsed = records.size();
    ds.stats_.duplicates = duplicates;
    ds.rebuild_user_lists();
    return ds;
}

void RatingsDataset::rebuild_user_lists() {
    by_user_.assign(index_->user_count(), {});
    for (std::size_t r = 0; r < records_.size(); ++r) {
        int row = index_->user_row(records_[r].user_id).value();
        by_user_[row].push_back(r);
    }
}

RatingsDataset RatingsDataset::subset(const std::vector<std::size_t>& ordinals) const {
    RatingsDataset out;
    out.scale_ = scale_;
    out.index_ = index_;
    out.records_.reserve(ordinals.size());
    for (std::size_t r : ordinals) out.records_.push_back(records_.at(r));
    out.rebuild_user_lists();
    return out;
}

namespace {

using nlohmann::json;

// Fetch a field or fail with the offending line number.
const json& field(const json& j, const char* key, std::size_t line) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(line, std::string("missing field '") + key + "'");
    return *it;
}

std::int64_t as_integer(const json& v, const std::string& what, std::size_t line) {
    if (!v.is_number_integer() && !v.is_number_unsigned()) {
        if (v.is_number_float()) {
            double d = v.get<double>();
            auto rounded = static_cast<std::int64_t>(d);
            if (static_cast<double>(rounded) == d) return rounded;
        }
        throw ParseError(line, what + " is not an integer");
    }
    return v.get<std::int64_t>();
}

std::int64_t int_field(const json& j, const char* key, std::size_t line) {
    return as_integer(field(j, key, line), std::string("field '") + key + "'", line);
}

std::int64_t int_element(const json& arr, std::size_t idx, std::size_t line) {
    return as_integer(arr.at(idx), "vote count", line);
}

}  // namespace

RatingsDataset parse_reviews(std::istream& in, const std::string& domain, RatingScale scale) {
    std::vector<ReviewRecord> records;
    ParseStats stats;
    std::string line;
    std::size_t lineno = 0;

    while (std::getline(in, line)) {
        ++lineno;
        ++stats.lines;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception&) {
            throw ParseError(lineno, "invalid JSON");
        }
        if (!j.is_object()) throw ParseError(lineno, "line is not a JSON object");

        ReviewRecord rec;
        const json& uid = field(j, "reviewerID", lineno);
        const json& iid = field(j, "asin", lineno);
        if (!uid.is_string() || !iid.is_string())
            throw ParseError(lineno, "reviewerID/asin must be strings");
        rec.user_id = uid.get<std::string>();
        rec.item_id = iid.get<std::string>();
        if (rec.user_id.empty() || rec.item_id.empty())
            throw ParseError(lineno, "empty reviewerID or asin");

        const json& text = field(j, "reviewText", lineno);
        if (!text.is_string()) throw ParseError(lineno, "reviewText must be a string");
        rec.text = text.get<std::string>();

        const json& helpful = field(j, "helpful", lineno);
        if (!helpful.is_array() || helpful.size() != 2)
            throw ParseError(lineno, "helpful must be a two-element array");
        rec.helpful_votes = int_element(helpful, 0, lineno);
        rec.total_votes = int_element(helpful, 1, lineno);
        rec.timestamp = int_field(j, "unixReviewTime", lineno);
        rec.domain = domain;

        const json& overall = field(j, "overall", lineno);
        if (!overall.is_number()) throw ParseError(lineno, "overall must be a number");
        const double raw_rating = overall.get<double>();
        rec.rating = static_cast<int>(raw_rating);

        // non-integral or out-of-scale ratings and inconsistent votes are
        // rejected records, not fatal parse errors
        if (static_cast<double>(rec.rating) != raw_rating || !scale.contains(rec.rating) ||
            rec.helpful_votes < 0 || rec.helpful_votes > rec.total_votes) {
            ++stats.rejected;
            continue;
        }
        ++stats.parsed;
        records.push_back(std::move(rec));
    }

    if (records.empty()) throw std::runtime_error("empty dataset");
    RatingsDataset ds = RatingsDataset::from_records(std::move(records), scale);
    stats.duplicates = ds.stats_.duplicates;
    ds.stats_ = stats;
    return ds;
}

namespace {

void dump_record(const ReviewRecord& rec, std::ostream& out) {
    nlohmann::ordered_json j;
    j["reviewerID"] = rec.user_id;
    j["asin"] = rec.item_id;
    j["overall"] = rec.rating;
    j["reviewText"] = rec.text;
    j["helpful"] = {rec.helpful_votes, rec.total_votes};
    j["unixReviewTime"] = rec.timestamp;
    out << j.dump() << '\n';
}

}  // namespace

void write_canonical(const RatingsDataset& ds, std::ostream& out) {
    for (const auto& rec : ds.records()) dump_record(rec, out);
}

std::string canonical_dump(const RatingsDataset& ds) {
    std::ostringstream os;
    write_canonical(ds, os);
    return os.str();
}

std::uint64_t dataset_fingerprint(const RatingsDataset& ds) {
    const std::string bytes = canonical_dump(ds);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace apar

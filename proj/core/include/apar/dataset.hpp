#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "apar/errors.hpp"

namespace apar {

/// Inclusive integer rating bounds. The default 1..5 reserves 0 for
/// "unobserved" in the interaction matrix.
struct RatingScale {
    int min = 1;
    int max = 5;

    bool contains(int r) const { return r >= min && r <= max; }
};

struct ReviewRecord {
    std::string user_id;
    std::string item_id;
    int rating = 0;
    std::string text;
    std::int64_t helpful_votes = 0;
    std::int64_t total_votes = 0;
    std::int64_t timestamp = 0;  // seconds since epoch, informational
    std::string domain;

    bool operator==(const ReviewRecord&) const = default;
};

struct ParseStats {
    std::size_t lines = 0;       // physical lines seen (incl. blanks)
    std::size_t parsed = 0;      // valid records before deduplication
    std::size_t rejected = 0;    // well-formed lines dropped (scale/vote violations)
    std::size_t duplicates = 0;  // (user,item) collisions collapsed
};

/// Dense user/item index maps, frozen at ingestion. Every split of a dataset
/// shares the parent's maps so factor-matrix rows stay aligned.
class UserItemIndex {
public:
    UserItemIndex(std::vector<std::string> users, std::vector<std::string> items);

    int user_count() const { return static_cast<int>(users_.size()); }
    int item_count() const { return static_cast<int>(items_.size()); }

    const std::string& user_id(int row) const { return users_.at(row); }
    const std::string& item_id(int col) const { return items_.at(col); }

    std::optional<int> user_row(const std::string& id) const;
    std::optional<int> item_col(const std::string& id) const;

private:
    std::vector<std::string> users_;  // sorted, unique
    std::vector<std::string> items_;
    std::unordered_map<std::string, int> user_rows_;
    std::unordered_map<std::string, int> item_cols_;
};

/// Immutable review corpus with canonical record order
/// (user_id, item_id, timestamp) and at most one record per (user, item).
class RatingsDataset {
public:
    /// Deduplicates (keep latest timestamp, ties broken by position in
    /// `records`), sorts canonically, and builds the index maps.
    /// Throws std::runtime_error("empty dataset") when nothing survives.
    static RatingsDataset from_records(std::vector<ReviewRecord> records, RatingScale scale = {});

    const std::vector<ReviewRecord>& records() const { return records_; }
    const RatingScale& scale() const { return scale_; }
    const ParseStats& stats() const { return stats_; }

    int user_count() const { return index_->user_count(); }
    int item_count() const { return index_->item_count(); }
    const UserItemIndex& index() const { return *index_; }
    std::shared_ptr<const UserItemIndex> index_ptr() const { return index_; }

    /// Record ordinals (into records()) of one user, canonical order.
    const std::vector<std::size_t>& records_of_user(int row) const { return by_user_.at(row); }

    /// New dataset holding the given record ordinals, sharing this dataset's
    /// index maps. Ordinals must be sorted and unique.
    RatingsDataset subset(const std::vector<std::size_t>& ordinals) const;

private:
    RatingsDataset() = default;
    void rebuild_user_lists();

    std::vector<ReviewRecord> records_;
    std::shared_ptr<const UserItemIndex> index_;
    RatingScale scale_;
    std::vector<std::vector<std::size_t>> by_user_;
    ParseStats stats_;

    friend RatingsDataset parse_reviews(std::istream&, const std::string&, RatingScale);
};

/// Parse a JSON-lines review stream (keys reviewerID, asin, overall,
/// reviewText, helpful = [helpful_votes, total_votes], unixReviewTime).
/// Malformed lines raise ParseError with the line number; records whose
/// rating falls outside `scale` or whose votes are inconsistent are
/// rejected and counted.
RatingsDataset parse_reviews(std::istream& in, const std::string& domain, RatingScale scale = {});

/// Canonical JSON-lines dump: records in canonical order, fixed key order,
/// byte-identical across runs. parse_reviews(write_canonical(ds)) == ds.
void write_canonical(const RatingsDataset& ds, std::ostream& out);
std::string canonical_dump(const RatingsDataset& ds);

/// FNV-1a over the canonical dump; identifies a dataset in model files.
std::uint64_t dataset_fingerprint(const RatingsDataset& ds);

}  // namespace apar

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace votelib {

enum class ErrorCode {
    unknown_alternative,
    duplicate_entry,
    incomplete_ranking,
    missing_agents,
    duplicate_agent_id,
    subset_too_small,
    score_out_of_range,
    missing_score,
    oracle_unavailable,
    oracle_ballot_invalid,
    input_kind_mismatch,
    instance_kind_mismatch,
    k_out_of_range,
    size_exceeds_ensemble,
    subject_set_mismatch,
    bounds_too_large,
    parse_error,
    invalid_argument,
};

class VoteError : public std::runtime_error {
public:
    VoteError(ErrorCode code, std::string detail)
        : std::runtime_error(detail), code_(code), detail_(std::move(detail)) {}

    ErrorCode code() const { return code_; }
    const std::string& detail() const { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

/// The candidate choices of one decision. Index order is the canonical
/// tie-break order used by every rule: lower index wins ties.
class AlternativeSet {
public:
    AlternativeSet() = default;

    explicit AlternativeSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
        if (labels_.size() < 2)
            throw VoteError(ErrorCode::invalid_argument, "alternative set needs at least 2 entries");
        std::unordered_set<std::string> seen;
        for (const auto& label : labels_) {
            if (!seen.insert(label).second)
                throw VoteError(ErrorCode::duplicate_entry, "duplicate alternative label: " + label);
        }
    }

    int size() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int index) const { return labels_.at(static_cast<std::size_t>(index)); }

    std::optional<int> index_of(const std::string& label) const {
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (labels_[i] == label) return static_cast<int>(i);
        return std::nullopt;
    }

    bool operator==(const AlternativeSet& other) const { return labels_ == other.labels_; }

private:
    std::vector<std::string> labels_;
};

/// One agent's strict total preference order, most-preferred first.
/// `ranking` is always a permutation of 0..m-1.
struct Ballot {
    std::vector<int> ranking;
    std::string agent_id;

    int position_of(int alternative) const {
        for (std::size_t i = 0; i < ranking.size(); ++i)
            if (ranking[i] == alternative) return static_cast<int>(i);
        return -1;
    }
};

/// Cardinal ballot: one integer score per alternative, indexed by alternative.
struct ScoredBallot {
    std::vector<int> scores;
    std::string agent_id;
};

struct Profile {
    AlternativeSet alternatives;
    std::vector<Ballot> ballots;

    int n() const { return static_cast<int>(ballots.size()); }
    int m() const { return alternatives.size(); }
};

struct ScoredProfile {
    AlternativeSet alternatives;
    std::vector<ScoredBallot> ballots;

    int n() const { return static_cast<int>(ballots.size()); }
    int m() const { return alternatives.size(); }
};

/// Checks a raw ranked list of labels against the alternative set: must be a
/// complete, duplicate-free permutation.
inline Ballot validate_ballot(const std::vector<std::string>& raw, const AlternativeSet& alts,
                              std::string agent_id = {}) {
    std::vector<bool> used(static_cast<std::size_t>(alts.size()), false);
    Ballot ballot;
    ballot.agent_id = std::move(agent_id);
    ballot.ranking.reserve(raw.size());
    for (const auto& label : raw) {
        const auto idx = alts.index_of(label);
        if (!idx)
            throw VoteError(ErrorCode::unknown_alternative, "unknown alternative: " + label);
        if (used[static_cast<std::size_t>(*idx)])
            throw VoteError(ErrorCode::duplicate_entry, "duplicate entry: " + label);
        used[static_cast<std::size_t>(*idx)] = true;
        ballot.ranking.push_back(*idx);
    }
    for (int i = 0; i < alts.size(); ++i) {
        if (!used[static_cast<std::size_t>(i)])
            throw VoteError(ErrorCode::incomplete_ranking, "incomplete ranking, missing: " + alts.label(i));
    }
    return ballot;
}

/// Checks a raw label->score map: every alternative scored exactly once and
/// each score within [range_min, range_max].
inline ScoredBallot validate_scored_ballot(const std::vector<std::pair<std::string, int>>& raw,
                                           const AlternativeSet& alts, int range_min, int range_max,
                                           std::string agent_id = {}) {
    ScoredBallot ballot;
    ballot.agent_id = std::move(agent_id);
    ballot.scores.assign(static_cast<std::size_t>(alts.size()), 0);
    std::vector<bool> scored(static_cast<std::size_t>(alts.size()), false);
    for (const auto& [label, score] : raw) {
        const auto idx = alts.index_of(label);
        if (!idx)
            throw VoteError(ErrorCode::unknown_alternative, "unknown alternative: " + label);
        if (scored[static_cast<std::size_t>(*idx)])
            throw VoteError(ErrorCode::duplicate_entry, "duplicate score entry: " + label);
        if (score < range_min || score > range_max)
            throw VoteError(ErrorCode::score_out_of_range,
                            "score out of range for " + label + ": " + std::to_string(score));
        scored[static_cast<std::size_t>(*idx)] = true;
        ballot.scores[static_cast<std::size_t>(*idx)] = score;
    }
    for (int i = 0; i < alts.size(); ++i) {
        if (!scored[static_cast<std::size_t>(i)])
            throw VoteError(ErrorCode::missing_score, "missing score for: " + alts.label(i));
    }
    return ballot;
}

/// Assembles a profile from individually valid ballots; enforces the exact
/// expected ballot count and distinct agent ids.
inline Profile build_profile(AlternativeSet alts, std::vector<Ballot> ballots, int expected_n) {
    if (static_cast<int>(ballots.size()) != expected_n)
        throw VoteError(ErrorCode::missing_agents,
                        "expected " + std::to_string(expected_n) + " ballots, got " +
                            std::to_string(ballots.size()));
    std::unordered_set<std::string> ids;
    for (const auto& ballot : ballots) {
        if (!ids.insert(ballot.agent_id).second)
            throw VoteError(ErrorCode::duplicate_agent_id, "duplicate agent id: " + ballot.agent_id);
    }
    if (ballots.empty())
        throw VoteError(ErrorCode::missing_agents, "profile needs at least one ballot");
    return Profile{std::move(alts), std::move(ballots)};
}

/// m x m matrix of pairwise preference counts. wins(a,b) counts ballots
/// ranking a above b; margin is antisymmetric and wins(a,b)+wins(b,a)=n.
class PairwiseTally {
public:
    PairwiseTally(int m, int n) : m_(m), n_(n), wins_(static_cast<std::size_t>(m) * m, 0) {}

    int wins(int a, int b) const { return wins_[static_cast<std::size_t>(a) * m_ + b]; }
    int margin(int a, int b) const { return wins(a, b) - wins(b, a); }
    int m() const { return m_; }
    int n() const { return n_; }

    void add_win(int a, int b) { ++wins_[static_cast<std::size_t>(a) * m_ + b]; }

private:
    int m_;
    int n_;
    std::vector<int> wins_;
};

inline PairwiseTally pairwise_tally(const Profile& profile) {
    PairwiseTally tally(profile.m(), profile.n());
    for (const auto& ballot : profile.ballots) {
        for (std::size_t i = 0; i < ballot.ranking.size(); ++i)
            for (std::size_t j = i + 1; j < ballot.ranking.size(); ++j)
                tally.add_win(ballot.ranking[i], ballot.ranking[j]);
    }
    return tally;
}

namespace detail {

inline std::vector<int> normalized_keep(const std::vector<int>& keep, int m) {
    std::vector<int> sorted = keep;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (static_cast<int>(sorted.size()) < 2)
        throw VoteError(ErrorCode::subset_too_small, "restriction needs at least 2 alternatives");
    for (const int idx : sorted)
        if (idx < 0 || idx >= m)
            throw VoteError(ErrorCode::unknown_alternative,
                            "restriction index out of range: " + std::to_string(idx));
    return sorted;
}

}  // namespace detail

/// Drops all alternatives outside `keep`, preserving each ballot's relative
/// order and the canonical label order of the survivors.
inline Profile restrict_profile(const Profile& profile, const std::vector<int>& keep) {
    const auto kept = detail::normalized_keep(keep, profile.m());
    std::vector<int> remap(static_cast<std::size_t>(profile.m()), -1);
    std::vector<std::string> labels;
    labels.reserve(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
        remap[static_cast<std::size_t>(kept[i])] = static_cast<int>(i);
        labels.push_back(profile.alternatives.label(kept[i]));
    }
    Profile out;
    out.alternatives = AlternativeSet(std::move(labels));
    out.ballots.reserve(profile.ballots.size());
    for (const auto& ballot : profile.ballots) {
        Ballot reduced;
        reduced.agent_id = ballot.agent_id;
        for (const int alt : ballot.ranking)
            if (remap[static_cast<std::size_t>(alt)] >= 0)
                reduced.ranking.push_back(remap[static_cast<std::size_t>(alt)]);
        out.ballots.push_back(std::move(reduced));
    }
    return out;
}

inline ScoredProfile restrict_scored_profile(const ScoredProfile& profile, const std::vector<int>& keep) {
    const auto kept = detail::normalized_keep(keep, profile.m());
    std::vector<std::string> labels;
    labels.reserve(kept.size());
    for (const int idx : kept) labels.push_back(profile.alternatives.label(idx));
    ScoredProfile out;
    out.alternatives = AlternativeSet(std::move(labels));
    out.ballots.reserve(profile.ballots.size());
    for (const auto& ballot : profile.ballots) {
        ScoredBallot reduced;
        reduced.agent_id = ballot.agent_id;
        reduced.scores.reserve(kept.size());
        for (const int idx : kept) reduced.scores.push_back(ballot.scores[static_cast<std::size_t>(idx)]);
        out.ballots.push_back(std::move(reduced));
    }
    return out;
}

}  // namespace votelib

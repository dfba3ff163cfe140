#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "votelib/core.hpp"
#include "votelib/dataset.hpp"
#include "votelib/rng.hpp"

namespace votelib {

/// A controllable stand-in for an agent ensemble: each agent ranks the gold
/// alternative first with probability `competence` and otherwise casts a
/// uniform random ballot. `noise` is a dispersion hook for the non-gold
/// tail; 1.0 keeps it a uniform shuffle.
struct ElectorateSpec {
    int n_agents = 10;
    int m = 4;
    double competence = 0.0;
    double noise = 1.0;
    std::uint64_t seed = 0;
};

inline void validate(const ElectorateSpec& spec) {
    if (spec.n_agents < 1)
        throw VoteError(ErrorCode::invalid_argument, "electorate needs at least one agent");
    if (spec.m < 2) throw VoteError(ErrorCode::invalid_argument, "electorate needs at least 2 choices");
    if (spec.competence < 0.0 || spec.competence > 1.0)
        throw VoteError(ErrorCode::invalid_argument, "competence must be within [0, 1]");
}

/// Uniform draw over all m! rankings.
inline Ballot random_ballot(const AlternativeSet& alts, rng::Stream& stream,
                            std::string agent_id = {}) {
    Ballot ballot;
    ballot.agent_id = std::move(agent_id);
    ballot.ranking.resize(static_cast<std::size_t>(alts.size()));
    for (int i = 0; i < alts.size(); ++i) ballot.ranking[static_cast<std::size_t>(i)] = i;
    stream.shuffle(ballot.ranking);
    return ballot;
}

namespace synth_detail {

inline Ballot agent_ballot(const Question& question, const ElectorateSpec& spec, int agent) {
    auto stream = rng::stream_for(spec.seed, "ballot", question.id, agent);
    Ballot ballot = random_ballot(question.alternatives, stream, "agent-" + std::to_string(agent));
    if (question.gold >= 0 && stream.bernoulli(spec.competence)) {
        auto& r = ballot.ranking;
        r.erase(std::find(r.begin(), r.end(), question.gold));
        r.insert(r.begin(), question.gold);
    }
    return ballot;
}

}  // namespace synth_detail

/// Builds one profile, addressing every draw by (seed, question id, agent)
/// so generation is order- and worker-independent.
inline Profile generate_profile(const Question& question, const ElectorateSpec& spec) {
    validate(spec);
    Profile profile;
    profile.alternatives = question.alternatives;
    profile.ballots.reserve(static_cast<std::size_t>(spec.n_agents));
    for (int agent = 0; agent < spec.n_agents; ++agent)
        profile.ballots.push_back(synth_detail::agent_ballot(question, spec, agent));
    return profile;
}

/// Scored companion ballots: the gold alternative earns range_max with
/// probability `competence`; everything else an independent uniform integer
/// in range.
inline ScoredProfile generate_scored_profile(const Question& question, const ElectorateSpec& spec,
                                             int range_min, int range_max) {
    validate(spec);
    if (range_min >= range_max)
        throw VoteError(ErrorCode::invalid_argument, "score range must be non-degenerate");
    ScoredProfile profile;
    profile.alternatives = question.alternatives;
    const int m = question.alternatives.size();
    const auto width = static_cast<std::uint64_t>(range_max - range_min + 1);
    for (int agent = 0; agent < spec.n_agents; ++agent) {
        auto stream = rng::stream_for(spec.seed, "scores", question.id, agent);
        ScoredBallot ballot;
        ballot.agent_id = "agent-" + std::to_string(agent);
        ballot.scores.resize(static_cast<std::size_t>(m));
        const bool competent =
            question.gold >= 0 && stream.bernoulli(spec.competence);
        for (int a = 0; a < m; ++a)
            ballot.scores[static_cast<std::size_t>(a)] =
                range_min + static_cast<int>(stream.below(width));
        if (competent) ballot.scores[static_cast<std::size_t>(question.gold)] = range_max;
        profile.ballots.push_back(std::move(ballot));
    }
    return profile;
}

/// Replaces the ballots of the first k agents (canonical agent order) with
/// uniform random ones; the remaining agents are untouched.
inline Profile corrupt_profile(const Profile& profile, int k, std::uint64_t seed,
                               const std::string& decision_id = {}) {
    if (k < 0 || k > profile.n())
        throw VoteError(ErrorCode::k_out_of_range,
                        "corruption count " + std::to_string(k) + " outside [0, n]");
    Profile out = profile;
    for (int agent = 0; agent < k; ++agent) {
        auto stream = rng::stream_for(seed, "corrupt", decision_id, agent);
        out.ballots[static_cast<std::size_t>(agent)] = random_ballot(
            profile.alternatives, stream, profile.ballots[static_cast<std::size_t>(agent)].agent_id);
    }
    return out;
}

/// Scored counterpart: unreliable agents get uniform random scores too.
inline ScoredProfile corrupt_scored_profile(const ScoredProfile& profile, int k, std::uint64_t seed,
                                            const std::string& decision_id, int range_min,
                                            int range_max) {
    if (k < 0 || k > profile.n())
        throw VoteError(ErrorCode::k_out_of_range,
                        "corruption count " + std::to_string(k) + " outside [0, n]");
    ScoredProfile out = profile;
    const auto width = static_cast<std::uint64_t>(range_max - range_min + 1);
    for (int agent = 0; agent < k; ++agent) {
        auto stream = rng::stream_for(seed, "corrupt_scores", decision_id, agent);
        for (auto& score : out.ballots[static_cast<std::size_t>(agent)].scores)
            score = range_min + static_cast<int>(stream.below(width));
    }
    return out;
}

/// Specification for a whole synthetic dataset, convertible to the same
/// record format ingested from files.
struct SynthDatasetSpec {
    int questions = 100;
    ElectorateSpec electorate;
    std::vector<std::string> subjects = {"synthetic"};
    bool with_scores = true;
    int range_min = 0;
    int range_max = 10;
};

inline std::vector<std::string> default_choice_labels(int m) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        if (i < 26)
            labels.emplace_back(1, static_cast<char>('A' + i));
        else
            labels.push_back("C" + std::to_string(i));
    }
    return labels;
}

inline Dataset synthesize_dataset(const SynthDatasetSpec& spec) {
    validate(spec.electorate);
    if (spec.questions < 1)
        throw VoteError(ErrorCode::invalid_argument, "dataset needs at least one question");
    if (spec.subjects.empty())
        throw VoteError(ErrorCode::invalid_argument, "dataset needs at least one subject");
    Dataset dataset;
    dataset.expected_n = spec.electorate.n_agents;
    const auto labels = default_choice_labels(spec.electorate.m);
    const AlternativeSet alts(labels);
    dataset.records.reserve(static_cast<std::size_t>(spec.questions));
    for (int q = 0; q < spec.questions; ++q) {
        Question question;
        question.id = "q" + std::to_string(q + 1);
        question.subject = spec.subjects[static_cast<std::size_t>(q) % spec.subjects.size()];
        question.alternatives = alts;
        auto gold_stream = rng::stream_for(spec.electorate.seed, "gold", question.id);
        question.gold = static_cast<int>(gold_stream.below(static_cast<std::uint64_t>(spec.electorate.m)));

        QuestionRecord record;
        record.id = question.id;
        record.subject = question.subject;
        record.choices = labels;
        record.gold = labels[static_cast<std::size_t>(question.gold)];
        const Profile profile = generate_profile(question, spec.electorate);
        for (const auto& ballot : profile.ballots) {
            BallotRecord raw;
            raw.agent = ballot.agent_id;
            for (const int alt : ballot.ranking) raw.ranking.push_back(labels[static_cast<std::size_t>(alt)]);
            record.ballots.push_back(std::move(raw));
        }
        if (spec.with_scores) {
            const ScoredProfile scored =
                generate_scored_profile(question, spec.electorate, spec.range_min, spec.range_max);
            std::vector<ScoreRecord> rows;
            for (const auto& ballot : scored.ballots) {
                ScoreRecord raw;
                raw.agent = ballot.agent_id;
                for (int a = 0; a < spec.electorate.m; ++a)
                    raw.scores.emplace_back(labels[static_cast<std::size_t>(a)],
                                            ballot.scores[static_cast<std::size_t>(a)]);
                rows.push_back(std::move(raw));
            }
            record.scores = std::move(rows);
        }
        dataset.records.push_back(std::move(record));
    }
    return dataset;
}

}  // namespace votelib

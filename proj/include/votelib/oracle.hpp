#pragma once

#include <algorithm>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "votelib/core.hpp"
#include "votelib/rng.hpp"
#include "votelib/rules.hpp"

namespace votelib {

/// Test stand-in: echoes the consultation profile's plurality ranking.
/// Under this oracle the informed dictatorial result equals plurality.
class EchoPluralityOracle final : public DictatorOracle {
public:
    Ballot decide(const DictatorContext&, const Profile& consultation) const override {
        return Ballot{plurality(consultation).order, "dictator"};
    }
    std::string name() const override { return "echo-plurality"; }
};

/// Replays recorded dictator ballots by question id. Questions absent from
/// the recording are unavailable, which marks them invalid for the rule.
class ReplayOracle final : public DictatorOracle {
public:
    explicit ReplayOracle(std::unordered_map<std::string, std::vector<std::string>> rankings)
        : rankings_(std::move(rankings)) {}

    Ballot decide(const DictatorContext& context, const Profile& consultation) const override {
        const auto it = rankings_.find(context.decision_id);
        if (it == rankings_.end())
            throw VoteError(ErrorCode::oracle_unavailable,
                            "no replay ballot for decision " + context.decision_id);
        return validate_ballot(it->second, consultation.alternatives, "dictator");
    }
    std::string name() const override { return "replay"; }

private:
    std::unordered_map<std::string, std::vector<std::string>> rankings_;
};

/// Synthetic dictator: ranks the gold alternative first with probability p,
/// otherwise answers with a uniform random ballot. Draws are addressed by
/// (seed, decision id) so replays are exact.
class CompetenceOracle final : public DictatorOracle {
public:
    CompetenceOracle(double competence, std::uint64_t seed) : competence_(competence), seed_(seed) {}

    Ballot decide(const DictatorContext& context, const Profile& consultation) const override {
        const int m = consultation.m();
        auto stream = rng::stream_for(seed_, "dictator_competence", context.decision_id);
        Ballot ballot;
        ballot.agent_id = "dictator";
        ballot.ranking.resize(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) ballot.ranking[static_cast<std::size_t>(i)] = i;
        stream.shuffle(ballot.ranking);
        if (context.gold >= 0 && context.gold < m && stream.bernoulli(competence_)) {
            auto& r = ballot.ranking;
            r.erase(std::find(r.begin(), r.end(), context.gold));
            r.insert(r.begin(), context.gold);
        }
        return ballot;
    }
    std::string name() const override { return "competence"; }

private:
    double competence_;
    std::uint64_t seed_;
};

}  // namespace votelib

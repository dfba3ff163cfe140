#pragma once

#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "votelib/core.hpp"
#include "votelib/rng.hpp"

namespace votelib {

enum class RuleId {
    blind_dictatorial,
    informed_dictatorial,
    misinformed_dictatorial,
    range_voting,
    plurality,
    bucklin,
    borda,
    irv,
    minimax,
    ranked_pairs,
};

inline const std::vector<RuleId>& all_rules() {
    static const std::vector<RuleId> rules = {
        RuleId::blind_dictatorial, RuleId::informed_dictatorial, RuleId::misinformed_dictatorial,
        RuleId::range_voting,      RuleId::plurality,            RuleId::bucklin,
        RuleId::borda,             RuleId::irv,                  RuleId::minimax,
        RuleId::ranked_pairs,
    };
    return rules;
}

inline std::string to_string(RuleId rule) {
    switch (rule) {
        case RuleId::blind_dictatorial: return "blind_dictatorial";
        case RuleId::informed_dictatorial: return "informed_dictatorial";
        case RuleId::misinformed_dictatorial: return "misinformed_dictatorial";
        case RuleId::range_voting: return "range_voting";
        case RuleId::plurality: return "plurality";
        case RuleId::bucklin: return "bucklin";
        case RuleId::borda: return "borda";
        case RuleId::irv: return "irv";
        case RuleId::minimax: return "minimax";
        case RuleId::ranked_pairs: return "ranked_pairs";
    }
    return "unknown";
}

inline std::optional<RuleId> rule_from_string(const std::string& name) {
    for (const RuleId rule : all_rules())
        if (to_string(rule) == name) return rule;
    return std::nullopt;
}

inline bool rule_needs_scores(RuleId rule) { return rule == RuleId::range_voting; }

inline bool rule_needs_oracle(RuleId rule) {
    return rule == RuleId::informed_dictatorial || rule == RuleId::misinformed_dictatorial;
}

inline bool rule_is_stochastic(RuleId rule) {
    return rule == RuleId::blind_dictatorial || rule == RuleId::misinformed_dictatorial;
}

/// Rules whose behavior is a pure function of the profile; these are the
/// ones the criteria search can reason about.
inline bool rule_is_deterministic(RuleId rule) {
    return !rule_is_stochastic(rule) && rule != RuleId::informed_dictatorial;
}

struct DictatorContext {
    std::string decision_id;
    // Gold index when known (synthetic oracles); -1 otherwise.
    int gold = -1;
};

/// An external decision-maker consulted by the dictatorial rules. The
/// returned ballot must validate against the consultation profile's
/// alternatives. Implementations should be safe for concurrent calls or
/// report otherwise; the evaluation harness serializes the unsafe ones.
class DictatorOracle {
public:
    virtual ~DictatorOracle() = default;
    virtual Ballot decide(const DictatorContext& context, const Profile& consultation) const = 0;
    virtual bool concurrent_safe() const { return true; }
    virtual std::string name() const = 0;
};

struct RuleConfig {
    std::uint64_t seed = 0;
    int range_min = 0;
    int range_max = 10;
    std::shared_ptr<const DictatorOracle> dictator;
    // Stochastic draws are addressed by (seed, decision_id) so outcomes do
    // not depend on evaluation order or worker count.
    std::string decision_id;
    int gold = -1;
};

struct ScoreBlock {
    std::string name;
    std::vector<double> values;  // indexed by alternative
};

/// A rule's full output: a strict order over all alternatives (best first),
/// rule-specific per-alternative scores, and a record of every position
/// where the canonical lower-index tie-break decided the order.
struct CollectiveRanking {
    RuleId rule;
    std::vector<int> order;
    std::vector<ScoreBlock> scores;
    std::vector<int> tie_log;
    std::map<std::string, std::string> annotations;

    int winner() const { return order.front(); }

    int rank_of(int alternative) const {
        for (std::size_t i = 0; i < order.size(); ++i)
            if (order[i] == alternative) return static_cast<int>(i) + 1;
        return -1;
    }
};

namespace detail {

// Orders alternatives by a rule-specific key (better = comes first); equal
// keys fall back to the canonical lower-index order and get logged.
template <class Better, class Equal>
void ranked_order(int m, Better better, Equal equal, CollectiveRanking& out) {
    out.order.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) out.order[static_cast<std::size_t>(i)] = i;
    std::sort(out.order.begin(), out.order.end(), [&](int a, int b) {
        if (better(a, b)) return true;
        if (better(b, a)) return false;
        return a < b;
    });
    for (std::size_t i = 0; i + 1 < out.order.size(); ++i)
        if (equal(out.order[i], out.order[i + 1])) out.tie_log.push_back(static_cast<int>(i));
}

inline std::vector<int> first_preference_counts(const Profile& profile) {
    std::vector<int> counts(static_cast<std::size_t>(profile.m()), 0);
    for (const auto& ballot : profile.ballots) ++counts[static_cast<std::size_t>(ballot.ranking.front())];
    return counts;
}

inline Profile anonymized(const Profile& profile) {
    Profile out;
    out.alternatives = profile.alternatives;
    out.ballots.reserve(profile.ballots.size());
    for (std::size_t i = 0; i < profile.ballots.size(); ++i)
        out.ballots.push_back(Ballot{profile.ballots[i].ranking, "voter-" + std::to_string(i)});
    return out;
}

inline Ballot random_permutation_ballot(int m, rng::Stream& stream, std::string agent_id) {
    Ballot ballot;
    ballot.agent_id = std::move(agent_id);
    ballot.ranking.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) ballot.ranking[static_cast<std::size_t>(i)] = i;
    stream.shuffle(ballot.ranking);
    return ballot;
}

inline void require_nonempty(const Profile& profile) {
    if (profile.ballots.empty())
        throw VoteError(ErrorCode::missing_agents, "rule applied to empty profile");
}

}  // namespace detail

/// Most top-choice votes wins; later preferences are ignored.
inline CollectiveRanking plurality(const Profile& profile) {
    detail::require_nonempty(profile);
    const auto counts = detail::first_preference_counts(profile);
    CollectiveRanking out;
    out.rule = RuleId::plurality;
    detail::ranked_order(
        profile.m(), [&](int a, int b) { return counts[a] > counts[b]; },
        [&](int a, int b) { return counts[a] == counts[b]; }, out);
    out.scores.push_back({"first_preferences", std::vector<double>(counts.begin(), counts.end())});
    return out;
}

/// Widening rounds of cumulative preference counts until an absolute
/// majority appears. Ranking: earlier majority round first, then higher
/// count at that round.
inline CollectiveRanking bucklin(const Profile& profile) {
    detail::require_nonempty(profile);
    const int m = profile.m();
    const int n = profile.n();
    std::vector<int> majority_round(static_cast<std::size_t>(m), m);
    std::vector<int> count_at_round(static_cast<std::size_t>(m), 0);
    std::vector<int> cumulative(static_cast<std::size_t>(m), 0);
    std::vector<bool> decided(static_cast<std::size_t>(m), false);
    for (int round = 1; round <= m; ++round) {
        for (const auto& ballot : profile.ballots) ++cumulative[static_cast<std::size_t>(ballot.ranking[round - 1])];
        for (int a = 0; a < m; ++a) {
            if (!decided[static_cast<std::size_t>(a)] && 2 * cumulative[static_cast<std::size_t>(a)] > n) {
                decided[static_cast<std::size_t>(a)] = true;
                majority_round[static_cast<std::size_t>(a)] = round;
                count_at_round[static_cast<std::size_t>(a)] = cumulative[static_cast<std::size_t>(a)];
            }
        }
    }
    CollectiveRanking out;
    out.rule = RuleId::bucklin;
    detail::ranked_order(
        m,
        [&](int a, int b) {
            if (majority_round[a] != majority_round[b]) return majority_round[a] < majority_round[b];
            return count_at_round[a] > count_at_round[b];
        },
        [&](int a, int b) {
            return majority_round[a] == majority_round[b] && count_at_round[a] == count_at_round[b];
        },
        out);
    out.scores.push_back({"majority_round",
                          std::vector<double>(majority_round.begin(), majority_round.end())});
    out.scores.push_back({"count_at_round",
                          std::vector<double>(count_at_round.begin(), count_at_round.end())});
    return out;
}

/// m-i points for the i-th ranked alternative on each ballot (top earns m-1,
/// bottom earns 0); highest total wins.
inline CollectiveRanking borda(const Profile& profile) {
    detail::require_nonempty(profile);
    const int m = profile.m();
    std::vector<long long> points(static_cast<std::size_t>(m), 0);
    for (const auto& ballot : profile.ballots)
        for (int pos = 0; pos < m; ++pos)
            points[static_cast<std::size_t>(ballot.ranking[static_cast<std::size_t>(pos)])] += m - 1 - pos;
    CollectiveRanking out;
    out.rule = RuleId::borda;
    detail::ranked_order(
        m, [&](int a, int b) { return points[a] > points[b]; },
        [&](int a, int b) { return points[a] == points[b]; }, out);
    out.scores.push_back({"points", std::vector<double>(points.begin(), points.end())});
    return out;
}

/// Full-elimination instant-runoff: repeatedly drop the alternative with the
/// fewest first preferences among survivors (ties drop the canonically last,
/// i.e. highest index) and transfer its votes. The collective ranking is the
/// reverse elimination order.
inline CollectiveRanking irv(const Profile& profile) {
    detail::require_nonempty(profile);
    const int m = profile.m();
    std::vector<bool> active(static_cast<std::size_t>(m), true);
    std::vector<int> elimination_round(static_cast<std::size_t>(m), 0);
    std::vector<int> elimination_order;
    std::vector<bool> tie_break_fired(static_cast<std::size_t>(m), false);
    for (int round = 1; round < m; ++round) {
        std::vector<int> counts(static_cast<std::size_t>(m), 0);
        for (const auto& ballot : profile.ballots) {
            for (const int alt : ballot.ranking) {
                if (active[static_cast<std::size_t>(alt)]) {
                    ++counts[static_cast<std::size_t>(alt)];
                    break;
                }
            }
        }
        int fewest = -1;
        for (int a = 0; a < m; ++a)
            if (active[static_cast<std::size_t>(a)] && (fewest < 0 || counts[static_cast<std::size_t>(a)] < counts[static_cast<std::size_t>(fewest)]))
                fewest = a;
        int loser = fewest;
        bool tied = false;
        for (int a = 0; a < m; ++a) {
            if (a != fewest && active[static_cast<std::size_t>(a)] &&
                counts[static_cast<std::size_t>(a)] == counts[static_cast<std::size_t>(fewest)]) {
                tied = true;
                if (a > loser) loser = a;
            }
        }
        active[static_cast<std::size_t>(loser)] = false;
        elimination_round[static_cast<std::size_t>(loser)] = round;
        elimination_order.push_back(loser);
        tie_break_fired[static_cast<std::size_t>(loser)] = tied;
    }
    CollectiveRanking out;
    out.rule = RuleId::irv;
    for (int a = 0; a < m; ++a)
        if (active[static_cast<std::size_t>(a)]) {
            out.order.push_back(a);
            elimination_round[static_cast<std::size_t>(a)] = m;
        }
    for (auto it = elimination_order.rbegin(); it != elimination_order.rend(); ++it) out.order.push_back(*it);
    for (std::size_t pos = 0; pos < out.order.size(); ++pos)
        if (tie_break_fired[static_cast<std::size_t>(out.order[pos])]) out.tie_log.push_back(static_cast<int>(pos));
    out.scores.push_back({"elimination_round",
                          std::vector<double>(elimination_round.begin(), elimination_round.end())});
    return out;
}

/// Least worst pairwise disfavor wins: worst_disfavor(a) = max over b of
/// margin(b, a), which is negative exactly for a Condorcet winner.
inline CollectiveRanking minimax(const Profile& profile) {
    detail::require_nonempty(profile);
    const int m = profile.m();
    const auto tally = pairwise_tally(profile);
    std::vector<int> worst(static_cast<std::size_t>(m), 0);
    for (int a = 0; a < m; ++a) {
        int w = std::numeric_limits<int>::min();
        for (int b = 0; b < m; ++b)
            if (b != a) w = std::max(w, tally.margin(b, a));
        worst[static_cast<std::size_t>(a)] = w;
    }
    CollectiveRanking out;
    out.rule = RuleId::minimax;
    detail::ranked_order(
        m, [&](int a, int b) { return worst[a] < worst[b]; },
        [&](int a, int b) { return worst[a] == worst[b]; }, out);
    out.scores.push_back({"worst_disfavor", std::vector<double>(worst.begin(), worst.end())});
    return out;
}

/// Tideman's ranked pairs: lock pairwise results from the strongest margin
/// down, skipping any pair that would close a cycle, then read the unique
/// topological order off the locked relation. Margin ties lock by higher raw
/// wins, then canonical pair order.
inline CollectiveRanking ranked_pairs(const Profile& profile) {
    detail::require_nonempty(profile);
    const int m = profile.m();
    const auto tally = pairwise_tally(profile);
    struct Pair {
        int a, b, margin, wins;
    };
    std::vector<Pair> pairs;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            if (a != b && tally.margin(a, b) > 0)
                pairs.push_back({a, b, tally.margin(a, b), tally.wins(a, b)});
    std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
        if (x.margin != y.margin) return x.margin > y.margin;
        if (x.wins != y.wins) return x.wins > y.wins;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });

    std::vector<bool> locked(static_cast<std::size_t>(m) * m, false);
    const auto reaches = [&](int from, int to) {
        std::vector<int> stack{from};
        std::vector<bool> seen(static_cast<std::size_t>(m), false);
        seen[static_cast<std::size_t>(from)] = true;
        while (!stack.empty()) {
            const int at = stack.back();
            stack.pop_back();
            if (at == to) return true;
            for (int next = 0; next < m; ++next) {
                if (locked[static_cast<std::size_t>(at) * m + next] && !seen[static_cast<std::size_t>(next)]) {
                    seen[static_cast<std::size_t>(next)] = true;
                    stack.push_back(next);
                }
            }
        }
        return false;
    };
    for (const auto& pair : pairs)
        if (!reaches(pair.b, pair.a)) locked[static_cast<std::size_t>(pair.a) * m + pair.b] = true;

    CollectiveRanking out;
    out.rule = RuleId::ranked_pairs;
    std::vector<bool> placed(static_cast<std::size_t>(m), false);
    for (int slot = 0; slot < m; ++slot) {
        int source = -1;
        int source_count = 0;
        for (int a = 0; a < m; ++a) {
            if (placed[static_cast<std::size_t>(a)]) continue;
            bool has_incoming = false;
            for (int b = 0; b < m; ++b)
                if (!placed[static_cast<std::size_t>(b)] && locked[static_cast<std::size_t>(b) * m + a]) {
                    has_incoming = true;
                    break;
                }
            if (!has_incoming) {
                ++source_count;
                if (source < 0) source = a;
            }
        }
        if (source_count > 1) out.tie_log.push_back(slot);
        placed[static_cast<std::size_t>(source)] = true;
        out.order.push_back(source);
    }
    std::vector<double> locked_wins(static_cast<std::size_t>(m), 0.0);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            if (locked[static_cast<std::size_t>(a) * m + b]) locked_wins[static_cast<std::size_t>(a)] += 1.0;
    out.scores.push_back({"locked_wins", std::move(locked_wins)});
    return out;
}

/// Highest overall score wins.
inline CollectiveRanking range_voting(const ScoredProfile& profile, const RuleConfig& config = {}) {
    if (profile.ballots.empty())
        throw VoteError(ErrorCode::missing_agents, "rule applied to empty profile");
    const int m = profile.m();
    std::vector<long long> sums(static_cast<std::size_t>(m), 0);
    for (const auto& ballot : profile.ballots) {
        if (static_cast<int>(ballot.scores.size()) != m)
            throw VoteError(ErrorCode::missing_score, "scored ballot does not cover all alternatives");
        for (int a = 0; a < m; ++a) {
            const int score = ballot.scores[static_cast<std::size_t>(a)];
            if (score < config.range_min || score > config.range_max)
                throw VoteError(ErrorCode::score_out_of_range,
                                "score out of range for " + profile.alternatives.label(a) + ": " +
                                    std::to_string(score));
            sums[static_cast<std::size_t>(a)] += score;
        }
    }
    CollectiveRanking out;
    out.rule = RuleId::range_voting;
    detail::ranked_order(
        m, [&](int a, int b) { return sums[a] > sums[b]; },
        [&](int a, int b) { return sums[a] == sums[b]; }, out);
    out.scores.push_back({"score_sum", std::vector<double>(sums.begin(), sums.end())});
    return out;
}

/// One agent, picked uniformly from a (seed, decision id) addressed stream,
/// decides for the group. Still requires the full ballot set.
inline CollectiveRanking blind_dictatorial(const Profile& profile, const RuleConfig& config) {
    detail::require_nonempty(profile);
    auto stream = rng::stream_for(config.seed, "blind_dictatorial", config.decision_id);
    const auto index = static_cast<std::size_t>(stream.below(static_cast<std::uint64_t>(profile.n())));
    CollectiveRanking out;
    out.rule = RuleId::blind_dictatorial;
    out.order = profile.ballots[index].ranking;
    out.annotations["agent_id"] = profile.ballots[index].agent_id;
    return out;
}

namespace detail {

inline CollectiveRanking dictator_decision(RuleId rule, const Profile& consultation,
                                           const Profile& original, const RuleConfig& config) {
    if (!config.dictator)
        throw VoteError(ErrorCode::oracle_unavailable, "no dictator oracle configured");
    DictatorContext context{config.decision_id, config.gold};
    const Ballot ballot = config.dictator->decide(context, consultation);
    std::vector<bool> seen(static_cast<std::size_t>(original.m()), false);
    bool valid = static_cast<int>(ballot.ranking.size()) == original.m();
    if (valid) {
        for (const int alt : ballot.ranking) {
            if (alt < 0 || alt >= original.m() || seen[static_cast<std::size_t>(alt)]) {
                valid = false;
                break;
            }
            seen[static_cast<std::size_t>(alt)] = true;
        }
    }
    if (!valid)
        throw VoteError(ErrorCode::oracle_ballot_invalid,
                        "dictator returned an invalid ballot for decision " + config.decision_id);
    CollectiveRanking out;
    out.rule = rule;
    out.order = ballot.ranking;
    out.annotations["dictator"] = config.dictator->name();
    return out;
}

}  // namespace detail

/// The dictator reviews the ensemble's real ballots (anonymized) before
/// deciding.
inline CollectiveRanking informed_dictatorial(const Profile& profile, const RuleConfig& config) {
    detail::require_nonempty(profile);
    return detail::dictator_decision(RuleId::informed_dictatorial, detail::anonymized(profile), profile,
                                     config);
}

/// The dictator is consulted with fabricated uniform-random ballots of the
/// same shape instead of the real ones.
inline CollectiveRanking misinformed_dictatorial(const Profile& profile, const RuleConfig& config) {
    detail::require_nonempty(profile);
    Profile fake;
    fake.alternatives = profile.alternatives;
    fake.ballots.reserve(profile.ballots.size());
    for (int i = 0; i < profile.n(); ++i) {
        auto stream = rng::stream_for(config.seed, "misinformed_dictatorial", config.decision_id, i);
        fake.ballots.push_back(
            detail::random_permutation_ballot(profile.m(), stream, "voter-" + std::to_string(i)));
    }
    return detail::dictator_decision(RuleId::misinformed_dictatorial, fake, profile, config);
}

struct RuleInput {
    const Profile* ordinal = nullptr;
    const ScoredProfile* scored = nullptr;
};

inline std::string config_fingerprint(RuleId rule, const RuleConfig& config) {
    const std::uint64_t h = rng::derive_seed(
        config.seed, to_string(rule), config.range_min, config.range_max, config.decision_id,
        config.dictator ? config.dictator->name() : std::string{});
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(h));
    return buffer;
}

/// Dispatches to the rule implementation, checking the input kind, and
/// stamps the output with the configuration fingerprint.
inline CollectiveRanking run_rule(RuleId rule, const RuleInput& input, const RuleConfig& config = {}) {
    CollectiveRanking out;
    if (rule_needs_scores(rule)) {
        if (!input.scored)
            throw VoteError(ErrorCode::input_kind_mismatch,
                            to_string(rule) + " requires scored ballots");
        out = range_voting(*input.scored, config);
    } else {
        if (!input.ordinal)
            throw VoteError(ErrorCode::input_kind_mismatch,
                            to_string(rule) + " requires ordinal ballots");
        const Profile& profile = *input.ordinal;
        switch (rule) {
            case RuleId::plurality: out = plurality(profile); break;
            case RuleId::bucklin: out = bucklin(profile); break;
            case RuleId::borda: out = borda(profile); break;
            case RuleId::irv: out = irv(profile); break;
            case RuleId::minimax: out = minimax(profile); break;
            case RuleId::ranked_pairs: out = ranked_pairs(profile); break;
            case RuleId::blind_dictatorial: out = blind_dictatorial(profile, config); break;
            case RuleId::informed_dictatorial: out = informed_dictatorial(profile, config); break;
            case RuleId::misinformed_dictatorial: out = misinformed_dictatorial(profile, config); break;
            default:
                throw VoteError(ErrorCode::input_kind_mismatch, "unhandled rule");
        }
    }
    out.annotations["config"] = config_fingerprint(rule, config);
    return out;
}

inline CollectiveRanking run_rule(RuleId rule, const Profile& profile, const RuleConfig& config = {}) {
    RuleInput input;
    input.ordinal = &profile;
    return run_rule(rule, input, config);
}

inline CollectiveRanking run_rule(RuleId rule, const ScoredProfile& profile,
                                  const RuleConfig& config = {}) {
    RuleInput input;
    input.scored = &profile;
    return run_rule(rule, input, config);
}

}  // namespace votelib

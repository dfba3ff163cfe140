#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "votelib/core.hpp"
#include "votelib/rules.hpp"

namespace votelib {

enum class Criterion { majority, monotonicity, consistency, iia, condorcet };

inline const std::vector<Criterion>& all_criteria() {
    static const std::vector<Criterion> criteria = {
        Criterion::majority, Criterion::monotonicity, Criterion::consistency, Criterion::iia,
        Criterion::condorcet,
    };
    return criteria;
}

inline std::string to_string(Criterion criterion) {
    switch (criterion) {
        case Criterion::majority: return "majority";
        case Criterion::monotonicity: return "monotonicity";
        case Criterion::consistency: return "consistency";
        case Criterion::iia: return "iia";
        case Criterion::condorcet: return "condorcet";
    }
    return "unknown";
}

inline std::optional<Criterion> criterion_from_string(const std::string& name) {
    for (const Criterion criterion : all_criteria())
        if (to_string(criterion) == name) return criterion;
    return std::nullopt;
}

/// The alternative beating every other in pairwise majority comparison;
/// unique when it exists (margins are antisymmetric).
inline std::optional<int> condorcet_winner(const PairwiseTally& tally) {
    for (int a = 0; a < tally.m(); ++a) {
        bool beats_all = true;
        for (int b = 0; b < tally.m() && beats_all; ++b)
            if (b != a && tally.margin(a, b) <= 0) beats_all = false;
        if (beats_all) return a;
    }
    return std::nullopt;
}

/// The alternative holding strictly more than half of the first preferences,
/// if any.
inline std::optional<int> majority_favorite(const Profile& profile) {
    std::vector<int> counts(static_cast<std::size_t>(profile.m()), 0);
    for (const auto& ballot : profile.ballots) ++counts[static_cast<std::size_t>(ballot.ranking.front())];
    for (int a = 0; a < profile.m(); ++a)
        if (2 * counts[static_cast<std::size_t>(a)] > profile.n()) return a;
    return std::nullopt;
}

/// A replayable criterion-violation instance. `base` always holds the
/// primary ordinal profile; `second` is the perturbed profile (monotonicity)
/// or the second electorate (consistency); `removed` is the dropped
/// alternative (iia). Range-voting instances may carry explicit scores;
/// otherwise scores are derived canonically from the rankings.
struct Witness {
    RuleId rule;
    Criterion criterion;
    Profile base;
    std::optional<Profile> second;
    std::optional<int> removed;
    std::optional<ScoredProfile> scored_base;
    std::optional<ScoredProfile> scored_second;
    std::string explanation;
};

struct CheckOutcome {
    bool violated = false;
    std::string detail;
};

namespace criteria_detail {

// Canonical integer scores for a ranking: top earns m-1 down to 0. Used to
// put range voting on the same enumeration footing as the ordinal rules.
inline ScoredProfile canonical_scores(const Profile& profile) {
    ScoredProfile out;
    out.alternatives = profile.alternatives;
    out.ballots.reserve(profile.ballots.size());
    const int m = profile.m();
    for (const auto& ballot : profile.ballots) {
        ScoredBallot scored;
        scored.agent_id = ballot.agent_id;
        scored.scores.assign(static_cast<std::size_t>(m), 0);
        for (int pos = 0; pos < m; ++pos)
            scored.scores[static_cast<std::size_t>(ballot.ranking[static_cast<std::size_t>(pos)])] =
                m - 1 - pos;
        out.ballots.push_back(std::move(scored));
    }
    return out;
}

inline RuleConfig range_config_for(int m, const RuleConfig& config) {
    RuleConfig adjusted = config;
    adjusted.range_min = std::min(0, config.range_min);
    adjusted.range_max = std::max(config.range_max, m - 1);
    return adjusted;
}

inline CollectiveRanking eval_rule(RuleId rule, const Profile& profile,
                                   const std::optional<ScoredProfile>& explicit_scored,
                                   const RuleConfig& config) {
    switch (rule) {
        case RuleId::plurality: return plurality(profile);
        case RuleId::bucklin: return bucklin(profile);
        case RuleId::borda: return borda(profile);
        case RuleId::irv: return irv(profile);
        case RuleId::minimax: return minimax(profile);
        case RuleId::ranked_pairs: return ranked_pairs(profile);
        case RuleId::range_voting:
            if (explicit_scored) return range_voting(*explicit_scored, config);
            return range_voting(canonical_scores(profile), range_config_for(profile.m(), config));
        default:
            throw VoteError(ErrorCode::instance_kind_mismatch,
                            to_string(rule) + " is not deterministic; criteria checks do not apply");
    }
}

inline std::vector<int> all_but(int m, int removed) {
    std::vector<int> keep;
    keep.reserve(static_cast<std::size_t>(m) - 1);
    for (int a = 0; a < m; ++a)
        if (a != removed) keep.push_back(a);
    return keep;
}

// Restriction for the rule under check: ordinal profiles re-rank the
// survivors; scored profiles keep their raw scores (removal must not touch
// the scores of the remaining alternatives).
inline CollectiveRanking eval_restricted(RuleId rule, const Profile& profile,
                                         const std::optional<ScoredProfile>& explicit_scored,
                                         int removed, const RuleConfig& config) {
    const auto keep = all_but(profile.m(), removed);
    if (rule == RuleId::range_voting) {
        const ScoredProfile scored =
            explicit_scored ? *explicit_scored : canonical_scores(profile);
        return range_voting(restrict_scored_profile(scored, keep),
                            range_config_for(profile.m(), config));
    }
    return eval_rule(rule, restrict_profile(profile, keep), std::nullopt, config);
}

inline Profile merged(const Profile& p1, const Profile& p2) {
    Profile out;
    out.alternatives = p1.alternatives;
    out.ballots.reserve(p1.ballots.size() + p2.ballots.size());
    std::size_t counter = 0;
    for (const auto& ballot : p1.ballots)
        out.ballots.push_back(Ballot{ballot.ranking, "u" + std::to_string(counter++)});
    for (const auto& ballot : p2.ballots)
        out.ballots.push_back(Ballot{ballot.ranking, "u" + std::to_string(counter++)});
    return out;
}

inline ScoredProfile merged_scored(const ScoredProfile& p1, const ScoredProfile& p2) {
    ScoredProfile out;
    out.alternatives = p1.alternatives;
    out.ballots.reserve(p1.ballots.size() + p2.ballots.size());
    std::size_t counter = 0;
    for (const auto& ballot : p1.ballots)
        out.ballots.push_back(ScoredBallot{ballot.scores, "u" + std::to_string(counter++)});
    for (const auto& ballot : p2.ballots)
        out.ballots.push_back(ScoredBallot{ballot.scores, "u" + std::to_string(counter++)});
    return out;
}

// True when `raised` equals `original` with `alternative` moved weakly up
// and everything else untouched.
inline bool is_raise_of(const Ballot& original, const Ballot& raised, int alternative) {
    if (original.ranking.size() != raised.ranking.size()) return false;
    std::vector<int> a, b;
    int pos_original = -1, pos_raised = -1;
    for (std::size_t i = 0; i < original.ranking.size(); ++i) {
        if (original.ranking[i] == alternative)
            pos_original = static_cast<int>(i);
        else
            a.push_back(original.ranking[i]);
        if (raised.ranking[i] == alternative)
            pos_raised = static_cast<int>(i);
        else
            b.push_back(raised.ranking[i]);
    }
    return pos_original >= 0 && pos_raised >= 0 && pos_raised <= pos_original && a == b;
}

inline bool is_raise_of_profile(const Profile& base, const Profile& perturbed, int alternative) {
    if (base.ballots.size() != perturbed.ballots.size()) return false;
    if (!(base.alternatives == perturbed.alternatives)) return false;
    for (std::size_t i = 0; i < base.ballots.size(); ++i)
        if (!is_raise_of(base.ballots[i], perturbed.ballots[i], alternative)) return false;
    return true;
}

}  // namespace criteria_detail

/// Evaluates one criterion's defining implication on a concrete instance.
///
///   majority:     majority favorite, when present, must win
///   condorcet:    Condorcet winner, when present, must win
///   monotonicity: raising the winner on some ballots must not dethrone it
///   consistency:  two electorates with the same winner must keep it merged
///   iia:          dropping an alternative must not flip the collective
///                 order of any remaining pair
inline CheckOutcome check_criterion(RuleId rule, Criterion criterion, const Witness& instance,
                                    const RuleConfig& config = {}) {
    using namespace criteria_detail;
    if (!rule_is_deterministic(rule))
        throw VoteError(ErrorCode::instance_kind_mismatch,
                        to_string(rule) + " is not deterministic; criteria checks do not apply");
    const auto& labels = instance.base.alternatives.labels();
    switch (criterion) {
        case Criterion::majority: {
            const auto favorite = majority_favorite(instance.base);
            if (!favorite) return {false, "no majority favorite in instance"};
            const auto result = eval_rule(rule, instance.base, instance.scored_base, config);
            if (result.winner() == *favorite) return {false, "majority favorite wins"};
            return {true, "majority favorite " + labels[static_cast<std::size_t>(*favorite)] +
                              " loses to " + labels[static_cast<std::size_t>(result.winner())]};
        }
        case Criterion::condorcet: {
            const auto cw = condorcet_winner(pairwise_tally(instance.base));
            if (!cw) return {false, "no condorcet winner in instance"};
            const auto result = eval_rule(rule, instance.base, instance.scored_base, config);
            if (result.winner() == *cw) return {false, "condorcet winner wins"};
            return {true, "condorcet winner " + labels[static_cast<std::size_t>(*cw)] + " loses to " +
                              labels[static_cast<std::size_t>(result.winner())]};
        }
        case Criterion::monotonicity: {
            if (!instance.second)
                throw VoteError(ErrorCode::instance_kind_mismatch,
                                "monotonicity instance needs the perturbed profile");
            const auto before = eval_rule(rule, instance.base, instance.scored_base, config);
            const int winner = before.winner();
            if (!is_raise_of_profile(instance.base, *instance.second, winner))
                throw VoteError(ErrorCode::instance_kind_mismatch,
                                "perturbed profile is not a pure raise of the winner");
            const auto after = eval_rule(rule, *instance.second, instance.scored_second, config);
            if (after.winner() == winner) return {false, "winner survives the raise"};
            return {true, "raising winner " + labels[static_cast<std::size_t>(winner)] +
                              " hands the win to " +
                              labels[static_cast<std::size_t>(after.winner())]};
        }
        case Criterion::consistency: {
            if (!instance.second)
                throw VoteError(ErrorCode::instance_kind_mismatch,
                                "consistency instance needs the second electorate");
            const auto r1 = eval_rule(rule, instance.base, instance.scored_base, config);
            const auto r2 = eval_rule(rule, *instance.second, instance.scored_second, config);
            if (r1.winner() != r2.winner()) return {false, "electorates disagree; implication is vacuous"};
            CollectiveRanking joint;
            if (rule == RuleId::range_voting) {
                const ScoredProfile s1 =
                    instance.scored_base ? *instance.scored_base : canonical_scores(instance.base);
                const ScoredProfile s2 = instance.scored_second ? *instance.scored_second
                                                                : canonical_scores(*instance.second);
                joint = range_voting(merged_scored(s1, s2),
                                     range_config_for(instance.base.m(), config));
            } else {
                joint = eval_rule(rule, merged(instance.base, *instance.second), std::nullopt, config);
            }
            if (joint.winner() == r1.winner()) return {false, "merged electorate agrees"};
            return {true, "both electorates pick " +
                              labels[static_cast<std::size_t>(r1.winner())] + " but merged picks " +
                              labels[static_cast<std::size_t>(joint.winner())]};
        }
        case Criterion::iia: {
            if (!instance.removed)
                throw VoteError(ErrorCode::instance_kind_mismatch,
                                "iia instance needs the removed alternative");
            const int removed = *instance.removed;
            if (removed < 0 || removed >= instance.base.m())
                throw VoteError(ErrorCode::instance_kind_mismatch, "removed alternative out of range");
            const auto before = eval_rule(rule, instance.base, instance.scored_base, config);
            const auto after =
                eval_restricted(rule, instance.base, instance.scored_base, removed, config);
            const auto keep = all_but(instance.base.m(), removed);
            for (std::size_t i = 0; i < before.order.size(); ++i) {
                for (std::size_t j = i + 1; j < before.order.size(); ++j) {
                    const int x = before.order[i];
                    const int y = before.order[j];
                    if (x == removed || y == removed) continue;
                    const int x_restricted = static_cast<int>(
                        std::find(keep.begin(), keep.end(), x) - keep.begin());
                    const int y_restricted = static_cast<int>(
                        std::find(keep.begin(), keep.end(), y) - keep.begin());
                    if (after.rank_of(y_restricted) < after.rank_of(x_restricted))
                        return {true, "removing " + labels[static_cast<std::size_t>(removed)] +
                                          " flips " + labels[static_cast<std::size_t>(x)] + " vs " +
                                          labels[static_cast<std::size_t>(y)]};
                }
            }
            return {false, "collective pairwise order unchanged"};
        }
    }
    throw VoteError(ErrorCode::instance_kind_mismatch, "unknown criterion");
}

namespace criteria_detail {

inline std::vector<std::vector<int>> all_rankings(int m) {
    std::vector<int> ranking(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) ranking[static_cast<std::size_t>(i)] = i;
    std::vector<std::vector<int>> out;
    do {
        out.push_back(ranking);
    } while (std::next_permutation(ranking.begin(), ranking.end()));
    return out;
}

inline AlternativeSet search_alternatives(int m) {
    std::vector<std::string> labels;
    for (int i = 0; i < m; ++i) labels.emplace_back(1, static_cast<char>('A' + i));
    return AlternativeSet(std::move(labels));
}

// Profiles are enumerated as non-decreasing sequences of ranking indices
// (multisets, quotienting out anonymity), in lexicographic order within each
// size. Enumeration order defines which witness is "first".
template <class Fn>
bool for_each_profile_of_size(int num_rankings, int n, std::vector<int>& seq, Fn&& fn) {
    if (static_cast<int>(seq.size()) == n) return fn(seq);
    const int start = seq.empty() ? 0 : seq.back();
    for (int r = start; r < num_rankings; ++r) {
        seq.push_back(r);
        if (for_each_profile_of_size(num_rankings, n, seq, fn)) return true;
        seq.pop_back();
    }
    return false;
}

inline Profile profile_from_sequence(const AlternativeSet& alts,
                                     const std::vector<std::vector<int>>& rankings,
                                     const std::vector<int>& seq) {
    Profile profile;
    profile.alternatives = alts;
    profile.ballots.reserve(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i)
        profile.ballots.push_back(
            Ballot{rankings[static_cast<std::size_t>(seq[i])], "v" + std::to_string(i)});
    return profile;
}

inline Profile lift_on_ballot(const Profile& profile, std::size_t ballot_index, int alternative,
                              int target_pos) {
    Profile out = profile;
    auto& ranking = out.ballots[ballot_index].ranking;
    ranking.erase(std::find(ranking.begin(), ranking.end(), alternative));
    ranking.insert(ranking.begin() + target_pos, alternative);
    return out;
}

}  // namespace criteria_detail

/// Exhaustive first-witness search over all profiles of up to n_max ballots
/// (as anonymous multisets of the m! rankings), plus the perturbations or
/// electorate pairs each criterion calls for. Deterministic: the same bounds
/// always return the same witness.
inline std::optional<Witness> search_counterexample(RuleId rule, Criterion criterion, int m, int n_max,
                                                    const RuleConfig& config = {}) {
    using namespace criteria_detail;
    if (m < 2 || m > 4 || n_max < 1 || n_max > 7)
        throw VoteError(ErrorCode::bounds_too_large,
                        "search bounds limited to m in [2,4], n_max in [1,7]");
    if (!rule_is_deterministic(rule))
        throw VoteError(ErrorCode::instance_kind_mismatch,
                        to_string(rule) + " is not deterministic; criteria checks do not apply");

    const auto alts = search_alternatives(m);
    const auto rankings = all_rankings(m);
    const int num_rankings = static_cast<int>(rankings.size());
    std::optional<Witness> found;

    const auto make_witness = [&](const Profile& base, std::optional<Profile> second,
                                  std::optional<int> removed, std::string explanation) {
        Witness witness;
        witness.rule = rule;
        witness.criterion = criterion;
        witness.base = base;
        witness.second = std::move(second);
        witness.removed = removed;
        witness.explanation = std::move(explanation);
        if (rule == RuleId::range_voting) {
            witness.scored_base = canonical_scores(witness.base);
            if (witness.second) witness.scored_second = canonical_scores(*witness.second);
        }
        return witness;
    };

    switch (criterion) {
        case Criterion::majority:
        case Criterion::condorcet: {
            for (int n = 1; n <= n_max && !found; ++n) {
                std::vector<int> seq;
                for_each_profile_of_size(num_rankings, n, seq, [&](const std::vector<int>& s) {
                    const Profile profile = profile_from_sequence(alts, rankings, s);
                    Witness probe;
                    probe.rule = rule;
                    probe.criterion = criterion;
                    probe.base = profile;
                    if (rule == RuleId::range_voting) probe.scored_base = canonical_scores(profile);
                    const auto outcome = check_criterion(rule, criterion, probe, config);
                    if (outcome.violated) {
                        found = make_witness(profile, std::nullopt, std::nullopt, outcome.detail);
                        return true;
                    }
                    return false;
                });
            }
            break;
        }
        case Criterion::monotonicity: {
            // Raises of the winner: any move strictly up on one ballot, then
            // combinations on two distinct ballots.
            const auto try_perturbed = [&](const Profile& base, int winner, const Profile& perturbed) {
                const auto after = rule == RuleId::range_voting
                                       ? range_voting(canonical_scores(perturbed),
                                                      range_config_for(m, config))
                                       : eval_rule(rule, perturbed, std::nullopt, config);
                if (after.winner() != winner) {
                    found = make_witness(
                        base, perturbed, std::nullopt,
                        "raising winner " + alts.label(winner) + " hands the win to " +
                            alts.label(after.winner()));
                    return true;
                }
                return false;
            };
            for (int n = 1; n <= n_max && !found; ++n) {
                std::vector<int> seq;
                for_each_profile_of_size(num_rankings, n, seq, [&](const std::vector<int>& s) {
                    const Profile base = profile_from_sequence(alts, rankings, s);
                    const auto before = eval_rule(rule, base, std::nullopt, config);
                    const int winner = before.winner();
                    for (std::size_t i = 0; i < base.ballots.size(); ++i) {
                        const int pos = base.ballots[i].position_of(winner);
                        for (int target = 0; target < pos; ++target) {
                            if (try_perturbed(base, winner, lift_on_ballot(base, i, winner, target)))
                                return true;
                        }
                    }
                    for (std::size_t i = 0; i < base.ballots.size(); ++i) {
                        const int pos_i = base.ballots[i].position_of(winner);
                        for (std::size_t j = i + 1; j < base.ballots.size(); ++j) {
                            const int pos_j = base.ballots[j].position_of(winner);
                            for (int ti = 0; ti < pos_i; ++ti) {
                                const Profile once = lift_on_ballot(base, i, winner, ti);
                                for (int tj = 0; tj < pos_j; ++tj) {
                                    if (try_perturbed(base, winner,
                                                      lift_on_ballot(once, j, winner, tj)))
                                        return true;
                                }
                            }
                        }
                    }
                    return false;
                });
            }
            break;
        }
        case Criterion::consistency: {
            // Pairs of electorates, each of up to n_max ballots.
            struct Entry {
                std::vector<int> seq;
                int winner;
            };
            std::vector<Entry> entries;
            for (int n = 1; n <= n_max; ++n) {
                std::vector<int> seq;
                for_each_profile_of_size(num_rankings, n, seq, [&](const std::vector<int>& s) {
                    const Profile profile = profile_from_sequence(alts, rankings, s);
                    entries.push_back({s, eval_rule(rule, profile, std::nullopt, config).winner()});
                    return false;
                });
            }
            for (std::size_t i = 0; i < entries.size() && !found; ++i) {
                for (std::size_t j = 0; j < entries.size() && !found; ++j) {
                    if (entries[i].winner != entries[j].winner) continue;
                    std::vector<int> joint = entries[i].seq;
                    joint.insert(joint.end(), entries[j].seq.begin(), entries[j].seq.end());
                    std::sort(joint.begin(), joint.end());
                    const Profile merged_profile = profile_from_sequence(alts, rankings, joint);
                    const auto joint_result = eval_rule(rule, merged_profile, std::nullopt, config);
                    if (joint_result.winner() != entries[i].winner) {
                        const Profile p1 = profile_from_sequence(alts, rankings, entries[i].seq);
                        const Profile p2 = profile_from_sequence(alts, rankings, entries[j].seq);
                        found = make_witness(p1, p2, std::nullopt,
                                             "both electorates pick " +
                                                 alts.label(entries[i].winner) + " but merged picks " +
                                                 alts.label(joint_result.winner()));
                    }
                }
            }
            break;
        }
        case Criterion::iia: {
            for (int n = 1; n <= n_max && !found; ++n) {
                std::vector<int> seq;
                for_each_profile_of_size(num_rankings, n, seq, [&](const std::vector<int>& s) {
                    const Profile base = profile_from_sequence(alts, rankings, s);
                    Witness probe;
                    probe.rule = rule;
                    probe.criterion = criterion;
                    probe.base = base;
                    if (rule == RuleId::range_voting) probe.scored_base = canonical_scores(base);
                    for (int removed = 0; removed < m; ++removed) {
                        probe.removed = removed;
                        const auto outcome = check_criterion(rule, criterion, probe, config);
                        if (outcome.violated) {
                            found = make_witness(base, std::nullopt, removed, outcome.detail);
                            return true;
                        }
                    }
                    return false;
                });
            }
            break;
        }
    }
    return found;
}

struct ComplianceCell {
    RuleId rule;
    Criterion criterion;
    std::optional<Witness> witness;
};

struct ComplianceMatrix {
    int m = 0;
    int n_max = 0;
    std::vector<RuleId> rules;
    std::vector<ComplianceCell> cells;

    const ComplianceCell& cell(RuleId rule, Criterion criterion) const {
        for (const auto& c : cells)
            if (c.rule == rule && c.criterion == criterion) return c;
        throw VoteError(ErrorCode::invalid_argument, "cell not computed");
    }
};

/// Runs the counterexample search for every (rule, criterion) cell. A found
/// witness marks the cell non-compliant within the bounds.
inline ComplianceMatrix compliance_matrix(const std::vector<RuleId>& rules, int m, int n_max,
                                          const RuleConfig& config = {}) {
    ComplianceMatrix matrix;
    matrix.m = m;
    matrix.n_max = n_max;
    matrix.rules = rules;
    for (const RuleId rule : rules)
        for (const Criterion criterion : all_criteria())
            matrix.cells.push_back({rule, criterion, search_counterexample(rule, criterion, m, n_max, config)});
    return matrix;
}

}  // namespace votelib

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "votelib/core.hpp"
#include "votelib/dataset.hpp"
#include "votelib/rng.hpp"
#include "votelib/rules.hpp"
#include "votelib/synth.hpp"

namespace votelib {

/// Per-category validity counts in the style of the dataset statistics
/// tables: every accuracy denominator ties back to one of these.
struct ValidityStats {
    int total = 0;
    int ordinal_valid = 0;
    int scored_valid = 0;
    int scored_partial = 0;   // salvageable only via the partial-profile flag
    int informed_eligible = 0;
    int missing_gold = 0;
    int bad_choices = 0;
    int missing_agents = 0;
    int duplicate_agents = 0;
    int invalid_ballots = 0;
    int invalid_scores = 0;
    int malformed_lines = 0;
};

struct FilteredEntry {
    Question question;
    std::optional<Profile> ordinal;
    std::optional<ScoredProfile> scored;          // complete scored set
    std::optional<ScoredProfile> scored_partial;  // valid rows only, possibly fewer than n
    std::vector<std::string> issues;
};

struct FilteredDataset {
    std::vector<FilteredEntry> entries;
    ValidityStats stats;
    int expected_n = 0;
};

/// Applies the profile-validity rules: a question's ordinal profile is valid
/// iff it has ballots from all agents, no duplicated agent ids, and every
/// ballot is a complete, duplicate-free ranking. Scored profiles additionally
/// need every score present and in range. Invalid questions stay in the
/// output, flagged, so counts and exclusions are auditable.
inline FilteredDataset filter_valid(const Dataset& dataset, const RuleConfig& config = {}) {
    FilteredDataset out;
    out.expected_n = dataset.expected_n;
    out.stats.total = static_cast<int>(dataset.records.size());
    out.stats.malformed_lines = dataset.malformed_lines;
    for (const auto& record : dataset.records) {
        FilteredEntry entry;
        entry.question.id = record.id;
        entry.question.subject = record.subject;
        entry.question.gold = -1;
        AlternativeSet alts;
        try {
            alts = AlternativeSet(record.choices);
        } catch (const VoteError& error) {
            ++out.stats.bad_choices;
            entry.issues.push_back("choices: " + error.detail());
            out.entries.push_back(std::move(entry));
            continue;
        }
        entry.question.alternatives = alts;
        if (record.gold) {
            const auto gold = alts.index_of(*record.gold);
            if (gold) {
                entry.question.gold = *gold;
            } else {
                ++out.stats.bad_choices;
                entry.issues.push_back("gold label not among choices: " + *record.gold);
            }
        } else {
            ++out.stats.missing_gold;
        }

        bool ballots_ok = true;
        std::vector<Ballot> ballots;
        for (const auto& raw : record.ballots) {
            try {
                ballots.push_back(validate_ballot(raw.ranking, alts, raw.agent));
            } catch (const VoteError& error) {
                ballots_ok = false;
                entry.issues.push_back("ballot " + raw.agent + ": " + error.detail());
            }
        }
        if (!ballots_ok) ++out.stats.invalid_ballots;
        if (ballots_ok) {
            try {
                entry.ordinal = build_profile(alts, std::move(ballots), dataset.expected_n);
                ++out.stats.ordinal_valid;
                ++out.stats.informed_eligible;
            } catch (const VoteError& error) {
                if (error.code() == ErrorCode::duplicate_agent_id)
                    ++out.stats.duplicate_agents;
                else
                    ++out.stats.missing_agents;
                entry.issues.push_back("profile: " + error.detail());
            }
        }

        if (record.scores) {
            bool scores_ok = true;
            std::vector<ScoredBallot> rows;
            std::vector<ScoredBallot> valid_rows;
            for (const auto& raw : *record.scores) {
                try {
                    auto ballot = validate_scored_ballot(raw.scores, alts, config.range_min,
                                                         config.range_max, raw.agent);
                    valid_rows.push_back(ballot);
                    rows.push_back(std::move(ballot));
                } catch (const VoteError& error) {
                    scores_ok = false;
                    entry.issues.push_back("scores " + raw.agent + ": " + error.detail());
                }
            }
            std::unordered_set<std::string> ids;
            for (const auto& row : rows)
                if (!ids.insert(row.agent_id).second) {
                    scores_ok = false;
                    entry.issues.push_back("scores: duplicate agent id " + row.agent_id);
                }
            if (scores_ok && static_cast<int>(rows.size()) == dataset.expected_n) {
                entry.scored = ScoredProfile{alts, std::move(rows)};
                ++out.stats.scored_valid;
            } else {
                if (scores_ok)
                    entry.issues.push_back("scores: incomplete set (" + std::to_string(rows.size()) +
                                           " of " + std::to_string(dataset.expected_n) + ")");
                ++out.stats.invalid_scores;
                if (!valid_rows.empty()) {
                    std::unordered_set<std::string> partial_ids;
                    std::vector<ScoredBallot> deduped;
                    for (auto& row : valid_rows)
                        if (partial_ids.insert(row.agent_id).second) deduped.push_back(std::move(row));
                    entry.scored_partial = ScoredProfile{alts, std::move(deduped)};
                    ++out.stats.scored_partial;
                }
            }
        }
        out.entries.push_back(std::move(entry));
    }
    return out;
}

struct QuestionResult {
    std::string question_id;
    std::string subject;
    RuleId rule;
    std::vector<int> order;
    int gold = -1;
    int rank_of_gold = -1;  // 1-based when valid
    bool valid = false;
    int m = 0;
};

/// Cumulative accuracy of the first k collective preferences, over valid
/// results.
inline double hit_rate_at_k(const std::vector<QuestionResult>& results, int k) {
    int max_m = 0;
    for (const auto& result : results)
        if (result.valid) max_m = std::max(max_m, result.m);
    if (k < 1 || (max_m > 0 && k > max_m))
        throw VoteError(ErrorCode::k_out_of_range, "k must be within [1, m]");
    int valid = 0;
    int hits = 0;
    for (const auto& result : results) {
        if (!result.valid) continue;
        ++valid;
        if (result.rank_of_gold >= 1 && result.rank_of_gold <= k) ++hits;
    }
    if (valid == 0) return 0.0;
    return 100.0 * hits / valid;
}

struct EvalOptions {
    int runs = 1;
    int workers = 1;
    bool partial_scored = false;
    RuleId baseline = RuleId::blind_dictatorial;
    // Robustness injection: replace this many agents with random ones,
    // re-drawn per run.
    int corrupt_k = 0;
};

struct RuleReport {
    RuleId rule{};
    int valid_count = 0;
    std::vector<double> accuracy_per_run;
    double accuracy_mean = 0.0;
    std::map<int, double> hit_rate;
    std::map<std::string, double> subject_accuracy;
    std::map<std::string, int> subject_counts;
    double delta_vs_baseline = 0.0;
};

struct EvalReport {
    std::uint64_t seed = 0;
    int runs = 0;
    RuleId baseline{};
    int expected_n = 0;
    ValidityStats validity;
    std::vector<RuleReport> rules;

    const RuleReport& rule_report(RuleId rule) const {
        for (const auto& report : rules)
            if (report.rule == rule) return report;
        throw VoteError(ErrorCode::invalid_argument, "rule not evaluated: " + to_string(rule));
    }
};

namespace eval_detail {

struct EntryTask {
    const FilteredEntry* entry;
    // rank_of_gold per (rule, run); 0 marks invalid-for-rule.
    std::vector<int> ranks;
};

inline const ScoredProfile* scored_for(const FilteredEntry& entry, const EvalOptions& options) {
    if (entry.scored) return &*entry.scored;
    if (options.partial_scored && entry.scored_partial) return &*entry.scored_partial;
    return nullptr;
}

inline int evaluate_one(RuleId rule, const FilteredEntry& entry, const RuleConfig& base_config,
                        std::uint64_t run_seed, const EvalOptions& options, std::mutex* oracle_mutex) {
    if (entry.question.gold < 0) return 0;
    RuleConfig config = base_config;
    config.seed = run_seed;
    config.decision_id = entry.question.id;
    config.gold = entry.question.gold;
    try {
        CollectiveRanking result;
        if (rule_needs_scores(rule)) {
            const ScoredProfile* scored = scored_for(entry, options);
            if (!scored) return 0;
            if (options.corrupt_k > 0) {
                const ScoredProfile corrupted =
                    corrupt_scored_profile(*scored, std::min(options.corrupt_k, scored->n()), run_seed,
                                           entry.question.id, config.range_min, config.range_max);
                result = range_voting(corrupted, config);
            } else {
                result = range_voting(*scored, config);
            }
        } else {
            if (!entry.ordinal) return 0;
            const Profile* profile = &*entry.ordinal;
            Profile corrupted;
            if (options.corrupt_k > 0) {
                corrupted = corrupt_profile(*profile, options.corrupt_k, run_seed, entry.question.id);
                profile = &corrupted;
            }
            if (rule_needs_oracle(rule) && oracle_mutex) {
                const std::lock_guard<std::mutex> lock(*oracle_mutex);
                result = run_rule(rule, *profile, config);
            } else {
                result = run_rule(rule, *profile, config);
            }
        }
        return result.rank_of(entry.question.gold);
    } catch (const VoteError&) {
        // Oracle unavailable or input mismatch: invalid for this rule.
        return 0;
    }
}

}  // namespace eval_detail

/// Single-run, single-rule evaluation returning per-question results.
inline std::vector<QuestionResult> evaluate_rule_once(const FilteredDataset& filtered, RuleId rule,
                                                      const RuleConfig& config,
                                                      const EvalOptions& options = {}) {
    std::vector<QuestionResult> results;
    results.reserve(filtered.entries.size());
    for (const auto& entry : filtered.entries) {
        QuestionResult result;
        result.question_id = entry.question.id;
        result.subject = entry.question.subject;
        result.rule = rule;
        result.gold = entry.question.gold;
        result.m = entry.question.alternatives.size() > 0 ? entry.question.alternatives.size() : 0;
        const int rank =
            eval_detail::evaluate_one(rule, entry, config, config.seed, options, nullptr);
        if (rank > 0) {
            result.valid = true;
            result.rank_of_gold = rank;
        }
        results.push_back(std::move(result));
    }
    return results;
}

/// The measurement harness: evaluates every rule over every valid profile,
/// once per run with a per-run derived seed, and aggregates accuracy,
/// hit-rate@k, per-subject accuracy, and deltas against the baseline rule.
/// Workers only split the question loop; results are merged in input order,
/// so reports are identical for any worker count.
inline EvalReport evaluate(const Dataset& dataset, const std::vector<RuleId>& rules,
                           const RuleConfig& config, const EvalOptions& options = {}) {
    if (options.runs < 1) throw VoteError(ErrorCode::invalid_argument, "runs must be >= 1");
    const FilteredDataset filtered = filter_valid(dataset, config);

    std::vector<RuleId> ordered = rules;
    if (std::find(ordered.begin(), ordered.end(), options.baseline) == ordered.end())
        ordered.push_back(options.baseline);

    std::vector<std::uint64_t> run_seeds;
    for (int run = 0; run < options.runs; ++run)
        run_seeds.push_back(rng::derive_seed(config.seed, "run", run));

    const std::size_t num_rules = ordered.size();
    const std::size_t num_runs = static_cast<std::size_t>(options.runs);
    const std::size_t num_entries = filtered.entries.size();
    // ranks[entry][rule * runs + run], 0 = invalid for that rule.
    std::vector<std::vector<int>> ranks(num_entries,
                                        std::vector<int>(num_rules * num_runs, 0));

    const bool oracle_serial =
        config.dictator && !config.dictator->concurrent_safe();
    std::mutex oracle_mutex;
    std::mutex* mutex_ptr = oracle_serial ? &oracle_mutex : nullptr;

    const auto work = [&](std::size_t entry_index) {
        const auto& entry = filtered.entries[entry_index];
        for (std::size_t rule_index = 0; rule_index < num_rules; ++rule_index) {
            for (std::size_t run = 0; run < num_runs; ++run) {
                ranks[entry_index][rule_index * num_runs + run] = eval_detail::evaluate_one(
                    ordered[rule_index], entry, config, run_seeds[run], options, mutex_ptr);
            }
        }
    };

    const int workers = std::max(1, options.workers);
    if (workers == 1 || num_entries < 2) {
        for (std::size_t i = 0; i < num_entries; ++i) work(i);
    } else {
        std::atomic<std::size_t> cursor{0};
        std::vector<std::thread> pool;
        const int spawn = std::min<std::size_t>(static_cast<std::size_t>(workers), num_entries);
        for (int t = 0; t < spawn; ++t) {
            pool.emplace_back([&]() {
                for (;;) {
                    const std::size_t i = cursor.fetch_add(1);
                    if (i >= num_entries) return;
                    work(i);
                }
            });
        }
        for (auto& thread : pool) thread.join();
    }

    EvalReport report;
    report.seed = config.seed;
    report.runs = options.runs;
    report.baseline = options.baseline;
    report.expected_n = dataset.expected_n;
    report.validity = filtered.stats;

    int max_m = 0;
    for (const auto& entry : filtered.entries)
        if (entry.question.alternatives.size() > max_m) max_m = entry.question.alternatives.size();

    for (std::size_t rule_index = 0; rule_index < num_rules; ++rule_index) {
        RuleReport rule_report;
        rule_report.rule = ordered[rule_index];
        std::vector<int> hits_per_run(num_runs, 0);
        std::vector<std::vector<int>> rank_hist(num_runs, std::vector<int>(static_cast<std::size_t>(max_m) + 1, 0));
        std::map<std::string, long long> subject_hits;
        std::map<std::string, int> subject_counts;
        int valid_count = 0;
        for (std::size_t entry_index = 0; entry_index < num_entries; ++entry_index) {
            const auto& entry = filtered.entries[entry_index];
            bool entry_valid = true;
            for (std::size_t run = 0; run < num_runs; ++run)
                if (ranks[entry_index][rule_index * num_runs + run] <= 0) entry_valid = false;
            if (!entry_valid) continue;
            ++valid_count;
            subject_counts[entry.question.subject] += 1;
            for (std::size_t run = 0; run < num_runs; ++run) {
                const int rank = ranks[entry_index][rule_index * num_runs + run];
                if (rank == 1) ++hits_per_run[run];
                if (rank >= 1 && rank <= max_m) ++rank_hist[run][static_cast<std::size_t>(rank)];
                if (rank == 1) subject_hits[entry.question.subject] += 1;
            }
        }
        rule_report.valid_count = valid_count;
        double total = 0.0;
        for (std::size_t run = 0; run < num_runs; ++run) {
            const double accuracy =
                valid_count > 0 ? 100.0 * hits_per_run[run] / valid_count : 0.0;
            rule_report.accuracy_per_run.push_back(accuracy);
            total += accuracy;
        }
        rule_report.accuracy_mean = total / static_cast<double>(num_runs);
        for (int k = 1; k <= max_m; ++k) {
            double sum = 0.0;
            for (std::size_t run = 0; run < num_runs; ++run) {
                int cumulative = 0;
                for (int r = 1; r <= k; ++r) cumulative += rank_hist[run][static_cast<std::size_t>(r)];
                sum += valid_count > 0 ? 100.0 * cumulative / valid_count : 0.0;
            }
            rule_report.hit_rate[k] = sum / static_cast<double>(num_runs);
        }
        for (const auto& [subject, count] : subject_counts) {
            const auto hits = subject_hits.count(subject) ? subject_hits.at(subject) : 0;
            rule_report.subject_accuracy[subject] =
                100.0 * static_cast<double>(hits) / (static_cast<double>(count) * num_runs);
            rule_report.subject_counts[subject] = count;
        }
        report.rules.push_back(std::move(rule_report));
    }

    const auto& baseline_report = report.rule_report(options.baseline);
    const double baseline_accuracy = baseline_report.accuracy_mean;
    for (auto& rule_report : report.rules)
        rule_report.delta_vs_baseline = rule_report.accuracy_mean - baseline_accuracy;
    return report;
}

struct SweepPoint {
    int parameter = 0;  // ensemble size or corrupted-agent count
    RuleReport report;
};

namespace eval_detail {

inline Dataset prefix_subsample(const Dataset& dataset, int size) {
    Dataset out;
    out.expected_n = size;
    out.malformed_lines = dataset.malformed_lines;
    out.records.reserve(dataset.records.size());
    for (const auto& record : dataset.records) {
        QuestionRecord reduced = record;
        if (static_cast<int>(reduced.ballots.size()) > size)
            reduced.ballots.resize(static_cast<std::size_t>(size));
        if (reduced.scores) {
            std::unordered_set<std::string> kept_agents;
            for (const auto& ballot : reduced.ballots) kept_agents.insert(ballot.agent);
            std::vector<ScoreRecord> kept;
            for (const auto& row : *reduced.scores)
                if (kept_agents.count(row.agent)) kept.push_back(row);
            reduced.scores = std::move(kept);
        }
        out.records.push_back(std::move(reduced));
    }
    return out;
}

}  // namespace eval_detail

/// Accuracy as a function of ensemble size: for each size s the first s
/// agents (canonical order) of each profile form the electorate.
inline std::vector<SweepPoint> quorum_sweep(const Dataset& dataset, RuleId rule,
                                            const std::vector<int>& sizes, const RuleConfig& config,
                                            const EvalOptions& options = {}) {
    std::vector<SweepPoint> curve;
    for (const int size : sizes) {
        if (size < 1 || size > dataset.expected_n)
            throw VoteError(ErrorCode::size_exceeds_ensemble,
                            "quorum size " + std::to_string(size) + " outside [1, " +
                                std::to_string(dataset.expected_n) + "]");
        EvalOptions point_options = options;
        point_options.baseline = rule;  // self-delta; keeps single-rule sweeps cheap
        const Dataset subsampled = eval_detail::prefix_subsample(dataset, size);
        const EvalReport report = evaluate(subsampled, {rule}, config, point_options);
        curve.push_back({size, report.rule_report(rule)});
    }
    return curve;
}

/// Accuracy as a function of the number of unreliable (random-voting)
/// agents; corruption is re-drawn per run.
inline std::vector<SweepPoint> robustness_sweep(const Dataset& dataset, RuleId rule,
                                                const std::vector<int>& k_values,
                                                const RuleConfig& config,
                                                const EvalOptions& options = {}) {
    std::vector<SweepPoint> curve;
    for (const int k : k_values) {
        if (k < 0 || k > dataset.expected_n)
            throw VoteError(ErrorCode::k_out_of_range,
                            "corruption count " + std::to_string(k) + " outside [0, " +
                                std::to_string(dataset.expected_n) + "]");
        EvalOptions point_options = options;
        point_options.baseline = rule;
        point_options.corrupt_k = k;
        const EvalReport report = evaluate(dataset, {rule}, config, point_options);
        curve.push_back({k, report.rule_report(rule)});
    }
    return curve;
}

struct SubjectDelta {
    std::string subject;
    double accuracy = 0.0;
    double baseline_accuracy = 0.0;
    double delta = 0.0;
};

struct SubjectReport {
    RuleId rule{};
    RuleId baseline{};
    std::vector<SubjectDelta> rows;  // sorted by subject
    double min_delta = 0.0;
    double median_delta = 0.0;
    double max_delta = 0.0;
};

/// Per-subject accuracy difference of one rule against the baseline,
/// with min/median/max summary for box-plot style output.
inline SubjectReport subject_report(const EvalReport& report, RuleId rule, RuleId baseline) {
    const auto& rule_report = report.rule_report(rule);
    const auto& baseline_report = report.rule_report(baseline);
    if (rule_report.subject_counts != baseline_report.subject_counts)
        throw VoteError(ErrorCode::subject_set_mismatch,
                        "rules were evaluated on different valid-profile sets");
    SubjectReport out;
    out.rule = rule;
    out.baseline = baseline;
    std::vector<double> deltas;
    for (const auto& [subject, accuracy] : rule_report.subject_accuracy) {
        SubjectDelta row;
        row.subject = subject;
        row.accuracy = accuracy;
        row.baseline_accuracy = baseline_report.subject_accuracy.at(subject);
        row.delta = row.accuracy - row.baseline_accuracy;
        deltas.push_back(row.delta);
        out.rows.push_back(std::move(row));
    }
    if (!deltas.empty()) {
        std::sort(deltas.begin(), deltas.end());
        out.min_delta = deltas.front();
        out.max_delta = deltas.back();
        const std::size_t mid = deltas.size() / 2;
        out.median_delta = deltas.size() % 2 == 1 ? deltas[mid]
                                                  : (deltas[mid - 1] + deltas[mid]) / 2.0;
    }
    return out;
}

}  // namespace votelib

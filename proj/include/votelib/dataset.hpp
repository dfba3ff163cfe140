#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "votelib/core.hpp"

namespace votelib {

/// One MCQA-style decision: identified question, candidate choices, and the
/// gold choice when known.
struct Question {
    std::string id;
    std::string subject;
    AlternativeSet alternatives;
    int gold = -1;  // -1 when unknown
};

/// Raw per-agent records as ingested, before validation. Labels, not
/// indices: binding happens against the question's choices at parse time.
struct BallotRecord {
    std::string agent;
    std::vector<std::string> ranking;
};

struct ScoreRecord {
    std::string agent;
    std::vector<std::pair<std::string, int>> scores;
};

struct QuestionRecord {
    std::string id;
    std::string subject;
    std::vector<std::string> choices;
    std::optional<std::string> gold;
    std::vector<BallotRecord> ballots;
    std::optional<std::vector<ScoreRecord>> scores;
};

struct Dataset {
    std::vector<QuestionRecord> records;
    int expected_n = 0;
    // Lines the reader had to skip (surfaces in validity statistics).
    int malformed_lines = 0;
};

}  // namespace votelib

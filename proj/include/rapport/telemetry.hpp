#pragma once

// Game telemetry: score and push events for a participant across the two
// rounds, with role attribution (collector/pusher, swapped between rounds).

#include <optional>
#include <string>
#include <vector>

namespace rapport {

enum class EventKind { score, push };
enum class Role { collector, pusher };
enum class PushOrientation { horizontal, vertical };

struct GameEvent {
    double t = 0.0;
    EventKind kind = EventKind::score;
    int round = 0;  // 1 or 2
    Role role = Role::collector;
    std::optional<PushOrientation> orientation;  // push events only
};

struct GameLog {
    std::vector<GameEvent> events;

    // Enforces: rounds are 1/2; a round's events agree on role; roles swap
    // between rounds; push events carry an orientation and occur in the
    // participant's pusher round. Throws InputError with the line/event index.
    void validate() const;

    // Role in a round; inferred from the other round when one has no events.
    // Errors when no event carries a role at all.
    Role role_in_round(int round) const;
};

// The 12 performance features in schema order: ScoreRound1, ScoreRound2,
// ScoreCollector, ScorePusher, ScoreDiffRounds (round2 - round1, signed),
// ScoreAbsDiffRounds, ScoreDiffRole (collector - pusher, signed),
// ScoreAbsDiffRole, ScoreOverall, ScoreMean, ScoreMin, ScoreMax.
std::vector<double> performance_features(const GameLog& log);

// Push counts: (CountVerticalPushes, CountHorizontalPushes).
std::pair<int, int> behaviour_features(const GameLog& log);

// JSONL: one event object per line, e.g.
//   {"t":12.5,"kind":"score","round":1,"role":"collector"}
//   {"t":30.1,"kind":"push","round":2,"role":"pusher","orientation":"horizontal"}
GameLog read_game_log(const std::string& path);
void write_game_log(const std::string& path, const GameLog& log);

}  // namespace rapport

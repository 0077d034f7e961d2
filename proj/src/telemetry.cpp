#include "rapport/telemetry.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"
#include "rapport/error.hpp"
#include "rapport/schema.hpp"

namespace rapport {

void GameLog::validate() const {
    std::optional<Role> role_by_round[2];
    bool any = false;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const GameEvent& e = events[i];
        const std::string where = "event " + std::to_string(i);
        if (e.round != 1 && e.round != 2)
            throw InputError("telemetry: " + where + " has round " + std::to_string(e.round) +
                             ", expected 1 or 2");
        auto& slot = role_by_round[e.round - 1];
        if (slot.has_value() && *slot != e.role)
            throw InputError("telemetry: " + where + " contradicts the role of round " +
                             std::to_string(e.round));
        slot = e.role;
        any = true;
        if (e.kind == EventKind::push) {
            if (!e.orientation.has_value())
                throw InputError("telemetry: " + where + " is a push without orientation");
            if (e.role != Role::pusher)
                throw InputError("telemetry: " + where + " is a push outside the pusher role");
        }
    }
    if (!any) throw InputError("telemetry: log has no events; round roles unknown");
    if (role_by_round[0].has_value() && role_by_round[1].has_value() &&
        *role_by_round[0] == *role_by_round[1])
        throw InputError("telemetry: roles must swap between rounds");
}

Role GameLog::role_in_round(int round) const {
    std::optional<Role> role_by_round[2];
    for (const auto& e : events)
        if (e.round == 1 || e.round == 2) role_by_round[e.round - 1] = e.role;
    if (role_by_round[round - 1].has_value()) return *role_by_round[round - 1];
    const int other = round == 1 ? 2 : 1;
    if (role_by_round[other - 1].has_value())  // roles swap between rounds
        return *role_by_round[other - 1] == Role::collector ? Role::pusher : Role::collector;
    throw InputError("telemetry: round " + std::to_string(round) + " has no role assignment");
}

std::vector<double> performance_features(const GameLog& log) {
    log.validate();
    double round_score[2] = {0.0, 0.0};
    for (const auto& e : log.events)
        if (e.kind == EventKind::score) round_score[e.round - 1] += 1.0;

    const Role r1 = log.role_in_round(1);
    const double collector = r1 == Role::collector ? round_score[0] : round_score[1];
    const double pusher = r1 == Role::pusher ? round_score[0] : round_score[1];

    const double diff_rounds = round_score[1] - round_score[0];
    const double diff_role = collector - pusher;
    const double overall = round_score[0] + round_score[1];
    return {round_score[0],
            round_score[1],
            collector,
            pusher,
            diff_rounds,
            std::abs(diff_rounds),
            diff_role,
            std::abs(diff_role),
            overall,
            overall / 2.0,
            std::min(round_score[0], round_score[1]),
            std::max(round_score[0], round_score[1])};
}

std::pair<int, int> behaviour_features(const GameLog& log) {
    log.validate();
    int vertical = 0, horizontal = 0;
    for (const auto& e : log.events) {
        if (e.kind != EventKind::push) continue;
        if (*e.orientation == PushOrientation::vertical) ++vertical;
        else ++horizontal;
    }
    return {vertical, horizontal};
}

namespace {

using nlohmann::json;

GameEvent parse_event(const json& j, const std::string& ctx) {
    if (!j.is_object()) throw InputError("telemetry: " + ctx + ": not an object");
    GameEvent e;
    if (!j.contains("t") || !j["t"].is_number())
        throw InputError("telemetry: " + ctx + ": missing numeric 't'");
    e.t = j["t"].get<double>();
    const std::string kind = j.value("kind", "");
    if (kind == "score") e.kind = EventKind::score;
    else if (kind == "push") e.kind = EventKind::push;
    else throw InputError("telemetry: " + ctx + ": unknown kind '" + kind + "'");
    if (!j.contains("round") || !j["round"].is_number_integer())
        throw InputError("telemetry: " + ctx + ": missing integer 'round'");
    e.round = j["round"].get<int>();
    const std::string role = j.value("role", "");
    if (role == "collector") e.role = Role::collector;
    else if (role == "pusher") e.role = Role::pusher;
    else throw InputError("telemetry: " + ctx + ": unknown role '" + role + "'");
    if (j.contains("orientation")) {
        const std::string o = j["orientation"].get<std::string>();
        if (o == "horizontal") e.orientation = PushOrientation::horizontal;
        else if (o == "vertical") e.orientation = PushOrientation::vertical;
        else throw InputError("telemetry: " + ctx + ": unknown orientation '" + o + "'");
    }
    return e;
}

}  // namespace

GameLog read_game_log(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("telemetry: cannot open '" + path + "'");
    GameLog log;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const std::string ctx = path + " line " + std::to_string(line_no);
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw InputError("telemetry: " + ctx + ": " + e.what());
        }
        log.events.push_back(parse_event(j, ctx));
    }
    log.validate();
    return log;
}

void write_game_log(const std::string& path, const GameLog& log) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("telemetry: cannot open '" + path + "' for writing");
    for (const auto& e : log.events) {
        nlohmann::ordered_json j;
        j["t"] = e.t;
        j["kind"] = e.kind == EventKind::score ? "score" : "push";
        j["round"] = e.round;
        j["role"] = e.role == Role::collector ? "collector" : "pusher";
        if (e.orientation.has_value())
            j["orientation"] =
                *e.orientation == PushOrientation::horizontal ? "horizontal" : "vertical";
        out << j.dump() << '\n';
    }
    if (!out) throw InputError("telemetry: write failed for '" + path + "'");
}

}  // namespace rapport

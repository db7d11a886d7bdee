#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace hawkes {

inline constexpr double kSecondsPerHour = 3600.0;

/// Communication channel of a raw log row.
enum class Channel { Call, Text };

inline std::string to_string(Channel c) { return c == Channel::Call ? "call" : "text"; }

/// One row of a communication log: an absolute-time directed contact event.
struct RawEvent {
    std::int64_t timestamp = 0;  // epoch seconds, UTC
    std::string sender;
    std::string receiver;
    Channel channel = Channel::Call;
    std::int64_t duration = 0;  // seconds; texts carry 0

    bool valid() const {
        return timestamp >= 0 && !sender.empty() && !receiver.empty() &&
               sender != receiver && duration >= 0;
    }
};

/// Ordered event timestamps for one (sender, receiver) dyad, rebased so the
/// first event sits at t = 0 and expressed in hours.
struct EventSeries {
    std::string sender;
    std::string receiver;
    std::vector<double> times;      // strictly increasing, times[0] == 0
    double observation_end = 0.0;   // hours, >= times.back()
    std::int64_t start_epoch = -1;  // epoch seconds of times[0]; -1 when synthetic
    bool truncated = false;         // simulator hit its event cap

    std::size_t size() const { return times.size(); }
    double duration() const { return times.empty() ? 0.0 : times.back(); }

    /// Throws std::invalid_argument on any violated series invariant.
    void validate() const {
        if (times.empty()) throw std::invalid_argument("event series is empty");
        if (times.front() != 0.0)
            throw std::invalid_argument("event series must start at t = 0");
        for (std::size_t i = 1; i < times.size(); ++i) {
            if (!(times[i] > times[i - 1]))
                throw std::invalid_argument("event times must be strictly increasing");
        }
        if (!std::isfinite(observation_end) || observation_end < times.back())
            throw std::invalid_argument("observation_end must be finite and >= last event");
    }
};

/// Relationship categories derivable from the survey label sequence.
enum class RelationshipCategory {
    FamilyRelaxing,
    FamilyStable,
    FriendshipRelaxing,
    FriendshipStable,
    FriendshipStrengthening,
    RomanticRelaxing,
    Excluded,
};

inline std::string to_string(RelationshipCategory c) {
    switch (c) {
        case RelationshipCategory::FamilyRelaxing: return "family-relaxing";
        case RelationshipCategory::FamilyStable: return "family-stable";
        case RelationshipCategory::FriendshipRelaxing: return "friendship-relaxing";
        case RelationshipCategory::FriendshipStable: return "friendship-stable";
        case RelationshipCategory::FriendshipStrengthening: return "friendship-strengthening";
        case RelationshipCategory::RomanticRelaxing: return "romantic-relaxing";
        case RelationshipCategory::Excluded: return "excluded";
    }
    return "excluded";
}

/// A dyad's survey labeling history plus the derived category.
struct RelationshipRecord {
    std::string sender;
    std::string receiver;
    std::vector<std::string> survey_labels;  // one per survey wave, in wave order
    std::vector<std::int64_t> survey_times;  // absolute epoch seconds per wave
    RelationshipCategory category = RelationshipCategory::Excluded;
};

}  // namespace hawkes

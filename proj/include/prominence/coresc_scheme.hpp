#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace prominence {

/// The eleven CoreSC sentence categories.
enum class CoreSCCategory : std::uint8_t {
    Background,
    Motivation,
    Goal,
    Object,
    Hypothesis,
    Method,
    Experiment,
    Model,
    Observation,
    Result,
    Conclusion,
};

/// Coarse discourse groups used for reporting.
enum class CoreSCGroup : std::uint8_t { Background, Goals, Method, Outcomes };

inline constexpr std::size_t kCoreSCCategoryCount = 11;
inline constexpr std::size_t kCoreSCGroupCount = 4;

inline constexpr std::array<CoreSCGroup, kCoreSCGroupCount> kAllGroups = {
    CoreSCGroup::Background, CoreSCGroup::Goals, CoreSCGroup::Method, CoreSCGroup::Outcomes};

constexpr CoreSCGroup map_group(CoreSCCategory category) noexcept {
    switch (category) {
        case CoreSCCategory::Background:
        case CoreSCCategory::Motivation:
            return CoreSCGroup::Background;
        case CoreSCCategory::Goal:
        case CoreSCCategory::Object:
        case CoreSCCategory::Hypothesis:
            return CoreSCGroup::Goals;
        case CoreSCCategory::Method:
        case CoreSCCategory::Experiment:
        case CoreSCCategory::Model:
            return CoreSCGroup::Method;
        case CoreSCCategory::Observation:
        case CoreSCCategory::Result:
        case CoreSCCategory::Conclusion:
            return CoreSCGroup::Outcomes;
    }
    return CoreSCGroup::Background;
}

/// Canonical CoreSC label, e.g. "Object".
std::string_view to_string(CoreSCCategory category) noexcept;

/// Report name: Background / Goals / Method / Outcomes.
std::string_view to_string(CoreSCGroup group) noexcept;

/// Accepts the canonical CoreSC spellings, "Objective"/"Objectives" for
/// Object, and SAPIENTA's three-letter codes ("Bac", "Res", ...).
/// Matching is exact and case-sensitive.
std::optional<CoreSCCategory> parse_coresc_category(std::string_view label) noexcept;

std::optional<CoreSCGroup> parse_coresc_group(std::string_view name) noexcept;

}  // namespace prominence

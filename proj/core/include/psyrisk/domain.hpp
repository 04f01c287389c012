#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace psyrisk {

/// Risk factor domains. The first seven values index classifier outputs
/// 0..6 in declaration order; Other is the open-world label and is never
/// used for training.
enum class Domain : std::uint8_t {
    Appearance = 0,
    ThoughtContent = 1,
    Interpersonal = 2,
    Mood = 3,
    Occupation = 4,
    ThoughtProcess = 5,
    Substance = 6,
    Other = 7,
};

inline constexpr std::size_t kNumRiskDomains = 7;
inline constexpr std::size_t kNumDomains = 8;

inline constexpr std::array<Domain, kNumRiskDomains> kRiskDomains{
    Domain::Appearance, Domain::ThoughtContent, Domain::Interpersonal, Domain::Mood,
    Domain::Occupation, Domain::ThoughtProcess, Domain::Substance,
};

inline constexpr std::array<Domain, kNumDomains> kAllDomains{
    Domain::Appearance, Domain::ThoughtContent, Domain::Interpersonal, Domain::Mood,
    Domain::Occupation, Domain::ThoughtProcess, Domain::Substance, Domain::Other,
};

/// One score per risk domain, indexed by domain_index().
using DomainScores = std::array<double, kNumRiskDomains>;

constexpr std::size_t domain_index(Domain d) noexcept { return static_cast<std::size_t>(d); }

constexpr bool is_risk_domain(Domain d) noexcept { return d != Domain::Other; }

/// Canonical spelling used in every file format ("ThoughtContent", ...).
std::string_view domain_name(Domain d) noexcept;

/// Human-readable spelling used in reports ("Thought Content", ...).
std::string_view domain_display_name(Domain d) noexcept;

std::optional<Domain> parse_domain(std::string_view name) noexcept;

/// Throws DataError when `labels` is empty, has duplicates, or mixes Other
/// with a risk domain.
void validate_label_list(const std::vector<Domain>& labels);

}  // namespace psyrisk

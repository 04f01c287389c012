#include "psyrisk/domain.hpp"

#include <algorithm>
#include <string>

#include "psyrisk/errors.hpp"

namespace psyrisk {

namespace {

constexpr std::array<std::string_view, kNumDomains> kNames{
    "Appearance", "ThoughtContent", "Interpersonal",  "Mood",
    "Occupation", "ThoughtProcess", "Substance",      "Other",
};

constexpr std::array<std::string_view, kNumDomains> kDisplayNames{
    "Appearance", "Thought Content", "Interpersonal",   "Mood",
    "Occupation", "Thought Process", "Substance",       "Other",
};

}  // namespace

std::string_view domain_name(Domain d) noexcept { return kNames[domain_index(d)]; }

std::string_view domain_display_name(Domain d) noexcept { return kDisplayNames[domain_index(d)]; }

std::optional<Domain> parse_domain(std::string_view name) noexcept
{
    for (auto d : kAllDomains) {
        if (kNames[domain_index(d)] == name) {
            return d;
        }
    }
    return std::nullopt;
}

void validate_label_list(const std::vector<Domain>& labels)
{
    if (labels.empty()) {
        throw DataError("label list is empty");
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (std::find(labels.begin() + i + 1, labels.end(), labels[i]) != labels.end()) {
            throw DataError("duplicate label " + std::string(domain_name(labels[i])));
        }
    }
    if (labels.size() > 1
        && std::find(labels.begin(), labels.end(), Domain::Other) != labels.end()) {
        throw DataError("Other must be the sole label when present");
    }
}

}  // namespace psyrisk

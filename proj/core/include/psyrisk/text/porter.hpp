#pragma once

#include <string>
#include <string_view>

namespace psyrisk {

/// Stems a lowercase ASCII word with the original Porter (1980) suffix
/// stripping rules, steps 1a through 5b, with no departures: words of one
/// or two letters are processed like any other (so "is" becomes "i").
std::string porter_stem(std::string_view word);

}  // namespace psyrisk

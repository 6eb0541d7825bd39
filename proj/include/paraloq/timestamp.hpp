#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace paraloq {

// UTC, millisecond precision: 2026-10-19T08:30:00.250Z
std::string format_iso8601_ms(std::int64_t epoch_ms);
// Basic form used in file names: 20261019T083000Z
std::string format_iso8601_basic(std::int64_t epoch_ms);
// Accepts the format_iso8601_ms form only. Throws kParse.
std::int64_t parse_iso8601_ms(std::string_view text);

std::int64_t now_epoch_ms();

}  // namespace paraloq

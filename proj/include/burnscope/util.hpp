// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BURNSCOPE_UTIL_HPP
#define BURNSCOPE_UTIL_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace burnscope {

using Bytes = std::vector<uint8_t>;
using ByteSpan = std::span<const uint8_t>;

/** Version stamped into every CSV (as a leading comment line) and JSON document. */
inline constexpr int SCHEMA_VERSION = 1;
inline constexpr std::string_view SCHEMA_LINE = "# schema_version: 1\n";

std::string hex_encode(ByteSpan data);
/** Accepts upper or lower case; surrounding ASCII whitespace is ignored. */
Bytes hex_decode(std::string_view text);

inline Bytes to_bytes(std::string_view s)
{
    return Bytes(s.begin(), s.end());
}

Bytes read_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);
void write_file(const std::filesystem::path& path, ByteSpan contents);

/** Splits one CSV line. Quoted fields with doubled quotes are supported. */
std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_escape(std::string_view field);

std::string_view trim(std::string_view s);

/** A UTC calendar day. */
struct Date {
    int year{1970};
    unsigned month{1};
    unsigned day{1};

    static Date from_unix(int64_t seconds);
    /** Strict YYYY-MM-DD; throws Error(BadConfig). */
    static Date parse(std::string_view text);
    /** Seconds at 00:00:00 UTC. */
    int64_t to_unix() const;
    std::string str() const;
    friend auto operator<=>(const Date&, const Date&) = default;
};

/** "2022-02-12T08:00:00Z" */
std::string format_timestamp(int64_t seconds);

} // namespace burnscope

#endif // BURNSCOPE_UTIL_HPP

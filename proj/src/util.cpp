// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <burnscope/amount.hpp>
#include <burnscope/error.hpp>
#include <burnscope/util.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

namespace burnscope {

std::string_view errc_name(Errc code)
{
    switch (code) {
    case Errc::Truncated: return "Truncated";
    case Errc::NonMinimal: return "NonMinimal";
    case Errc::TrailingBytes: return "TrailingBytes";
    case Errc::SuperfluousWitness: return "SuperfluousWitness";
    case Errc::MalformedTx: return "MalformedTx";
    case Errc::BadMagic: return "BadMagic";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::MalformedPush: return "MalformedPush";
    case Errc::BadChecksum: return "BadChecksum";
    case Errc::BadAlphabet: return "BadAlphabet";
    case Errc::BadAddress: return "BadAddress";
    case Errc::BadLabel: return "BadLabel";
    case Errc::UnknownTx: return "UnknownTx";
    case Errc::DateNotCovered: return "DateNotCovered";
    case Errc::BadPrice: return "BadPrice";
    case Errc::BadConfig: return "BadConfig";
    case Errc::BadSnapshot: return "BadSnapshot";
    case Errc::InfeasibleScenario: return "InfeasibleScenario";
    case Errc::Overflow: return "Overflow";
    case Errc::Io: return "Io";
    } // no default case, so the compiler can warn about missing cases
    return "Unknown";
}

std::string hex_encode(ByteSpan data)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

static int hex_value(char c)
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

Bytes hex_decode(std::string_view text)
{
    text = trim(text);
    if (text.size() % 2 != 0) fail(Errc::BadConfig, "hex string has odd length");
    Bytes out;
    out.reserve(text.size() / 2);
    for (size_t i = 0; i < text.size(); i += 2) {
        const int hi = hex_value(text[i]);
        const int lo = hex_value(text[i + 1]);
        if (hi < 0 || lo < 0) fail(Errc::BadConfig, "invalid hex digit");
        out.push_back(static_cast<uint8_t>((hi << 4) | lo));
    }
    return out;
}

Bytes read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::Io, "cannot open " + path.string());
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::Io, "cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) fail(Errc::Io, "short write to " + path.string());
}

void write_file(const std::filesystem::path& path, ByteSpan contents)
{
    write_file(path, std::string_view(reinterpret_cast<const char*>(contents.data()), contents.size()));
}

std::vector<std::string> split_csv_line(std::string_view line)
{
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string csv_escape(std::string_view field)
{
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string_view trim(std::string_view s)
{
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::string format_btc(Amount amount)
{
    const uint64_t whole = amount.sat() / COIN;
    const uint64_t frac = amount.sat() % COIN;
    std::string f = std::to_string(frac);
    return std::to_string(whole) + "." + std::string(8 - f.size(), '0') + f;
}

std::string UsdCents::str() const
{
    const bool neg = m_cents < 0;
    const uint64_t abs = neg ? static_cast<uint64_t>(-m_cents) : static_cast<uint64_t>(m_cents);
    const uint64_t c = abs % 100;
    return (neg ? "-" : "") + std::to_string(abs / 100) + (c < 10 ? ".0" : ".") + std::to_string(c);
}

UsdCents parse_usd(const std::string& text)
{
    const std::string_view t = trim(text);
    const auto dot = t.find('.');
    const std::string_view whole = t.substr(0, dot);
    const std::string_view frac = dot == std::string_view::npos ? std::string_view{} : t.substr(dot + 1);
    if (whole.empty() || frac.size() > 2) fail(Errc::BadPrice, "bad USD value: " + text);
    int64_t cents = 0;
    for (char c : whole) {
        if (c < '0' || c > '9') fail(Errc::BadPrice, "bad USD value: " + text);
        cents = cents * 10 + (c - '0');
    }
    cents *= 100;
    int64_t f = 0;
    for (char c : frac) {
        if (c < '0' || c > '9') fail(Errc::BadPrice, "bad USD value: " + text);
        f = f * 10 + (c - '0');
    }
    if (frac.size() == 1) f *= 10;
    return UsdCents(cents + f);
}

} // namespace burnscope

namespace burnscope {

Date Date::from_unix(int64_t seconds)
{
    using namespace std::chrono;
    const sys_days days = floor<std::chrono::days>(sys_seconds(std::chrono::seconds(seconds)));
    const year_month_day ymd(days);
    return Date{static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day())};
}

Date Date::parse(std::string_view text)
{
    text = trim(text);
    const auto bad = [&]() { fail(Errc::BadConfig, "expected YYYY-MM-DD, got '" + std::string(text) + "'"); };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') bad();
    for (size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
        if (text[i] < '0' || text[i] > '9') bad();
    }
    const auto num = [&](size_t pos, size_t len) {
        int v = 0;
        for (size_t i = pos; i < pos + len; ++i) v = v * 10 + (text[i] - '0');
        return v;
    };
    const Date d{num(0, 4), static_cast<unsigned>(num(5, 2)), static_cast<unsigned>(num(8, 2))};
    const std::chrono::year_month_day ymd{std::chrono::year(d.year), std::chrono::month(d.month),
                                          std::chrono::day(d.day)};
    if (!ymd.ok()) bad();
    return d;
}

int64_t Date::to_unix() const
{
    using namespace std::chrono;
    const sys_days days{year_month_day{std::chrono::year(year), std::chrono::month(month), std::chrono::day(day)}};
    return duration_cast<std::chrono::seconds>(days.time_since_epoch()).count();
}

std::string Date::str() const
{
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year, month, day);
    return buf;
}

std::string format_timestamp(int64_t seconds)
{
    const Date d = Date::from_unix(seconds);
    const int64_t sod = seconds - d.to_unix();
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%sT%02d:%02d:%02dZ", d.str().c_str(), static_cast<int>(sod / 3600),
                  static_cast<int>(sod / 60 % 60), static_cast<int>(sod % 60));
    return buf;
}

} // namespace burnscope

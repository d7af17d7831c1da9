// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <burnscope/error.hpp>
#include <burnscope/prices.hpp>

#include <fstream>

namespace burnscope {

void PriceTable::set(Date date, int64_t micro_usd)
{
    if (micro_usd <= 0) fail(Errc::BadPrice, "price must be positive on " + date.str());
    m_prices[date] = micro_usd;
}

int64_t PriceTable::micro_usd(Date date) const
{
    const auto it = m_prices.find(date);
    if (it == m_prices.end()) fail(Errc::DateNotCovered, "no price for " + date.str());
    return it->second;
}

int64_t parse_price(std::string_view text)
{
    text = trim(text);
    const auto bad = [&]() { fail(Errc::BadPrice, "bad price '" + std::string(text) + "'"); };
    if (text.empty()) bad();
    int64_t whole = 0;
    int64_t frac = 0;
    int frac_digits = 0;
    bool seen_dot = false;
    bool seen_digit = false;
    for (char c : text) {
        if (c == '.') {
            if (seen_dot) bad();
            seen_dot = true;
        } else if (c >= '0' && c <= '9') {
            seen_digit = true;
            if (seen_dot) {
                if (++frac_digits > 6) bad();
                frac = frac * 10 + (c - '0');
            } else {
                if (whole > 1'000'000'000'000) bad();
                whole = whole * 10 + (c - '0');
            }
        } else {
            bad();
        }
    }
    if (!seen_digit) bad();
    for (int i = frac_digits; i < 6; ++i) frac *= 10;
    return whole * 1'000'000 + frac;
}

std::string format_price(int64_t micro_usd)
{
    std::string frac = std::to_string(micro_usd % 1'000'000);
    frac.insert(0, 6 - frac.size(), '0');
    // keep at least cents
    while (frac.size() > 2 && frac.back() == '0') frac.pop_back();
    return std::to_string(micro_usd / 1'000'000) + "." + frac;
}

PriceTable load_prices(std::istream& in)
{
    PriceTable table;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || line[0] == '#') continue;
        const auto f = split_csv_line(line);
        if (!header) {
            if (f.size() != 2 || f[0] != "date" || f[1] != "usd_per_btc") {
                fail(Errc::BadConfig, "price file header must be date,usd_per_btc");
            }
            header = true;
            continue;
        }
        if (f.size() != 2) fail(Errc::BadPrice, "price row needs two fields: " + line);
        table.set(Date::parse(f[0]), parse_price(f[1]));
    }
    if (!header) fail(Errc::BadConfig, "price file has no header");
    return table;
}

PriceTable load_prices_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) fail(Errc::Io, "cannot open " + path.string());
    return load_prices(in);
}

void export_prices(const PriceTable& prices, std::ostream& out)
{
    out << SCHEMA_LINE << "date,usd_per_btc\n";
    for (const auto& [date, p] : prices.entries()) out << date.str() << ',' << format_price(p) << '\n';
}

UsdCents usd_value(Amount amount, int64_t micro_usd)
{
    // sat * micro-USD / 10^8 gives micro-USD; cents are 10^4 micro-USD
    constexpr __int128 DIV = static_cast<__int128>(100'000'000) * 10'000;
    const __int128 num = static_cast<__int128>(amount.sat()) * micro_usd;
    return UsdCents(static_cast<int64_t>((num + DIV / 2) / DIV));
}

UsdCents usd_value(Amount amount, Date date, const PriceTable& prices)
{
    return usd_value(amount, prices.micro_usd(date));
}

} // namespace burnscope

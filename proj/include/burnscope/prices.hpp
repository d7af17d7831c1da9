// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BURNSCOPE_PRICES_HPP
#define BURNSCOPE_PRICES_HPP

#include <burnscope/amount.hpp>
#include <burnscope/util.hpp>

#include <filesystem>
#include <istream>
#include <map>
#include <ostream>

namespace burnscope {

/** Daily USD/BTC closing prices, held as integer micro-dollars. */
class PriceTable
{
public:
    /** Throws BadPrice on non-positive or malformed values. */
    void set(Date date, int64_t micro_usd);
    /** Throws DateNotCovered. */
    int64_t micro_usd(Date date) const;
    bool covers(Date date) const { return m_prices.count(date) != 0; }
    bool empty() const { return m_prices.empty(); }
    const std::map<Date, int64_t>& entries() const { return m_prices; }

private:
    std::map<Date, int64_t> m_prices;
};

/** `date,usd_per_btc`; up to six fractional digits. */
PriceTable load_prices(std::istream& in);
PriceTable load_prices_file(const std::filesystem::path& path);
void export_prices(const PriceTable& prices, std::ostream& out);

/** "39500.00" style decimal to micro-dollars; throws BadPrice. */
int64_t parse_price(std::string_view text);
std::string format_price(int64_t micro_usd);

/** amount × price / 10^8, rounded half-up to cents. */
UsdCents usd_value(Amount amount, int64_t micro_usd);
/** Throws DateNotCovered. */
UsdCents usd_value(Amount amount, Date date, const PriceTable& prices);

} // namespace burnscope

#endif // BURNSCOPE_PRICES_HPP

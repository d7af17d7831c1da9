// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BURNSCOPE_AMOUNT_HPP
#define BURNSCOPE_AMOUNT_HPP

#include <burnscope/error.hpp>

#include <compare>
#include <cstdint>
#include <string>

namespace burnscope {

inline constexpr uint64_t COIN = 100'000'000;
inline constexpr uint64_t MAX_MONEY = 21'000'000 * COIN;

/** A quantity of bitcoin in satoshis, bounded by MAX_MONEY. */
class Amount
{
public:
    constexpr Amount() = default;
    constexpr explicit Amount(uint64_t sat) : m_sat(sat) {}

    /** Throws Overflow when sat exceeds MAX_MONEY. */
    static Amount checked(uint64_t sat)
    {
        if (sat > MAX_MONEY) fail(Errc::Overflow, "amount exceeds 21M BTC: " + std::to_string(sat));
        return Amount(sat);
    }

    constexpr uint64_t sat() const { return m_sat; }
    constexpr bool in_range() const { return m_sat <= MAX_MONEY; }

    Amount& operator+=(Amount other)
    {
        if (other.m_sat > MAX_MONEY || m_sat > MAX_MONEY - other.m_sat) {
            fail(Errc::Overflow, "amount addition overflows MAX_MONEY");
        }
        m_sat += other.m_sat;
        return *this;
    }
    Amount& operator-=(Amount other)
    {
        if (other.m_sat > m_sat) fail(Errc::Overflow, "amount subtraction underflows");
        m_sat -= other.m_sat;
        return *this;
    }
    friend Amount operator+(Amount a, Amount b) { return a += b; }
    friend Amount operator-(Amount a, Amount b) { return a -= b; }
    friend constexpr auto operator<=>(Amount, Amount) = default;

private:
    uint64_t m_sat{0};
};

/** "3.69113600" style rendering, always eight fractional digits. */
std::string format_btc(Amount amount);

/** US dollars in whole cents. */
class UsdCents
{
public:
    constexpr UsdCents() = default;
    constexpr explicit UsdCents(int64_t cents) : m_cents(cents) {}

    constexpr int64_t cents() const { return m_cents; }
    /** "466.59"; negative values keep a leading '-'. */
    std::string str() const;
    double as_double() const { return static_cast<double>(m_cents) / 100.0; }

    UsdCents& operator+=(UsdCents o)
    {
        m_cents += o.m_cents;
        return *this;
    }
    friend UsdCents operator+(UsdCents a, UsdCents b) { return a += b; }
    friend UsdCents operator-(UsdCents a, UsdCents b) { return UsdCents(a.m_cents - b.m_cents); }
    friend constexpr auto operator<=>(UsdCents, UsdCents) = default;

private:
    int64_t m_cents{0};
};

/** Parses "466.59", "0.2", "12"; more than two fractional digits is rejected. */
UsdCents parse_usd(const std::string& text);

} // namespace burnscope

#endif // BURNSCOPE_AMOUNT_HPP

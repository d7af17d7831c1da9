// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BURNSCOPE_HASH_HPP
#define BURNSCOPE_HASH_HPP

#include <burnscope/util.hpp>

#include <array>
#include <compare>
#include <cstdint>
#include <cstring>
#include <functional>
#include <string>
#include <string_view>

namespace burnscope {

using Hash256 = std::array<uint8_t, 32>;
using Hash160 = std::array<uint8_t, 20>;

Hash256 sha256(ByteSpan data);
/** SHA-256 applied twice, as used for txids, block hashes and base58 checksums. */
Hash256 sha256d(ByteSpan data);
Hash160 ripemd160(ByteSpan data);
/** RIPEMD-160 of SHA-256. */
Hash160 hash160(ByteSpan data);

/**
 * A transaction id. Stored in internal (wire) byte order; displayed
 * byte-reversed as lowercase hex, matching block explorers.
 */
class TxId
{
public:
    constexpr TxId() = default;
    constexpr explicit TxId(const Hash256& raw) : m_raw(raw) {}

    /** Throws Error(BadConfig) unless given exactly 64 hex digits. */
    static TxId from_display(std::string_view hex);

    const Hash256& raw() const { return m_raw; }
    std::string display() const;
    bool is_null() const;

    friend auto operator<=>(const TxId&, const TxId&) = default;

private:
    Hash256 m_raw{};
};

/** Byte-reversed hex of a 32-byte hash; the usual display form of block hashes. */
std::string display_hash(const Hash256& h);

} // namespace burnscope

template <>
struct std::hash<burnscope::TxId> {
    size_t operator()(const burnscope::TxId& id) const noexcept
    {
        size_t h;
        static_assert(sizeof(h) <= 32);
        std::memcpy(&h, id.raw().data(), sizeof(h));
        return h;
    }
};

#endif // BURNSCOPE_HASH_HPP

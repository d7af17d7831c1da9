// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

// RIPEMD160() lives in the legacy provider under the EVP interface in
// OpenSSL 3.0.x; the one-shot function is still built into libcrypto.
#define OPENSSL_SUPPRESS_DEPRECATED

#include <burnscope/error.hpp>
#include <burnscope/hash.hpp>

#include <openssl/ripemd.h>
#include <openssl/sha.h>

#include <algorithm>

namespace burnscope {

Hash256 sha256(ByteSpan data)
{
    Hash256 out;
    SHA256(data.data(), data.size(), out.data());
    return out;
}

Hash256 sha256d(ByteSpan data)
{
    const Hash256 first = sha256(data);
    return sha256(first);
}

Hash160 ripemd160(ByteSpan data)
{
    Hash160 out;
    RIPEMD160(data.data(), data.size(), out.data());
    return out;
}

Hash160 hash160(ByteSpan data)
{
    const Hash256 inner = sha256(data);
    return ripemd160(inner);
}

std::string display_hash(const Hash256& h)
{
    Hash256 rev = h;
    std::reverse(rev.begin(), rev.end());
    return hex_encode(rev);
}

TxId TxId::from_display(std::string_view hex)
{
    hex = trim(hex);
    if (hex.size() != 64) fail(Errc::BadConfig, "txid must be 64 hex digits");
    Bytes b = hex_decode(hex);
    Hash256 raw;
    std::reverse_copy(b.begin(), b.end(), raw.begin());
    return TxId(raw);
}

std::string TxId::display() const
{
    return display_hash(m_raw);
}

bool TxId::is_null() const
{
    return std::all_of(m_raw.begin(), m_raw.end(), [](uint8_t b) { return b == 0; });
}

} // namespace burnscope

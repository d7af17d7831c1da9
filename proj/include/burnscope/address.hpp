// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BURNSCOPE_ADDRESS_HPP
#define BURNSCOPE_ADDRESS_HPP

#include <burnscope/script.hpp>
#include <burnscope/util.hpp>
#include <burnscope/wire.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace burnscope {

std::string base58_encode(ByteSpan data);
/** Throws BadAlphabet on characters outside the base58 alphabet. */
Bytes base58_decode(std::string_view text);

/** base58(version || payload || first four bytes of sha256d(version || payload)) */
std::string base58check_encode(uint8_t version, ByteSpan payload);

struct Base58Check {
    uint8_t version{0};
    Bytes payload;
};

/** Throws BadAlphabet or BadChecksum. */
Base58Check base58check_decode(std::string_view text);

enum class Bech32Variant { Bech32, Bech32m };

/** Encodes a witness program; version 0 uses bech32, 1..16 bech32m. */
std::string segwit_encode(std::string_view hrp, int witness_version, ByteSpan program);

struct SegwitProgram {
    std::string hrp;
    int version{0};
    Bytes program;
};

/** Full BIP173/BIP350 validation; nullopt on any failure. */
std::optional<SegwitProgram> segwit_decode(std::string_view text);

struct Address {
    std::string encoded;
    ScriptKind kind{ScriptKind::NonStandard};
    Network network{Network::Mainnet};

    friend bool operator==(const Address&, const Address&) = default;
};

/**
 * Human-readable address for an output class. OpReturn and NonStandard
 * yield nullopt; P2PK is reported under the P2PKH address of its key.
 */
std::optional<Address> derive_address(const ScriptClass& cls, Network net);
std::optional<Address> address_for_script(ByteSpan script_pubkey, Network net);

struct DecodedAddress {
    ScriptKind kind{ScriptKind::NonStandard};
    Network network{Network::Mainnet};
    Bytes program;
};

/** Validates a base58check or bech32/bech32m address of any supported network. */
std::optional<DecodedAddress> decode_address(std::string_view text);
Bytes script_for_address(const DecodedAddress& addr);

std::string p2pkh_address(const Hash160& key_hash, Network net);
std::string p2wpkh_address(const Hash160& key_hash, Network net);

} // namespace burnscope

#endif // BURNSCOPE_ADDRESS_HPP

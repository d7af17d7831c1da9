// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef BURNSCOPE_SCRIPT_HPP
#define BURNSCOPE_SCRIPT_HPP

#include <burnscope/hash.hpp>
#include <burnscope/util.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace burnscope {

inline constexpr uint8_t OP_0 = 0x00;
inline constexpr uint8_t OP_PUSHDATA1 = 0x4c;
inline constexpr uint8_t OP_PUSHDATA2 = 0x4d;
inline constexpr uint8_t OP_PUSHDATA4 = 0x4e;
inline constexpr uint8_t OP_1 = 0x51;
inline constexpr uint8_t OP_RETURN = 0x6a;
inline constexpr uint8_t OP_DUP = 0x76;
inline constexpr uint8_t OP_EQUAL = 0x87;
inline constexpr uint8_t OP_EQUALVERIFY = 0x88;
inline constexpr uint8_t OP_HASH160 = 0xa9;
inline constexpr uint8_t OP_CHECKSIG = 0xac;

/** Relay-standard OP_RETURN payload limit. */
inline constexpr size_t MAX_OP_RETURN_PAYLOAD = 80;

enum class ScriptKind { P2PKH, P2SH, P2WPKH, P2WSH, P2TR, P2PK, OpReturn, NonStandard };

std::string_view script_kind_name(ScriptKind kind);
std::optional<ScriptKind> parse_script_kind(std::string_view name);

struct ScriptClass {
    ScriptKind kind{ScriptKind::NonStandard};
    /** Hash or key material; for OpReturn the concatenated pushed data. */
    Bytes payload;
    /** For OpReturn: payload within the 80-byte relay limit and well formed. */
    bool standard{false};
    /** OpReturn only: individual pushes, kept for debug output. */
    std::vector<Bytes> pushes;
    /** OpReturn only: the bytes after 0x6a were not a clean push sequence. */
    bool malformed{false};
};

/** Total: every script maps to exactly one class; unknown shapes are NonStandard. */
ScriptClass classify_script(ByteSpan script_pubkey);

/**
 * Returns nullopt unless the script starts with OP_RETURN; otherwise the
 * concatenation of every pushed item after it. Throws MalformedPush when a
 * push runs past the end of the script or a non-push opcode appears.
 */
std::optional<Bytes> extract_op_return_payload(ByteSpan script_pubkey);
std::vector<Bytes> extract_op_return_pushes(ByteSpan script_pubkey);

enum class TextEncoding { Utf8, HexFallback };
std::string_view text_encoding_name(TextEncoding e);

struct CalloutText {
    Bytes raw;
    std::string decoded;
    TextEncoding encoding{TextEncoding::Utf8};
};

/**
 * Trailing NUL bytes are dropped and valid UTF-8 is NFC normalized. Anything
 * that is not valid UTF-8 is rendered as lowercase hex of the raw payload.
 */
CalloutText decode_payload_text(ByteSpan payload);

bool is_valid_utf8(std::string_view text);
std::string nfc_normalize(std::string_view utf8);

// Script builders used by the fixture generator and tests.
Bytes p2pkh_script(const Hash160& key_hash);
Bytes p2sh_script(const Hash160& script_hash);
Bytes p2wpkh_script(const Hash160& key_hash);
Bytes p2wsh_script(const Hash256& script_hash);
Bytes p2tr_script(const Hash256& output_key);
/** OP_RETURN followed by the minimal push of data. */
Bytes op_return_script(ByteSpan data);
/** Appends a minimal push of data to script. */
void push_data(Bytes& script, ByteSpan data);

} // namespace burnscope

#endif // BURNSCOPE_SCRIPT_HPP

// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <burnscope/error.hpp>
#include <burnscope/script.hpp>

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include <algorithm>

namespace burnscope {

std::string_view script_kind_name(ScriptKind kind)
{
    switch (kind) {
    case ScriptKind::P2PKH: return "p2pkh";
    case ScriptKind::P2SH: return "p2sh";
    case ScriptKind::P2WPKH: return "p2wpkh";
    case ScriptKind::P2WSH: return "p2wsh";
    case ScriptKind::P2TR: return "p2tr";
    case ScriptKind::P2PK: return "p2pk";
    case ScriptKind::OpReturn: return "op_return";
    case ScriptKind::NonStandard: return "nonstandard";
    }
    return "nonstandard";
}

std::optional<ScriptKind> parse_script_kind(std::string_view name)
{
    for (ScriptKind k : {ScriptKind::P2PKH, ScriptKind::P2SH, ScriptKind::P2WPKH, ScriptKind::P2WSH, ScriptKind::P2TR,
                         ScriptKind::P2PK, ScriptKind::OpReturn, ScriptKind::NonStandard}) {
        if (script_kind_name(k) == name) return k;
    }
    return std::nullopt;
}

std::string_view text_encoding_name(TextEncoding e)
{
    return e == TextEncoding::Utf8 ? "utf8" : "hex-fallback";
}

namespace {

bool valid_pubkey(ByteSpan key)
{
    if (key.size() == 33) return key[0] == 0x02 || key[0] == 0x03;
    if (key.size() == 65) return key[0] == 0x04 || key[0] == 0x06 || key[0] == 0x07;
    return false;
}

Bytes slice(ByteSpan s, size_t from, size_t len)
{
    return Bytes(s.begin() + static_cast<std::ptrdiff_t>(from), s.begin() + static_cast<std::ptrdiff_t>(from + len));
}

/** Walks the push sequence after OP_RETURN; throws MalformedPush. */
std::vector<Bytes> op_return_pushes(ByteSpan s)
{
    std::vector<Bytes> pushes;
    size_t pos = 1;
    while (pos < s.size()) {
        const uint8_t op = s[pos++];
        size_t len = 0;
        if (op == OP_0) {
            len = 0;
        } else if (op <= 0x4b) {
            len = op;
        } else if (op == OP_PUSHDATA1 || op == OP_PUSHDATA2 || op == OP_PUSHDATA4) {
            const size_t width = op == OP_PUSHDATA1 ? 1 : op == OP_PUSHDATA2 ? 2 : 4;
            if (s.size() - pos < width) fail(Errc::MalformedPush, "truncated OP_PUSHDATA length");
            for (size_t i = width; i > 0; --i) len = (len << 8) | s[pos + i - 1];
            pos += width;
        } else {
            fail(Errc::MalformedPush, "non-push opcode 0x" + hex_encode(ByteSpan(&s[pos - 1], 1)) + " after OP_RETURN");
        }
        if (s.size() - pos < len) {
            fail(Errc::MalformedPush, "push of " + std::to_string(len) + " bytes exceeds remaining " +
                                          std::to_string(s.size() - pos));
        }
        pushes.push_back(slice(s, pos, len));
        pos += len;
    }
    return pushes;
}

} // namespace

ScriptClass classify_script(ByteSpan s)
{
    ScriptClass c;
    const size_t n = s.size();
    if (n >= 1 && s[0] == OP_RETURN) {
        c.kind = ScriptKind::OpReturn;
        try {
            c.pushes = op_return_pushes(s);
            for (const Bytes& p : c.pushes) c.payload.insert(c.payload.end(), p.begin(), p.end());
        } catch (const Error&) {
            c.malformed = true;
            c.payload = slice(s, 1, n - 1);
        }
        c.standard = !c.malformed && c.payload.size() <= MAX_OP_RETURN_PAYLOAD;
        return c;
    }
    c.standard = true;
    if (n == 25 && s[0] == OP_DUP && s[1] == OP_HASH160 && s[2] == 20 && s[23] == OP_EQUALVERIFY && s[24] == OP_CHECKSIG) {
        c.kind = ScriptKind::P2PKH;
        c.payload = slice(s, 3, 20);
    } else if (n == 23 && s[0] == OP_HASH160 && s[1] == 20 && s[22] == OP_EQUAL) {
        c.kind = ScriptKind::P2SH;
        c.payload = slice(s, 2, 20);
    } else if (n == 22 && s[0] == OP_0 && s[1] == 20) {
        c.kind = ScriptKind::P2WPKH;
        c.payload = slice(s, 2, 20);
    } else if (n == 34 && s[0] == OP_0 && s[1] == 32) {
        c.kind = ScriptKind::P2WSH;
        c.payload = slice(s, 2, 32);
    } else if (n == 34 && s[0] == OP_1 && s[1] == 32) {
        c.kind = ScriptKind::P2TR;
        c.payload = slice(s, 2, 32);
    } else if ((n == 35 || n == 67) && s[0] == n - 2 && s[n - 1] == OP_CHECKSIG && valid_pubkey(s.subspan(1, n - 2))) {
        c.kind = ScriptKind::P2PK;
        c.payload = slice(s, 1, n - 2);
    } else {
        c.kind = ScriptKind::NonStandard;
        c.standard = false;
    }
    return c;
}

std::vector<Bytes> extract_op_return_pushes(ByteSpan s)
{
    if (s.empty() || s[0] != OP_RETURN) return {};
    return op_return_pushes(s);
}

std::optional<Bytes> extract_op_return_payload(ByteSpan s)
{
    if (s.empty() || s[0] != OP_RETURN) return std::nullopt;
    Bytes out;
    for (const Bytes& p : op_return_pushes(s)) out.insert(out.end(), p.begin(), p.end());
    return out;
}

bool is_valid_utf8(std::string_view text)
{
    size_t i = 0;
    const auto* s = reinterpret_cast<const unsigned char*>(text.data());
    const size_t n = text.size();
    while (i < n) {
        const unsigned char c = s[i];
        if (c < 0x80) {
            ++i;
            continue;
        }
        size_t len;
        uint32_t cp;
        if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (n - i < len) return false;
        for (size_t k = 1; k < len; ++k) {
            if ((s[i + k] & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (s[i + k] & 0x3F);
        }
        // overlong forms, surrogates, out of range
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000)) return false;
        if (cp >= 0xD800 && cp <= 0xDFFF) return false;
        if (cp > 0x10FFFF) return false;
        i += len;
    }
    return true;
}

std::string nfc_normalize(std::string_view utf8)
{
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) return std::string(utf8);
    const icu::UnicodeString src = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
    const icu::UnicodeString dst = nfc->normalize(src, status);
    if (U_FAILURE(status)) return std::string(utf8);
    std::string out;
    dst.toUTF8String(out);
    return out;
}

CalloutText decode_payload_text(ByteSpan payload)
{
    CalloutText t;
    t.raw.assign(payload.begin(), payload.end());
    size_t end = payload.size();
    while (end > 0 && payload[end - 1] == 0x00) --end;
    const std::string_view body(reinterpret_cast<const char*>(payload.data()), end);
    if (is_valid_utf8(body)) {
        t.encoding = TextEncoding::Utf8;
        t.decoded = nfc_normalize(body);
    } else {
        t.encoding = TextEncoding::HexFallback;
        t.decoded = hex_encode(payload);
    }
    return t;
}

void push_data(Bytes& script, ByteSpan data)
{
    const size_t n = data.size();
    if (n <= 0x4b) {
        script.push_back(static_cast<uint8_t>(n));
    } else if (n <= 0xff) {
        script.push_back(OP_PUSHDATA1);
        script.push_back(static_cast<uint8_t>(n));
    } else if (n <= 0xffff) {
        script.push_back(OP_PUSHDATA2);
        script.push_back(static_cast<uint8_t>(n));
        script.push_back(static_cast<uint8_t>(n >> 8));
    } else {
        script.push_back(OP_PUSHDATA4);
        for (int i = 0; i < 4; ++i) script.push_back(static_cast<uint8_t>(n >> (8 * i)));
    }
    script.insert(script.end(), data.begin(), data.end());
}

Bytes p2pkh_script(const Hash160& h)
{
    Bytes s = {OP_DUP, OP_HASH160, 20};
    s.insert(s.end(), h.begin(), h.end());
    s.push_back(OP_EQUALVERIFY);
    s.push_back(OP_CHECKSIG);
    return s;
}

Bytes p2sh_script(const Hash160& h)
{
    Bytes s = {OP_HASH160, 20};
    s.insert(s.end(), h.begin(), h.end());
    s.push_back(OP_EQUAL);
    return s;
}

Bytes p2wpkh_script(const Hash160& h)
{
    Bytes s = {OP_0, 20};
    s.insert(s.end(), h.begin(), h.end());
    return s;
}

Bytes p2wsh_script(const Hash256& h)
{
    Bytes s = {OP_0, 32};
    s.insert(s.end(), h.begin(), h.end());
    return s;
}

Bytes p2tr_script(const Hash256& k)
{
    Bytes s = {OP_1, 32};
    s.insert(s.end(), k.begin(), k.end());
    return s;
}

Bytes op_return_script(ByteSpan data)
{
    Bytes s = {OP_RETURN};
    if (!data.empty()) push_data(s, data);
    return s;
}

} // namespace burnscope

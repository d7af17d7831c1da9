// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <burnscope/address.hpp>
#include <burnscope/error.hpp>
#include <burnscope/hash.hpp>

#include <algorithm>
#include <array>

namespace burnscope {

namespace {

constexpr std::string_view BASE58_ALPHABET = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz";
constexpr std::string_view BECH32_CHARSET = "qpzry9x8gf2tvdw0s3jn54khce6mua7l";
constexpr uint32_t BECH32M_CONST = 0x2bc830a3;

struct NetParams {
    uint8_t pkh_version;
    uint8_t sh_version;
    std::string_view hrp;
};

NetParams params(Network net)
{
    switch (net) {
    case Network::Mainnet: return {0x00, 0x05, "bc"};
    case Network::Testnet: return {0x6f, 0xc4, "tb"};
    case Network::Regtest: return {0x6f, 0xc4, "bcrt"};
    }
    return {0x00, 0x05, "bc"};
}

uint32_t bech32_polymod(const std::vector<uint8_t>& values)
{
    static constexpr std::array<uint32_t, 5> GEN = {0x3b6a57b2, 0x26508e6d, 0x1ea119fa, 0x3d4233dd, 0x2a1462b3};
    uint32_t chk = 1;
    for (uint8_t v : values) {
        const uint32_t top = chk >> 25;
        chk = ((chk & 0x1ffffff) << 5) ^ v;
        for (int i = 0; i < 5; ++i) {
            if ((top >> i) & 1) chk ^= GEN[i];
        }
    }
    return chk;
}

std::vector<uint8_t> hrp_expand(std::string_view hrp)
{
    std::vector<uint8_t> out;
    out.reserve(hrp.size() * 2 + 1);
    for (char c : hrp) out.push_back(static_cast<uint8_t>(c) >> 5);
    out.push_back(0);
    for (char c : hrp) out.push_back(static_cast<uint8_t>(c) & 31);
    return out;
}

/** Regroups bit fields; returns nullopt on invalid padding when pad is false. */
std::optional<std::vector<uint8_t>> convert_bits(const std::vector<uint8_t>& in, int from, int to, bool pad)
{
    uint32_t acc = 0;
    int bits = 0;
    const uint32_t maxv = (1u << to) - 1;
    std::vector<uint8_t> out;
    for (uint8_t v : in) {
        if ((v >> from) != 0) return std::nullopt;
        acc = (acc << from) | v;
        bits += from;
        while (bits >= to) {
            bits -= to;
            out.push_back(static_cast<uint8_t>((acc >> bits) & maxv));
        }
    }
    if (pad) {
        if (bits > 0) out.push_back(static_cast<uint8_t>((acc << (to - bits)) & maxv));
    } else if (bits >= from || ((acc << (to - bits)) & maxv) != 0) {
        return std::nullopt;
    }
    return out;
}

std::string bech32_encode(std::string_view hrp, const std::vector<uint8_t>& data, Bech32Variant variant)
{
    std::vector<uint8_t> values = hrp_expand(hrp);
    values.insert(values.end(), data.begin(), data.end());
    values.insert(values.end(), 6, 0);
    const uint32_t target = variant == Bech32Variant::Bech32 ? 1 : BECH32M_CONST;
    const uint32_t mod = bech32_polymod(values) ^ target;
    std::string out(hrp);
    out.push_back('1');
    for (uint8_t d : data) out.push_back(BECH32_CHARSET[d]);
    for (int i = 0; i < 6; ++i) out.push_back(BECH32_CHARSET[(mod >> (5 * (5 - i))) & 31]);
    return out;
}

struct Bech32Decoded {
    std::string hrp;
    std::vector<uint8_t> data;
    Bech32Variant variant;
};

std::optional<Bech32Decoded> bech32_decode(std::string_view text)
{
    if (text.size() < 8 || text.size() > 90) return std::nullopt;
    bool lower = false;
    bool upper = false;
    for (char c : text) {
        if (c < 33 || c > 126) return std::nullopt;
        if (c >= 'a' && c <= 'z') lower = true;
        if (c >= 'A' && c <= 'Z') upper = true;
    }
    if (lower && upper) return std::nullopt;
    std::string s(text);
    std::transform(s.begin(), s.end(), s.begin(), [](char c) { return static_cast<char>(std::tolower(c)); });
    const auto sep = s.rfind('1');
    if (sep == std::string::npos || sep == 0 || sep + 7 > s.size()) return std::nullopt;
    Bech32Decoded out;
    out.hrp = s.substr(0, sep);
    std::vector<uint8_t> values;
    for (size_t i = sep + 1; i < s.size(); ++i) {
        const auto p = BECH32_CHARSET.find(s[i]);
        if (p == std::string_view::npos) return std::nullopt;
        values.push_back(static_cast<uint8_t>(p));
    }
    std::vector<uint8_t> check = hrp_expand(out.hrp);
    check.insert(check.end(), values.begin(), values.end());
    const uint32_t mod = bech32_polymod(check);
    if (mod == 1) {
        out.variant = Bech32Variant::Bech32;
    } else if (mod == BECH32M_CONST) {
        out.variant = Bech32Variant::Bech32m;
    } else {
        return std::nullopt;
    }
    out.data.assign(values.begin(), values.end() - 6);
    return out;
}

} // namespace

std::string base58_encode(ByteSpan data)
{
    size_t zeros = 0;
    while (zeros < data.size() && data[zeros] == 0) ++zeros;
    // log(256) / log(58), rounded up
    std::vector<uint8_t> b58((data.size() - zeros) * 138 / 100 + 1, 0);
    size_t length = 0;
    for (size_t i = zeros; i < data.size(); ++i) {
        int carry = data[i];
        size_t j = 0;
        for (auto it = b58.rbegin(); (carry != 0 || j < length) && it != b58.rend(); ++it, ++j) {
            carry += 256 * (*it);
            *it = static_cast<uint8_t>(carry % 58);
            carry /= 58;
        }
        length = j;
    }
    auto it = b58.begin() + static_cast<std::ptrdiff_t>(b58.size() - length);
    while (it != b58.end() && *it == 0) ++it;
    std::string out(zeros, '1');
    for (; it != b58.end(); ++it) out.push_back(BASE58_ALPHABET[*it]);
    return out;
}

Bytes base58_decode(std::string_view text)
{
    size_t ones = 0;
    while (ones < text.size() && text[ones] == '1') ++ones;
    // log(58) / log(256), rounded up
    std::vector<uint8_t> b256((text.size() - ones) * 733 / 1000 + 1, 0);
    size_t length = 0;
    for (size_t i = ones; i < text.size(); ++i) {
        const auto digit = BASE58_ALPHABET.find(text[i]);
        if (digit == std::string_view::npos) {
            fail(Errc::BadAlphabet, std::string("invalid base58 character '") + text[i] + "'");
        }
        int carry = static_cast<int>(digit);
        size_t j = 0;
        for (auto it = b256.rbegin(); (carry != 0 || j < length) && it != b256.rend(); ++it, ++j) {
            carry += 58 * (*it);
            *it = static_cast<uint8_t>(carry % 256);
            carry /= 256;
        }
        length = j;
    }
    auto it = b256.begin() + static_cast<std::ptrdiff_t>(b256.size() - length);
    while (it != b256.end() && *it == 0) ++it;
    Bytes out(ones, 0);
    out.insert(out.end(), it, b256.end());
    return out;
}

std::string base58check_encode(uint8_t version, ByteSpan payload)
{
    Bytes data;
    data.reserve(payload.size() + 5);
    data.push_back(version);
    data.insert(data.end(), payload.begin(), payload.end());
    const Hash256 check = sha256d(data);
    data.insert(data.end(), check.begin(), check.begin() + 4);
    return base58_encode(data);
}

Base58Check base58check_decode(std::string_view text)
{
    const Bytes raw = base58_decode(text);
    if (raw.size() < 5) fail(Errc::BadChecksum, "base58check string too short");
    const ByteSpan body(raw.data(), raw.size() - 4);
    const Hash256 check = sha256d(body);
    if (!std::equal(check.begin(), check.begin() + 4, raw.end() - 4)) {
        fail(Errc::BadChecksum, "base58check checksum mismatch");
    }
    return Base58Check{raw[0], Bytes(raw.begin() + 1, raw.end() - 4)};
}

std::string segwit_encode(std::string_view hrp, int witness_version, ByteSpan program)
{
    std::vector<uint8_t> data;
    data.push_back(static_cast<uint8_t>(witness_version));
    const auto conv = convert_bits(std::vector<uint8_t>(program.begin(), program.end()), 8, 5, true);
    data.insert(data.end(), conv->begin(), conv->end());
    return bech32_encode(hrp, data, witness_version == 0 ? Bech32Variant::Bech32 : Bech32Variant::Bech32m);
}

std::optional<SegwitProgram> segwit_decode(std::string_view text)
{
    const auto dec = bech32_decode(text);
    if (!dec || dec->data.empty()) return std::nullopt;
    const int version = dec->data[0];
    if (version > 16) return std::nullopt;
    if ((version == 0) != (dec->variant == Bech32Variant::Bech32)) return std::nullopt;
    const auto prog = convert_bits(std::vector<uint8_t>(dec->data.begin() + 1, dec->data.end()), 5, 8, false);
    if (!prog || prog->size() < 2 || prog->size() > 40) return std::nullopt;
    if (version == 0 && prog->size() != 20 && prog->size() != 32) return std::nullopt;
    return SegwitProgram{dec->hrp, version, Bytes(prog->begin(), prog->end())};
}

std::string p2pkh_address(const Hash160& key_hash, Network net)
{
    return base58check_encode(params(net).pkh_version, key_hash);
}

std::string p2wpkh_address(const Hash160& key_hash, Network net)
{
    return segwit_encode(params(net).hrp, 0, key_hash);
}

std::optional<Address> derive_address(const ScriptClass& cls, Network net)
{
    const NetParams p = params(net);
    switch (cls.kind) {
    case ScriptKind::P2PKH: return Address{base58check_encode(p.pkh_version, cls.payload), ScriptKind::P2PKH, net};
    case ScriptKind::P2SH: return Address{base58check_encode(p.sh_version, cls.payload), ScriptKind::P2SH, net};
    case ScriptKind::P2PK: {
        const Hash160 h = hash160(cls.payload);
        return Address{base58check_encode(p.pkh_version, h), ScriptKind::P2PKH, net};
    }
    case ScriptKind::P2WPKH:
    case ScriptKind::P2WSH: return Address{segwit_encode(p.hrp, 0, cls.payload), cls.kind, net};
    case ScriptKind::P2TR: return Address{segwit_encode(p.hrp, 1, cls.payload), ScriptKind::P2TR, net};
    case ScriptKind::OpReturn:
    case ScriptKind::NonStandard: return std::nullopt;
    }
    return std::nullopt;
}

std::optional<Address> address_for_script(ByteSpan script_pubkey, Network net)
{
    return derive_address(classify_script(script_pubkey), net);
}

std::optional<DecodedAddress> decode_address(std::string_view text)
{
    if (const auto sw = segwit_decode(text)) {
        DecodedAddress out;
        if (sw->hrp == "bc") {
            out.network = Network::Mainnet;
        } else if (sw->hrp == "tb") {
            out.network = Network::Testnet;
        } else if (sw->hrp == "bcrt") {
            out.network = Network::Regtest;
        } else {
            return std::nullopt;
        }
        if (sw->version == 0) {
            out.kind = sw->program.size() == 20 ? ScriptKind::P2WPKH : ScriptKind::P2WSH;
        } else if (sw->version == 1 && sw->program.size() == 32) {
            out.kind = ScriptKind::P2TR;
        } else {
            return std::nullopt;
        }
        out.program = sw->program;
        return out;
    }
    try {
        const Base58Check b = base58check_decode(text);
        if (b.payload.size() != 20) return std::nullopt;
        DecodedAddress out;
        out.program = b.payload;
        switch (b.version) {
        case 0x00: out.kind = ScriptKind::P2PKH; out.network = Network::Mainnet; break;
        case 0x05: out.kind = ScriptKind::P2SH; out.network = Network::Mainnet; break;
        case 0x6f: out.kind = ScriptKind::P2PKH; out.network = Network::Regtest; break;
        case 0xc4: out.kind = ScriptKind::P2SH; out.network = Network::Regtest; break;
        default: return std::nullopt;
        }
        return out;
    } catch (const Error&) {
        return std::nullopt;
    }
}

Bytes script_for_address(const DecodedAddress& addr)
{
    Hash160 h20{};
    Hash256 h32{};
    if (addr.program.size() == 20) std::copy(addr.program.begin(), addr.program.end(), h20.begin());
    if (addr.program.size() == 32) std::copy(addr.program.begin(), addr.program.end(), h32.begin());
    switch (addr.kind) {
    case ScriptKind::P2PKH: return p2pkh_script(h20);
    case ScriptKind::P2SH: return p2sh_script(h20);
    case ScriptKind::P2WPKH: return p2wpkh_script(h20);
    case ScriptKind::P2WSH: return p2wsh_script(h32);
    case ScriptKind::P2TR: return p2tr_script(h32);
    default: return {};
    }
}

} // namespace burnscope

// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "test_util.hpp"

#include <burnscope/error.hpp>

#include <gtest/gtest.h>

using namespace burnscope;
using namespace burnscope::test;

TEST(Classify, StandardTemplates)
{
    const Hash160 h = key("k");
    const Hash256 w = sha256(to_bytes("w"));
    EXPECT_EQ(classify_script(p2pkh_script(h)).kind, ScriptKind::P2PKH);
    EXPECT_EQ(classify_script(p2sh_script(h)).kind, ScriptKind::P2SH);
    EXPECT_EQ(classify_script(p2wpkh_script(h)).kind, ScriptKind::P2WPKH);
    EXPECT_EQ(classify_script(p2wsh_script(w)).kind, ScriptKind::P2WSH);
    EXPECT_EQ(classify_script(p2tr_script(w)).kind, ScriptKind::P2TR);
    const ScriptClass c = classify_script(p2pkh_script(h));
    EXPECT_EQ(c.payload, Bytes(h.begin(), h.end()));
}

TEST(Classify, PayToPubkey)
{
    const Bytes raw = fixture_hex("genesis_coinbase.hex");
    const Transaction tx = parse_transaction(ByteSpan(raw));
    const ScriptClass c = classify_script(tx.outputs[0].script_pubkey);
    EXPECT_EQ(c.kind, ScriptKind::P2PK);
    EXPECT_EQ(c.payload.size(), 65u);
    const auto a = derive_address(c, Network::Mainnet);
    ASSERT_TRUE(a);
    EXPECT_EQ(a->encoded, "1A1zP1eP5QGefi2DMPTfTL5SLmv7DivfNa");
}

TEST(Classify, Block170Outputs)
{
    const Transaction tx = parse_transaction(fixture_hex("block170_tx.hex"));
    EXPECT_EQ(address_for_script(tx.outputs[0].script_pubkey, Network::Mainnet)->encoded,
              "1Q2TWHE3GMdB6BZKafqwxXtWAWgFt5Jvm3");
    EXPECT_EQ(address_for_script(tx.outputs[1].script_pubkey, Network::Mainnet)->encoded,
              "12cbQLTFMXRnSzktFkuoG3eHoMeFtpTu3S");
}

TEST(Classify, NearMissesAreNonStandard)
{
    Bytes s = p2pkh_script(key("k"));
    s.back() = OP_EQUAL;
    EXPECT_EQ(classify_script(s).kind, ScriptKind::NonStandard);
    Bytes short_wpkh = p2wpkh_script(key("k"));
    short_wpkh.pop_back();
    EXPECT_EQ(classify_script(short_wpkh).kind, ScriptKind::NonStandard);
    EXPECT_EQ(classify_script(Bytes{}).kind, ScriptKind::NonStandard);
    EXPECT_EQ(classify_script(Bytes{OP_1}).kind, ScriptKind::NonStandard);
}

TEST(OpReturn, SinglePushPayload)
{
    const Bytes s = op_return_script(to_bytes("GRU to SVR"));
    EXPECT_EQ(s[0], OP_RETURN);
    EXPECT_EQ(s[1], 10);
    const ScriptClass c = classify_script(s);
    EXPECT_EQ(c.kind, ScriptKind::OpReturn);
    EXPECT_TRUE(c.standard);
    EXPECT_FALSE(c.malformed);
    EXPECT_EQ(c.payload, to_bytes("GRU to SVR"));
    EXPECT_EQ(extract_op_return_payload(s), to_bytes("GRU to SVR"));
}

TEST(OpReturn, MultiplePushesConcatenate)
{
    Bytes s = {OP_RETURN};
    push_data(s, to_bytes("ab"));
    push_data(s, to_bytes("cd"));
    EXPECT_EQ(extract_op_return_payload(s), to_bytes("abcd"));
    EXPECT_EQ(extract_op_return_pushes(s).size(), 2u);
    EXPECT_EQ(classify_script(s).pushes.size(), 2u);
}

TEST(OpReturn, BareOpReturnHasEmptyPayload)
{
    const ScriptClass c = classify_script(Bytes{OP_RETURN});
    EXPECT_EQ(c.kind, ScriptKind::OpReturn);
    EXPECT_TRUE(c.payload.empty());
    EXPECT_TRUE(c.standard);
}

TEST(OpReturn, PushdataForms)
{
    const Bytes data(80, 'x');
    const Bytes s = op_return_script(data);
    EXPECT_EQ(s[1], OP_PUSHDATA1);
    EXPECT_EQ(s[2], 80);
    EXPECT_TRUE(classify_script(s).standard);
    const Bytes big = op_return_script(Bytes(81, 'y'));
    const ScriptClass c = classify_script(big);
    EXPECT_EQ(c.kind, ScriptKind::OpReturn);
    EXPECT_FALSE(c.standard);
    EXPECT_EQ(c.payload.size(), 81u);
    Bytes p2 = {OP_RETURN, OP_PUSHDATA2, 0x03, 0x00, 'a', 'b', 'c'};
    EXPECT_EQ(extract_op_return_payload(p2), to_bytes("abc"));
}

TEST(OpReturn, OverrunningPushIsMalformed)
{
    const Bytes s = {OP_RETURN, 0x05, 'a', 'b'};
    EXPECT_THROW(extract_op_return_payload(s), Error);
    const ScriptClass c = classify_script(s);
    EXPECT_EQ(c.kind, ScriptKind::OpReturn);
    EXPECT_TRUE(c.malformed);
    EXPECT_FALSE(c.standard);
}

TEST(OpReturn, NotOpReturnYieldsNothing)
{
    EXPECT_FALSE(extract_op_return_payload(p2pkh("k")).has_value());
}

TEST(PayloadText, Utf8IsNormalized)
{
    // "Cafe" with a combining acute accent composes to U+00E9
    const Bytes raw = to_bytes("Cafe\xcc\x81");
    const CalloutText t = decode_payload_text(raw);
    EXPECT_EQ(t.encoding, TextEncoding::Utf8);
    EXPECT_EQ(t.decoded, "Caf\xc3\xa9");
    EXPECT_EQ(t.raw, raw);
}

TEST(PayloadText, TrailingNulsDropped)
{
    Bytes raw = to_bytes("GRU to FSB");
    raw.push_back(0);
    raw.push_back(0);
    EXPECT_EQ(decode_payload_text(raw).decoded, "GRU to FSB");
}

TEST(PayloadText, InvalidUtf8FallsBackToHex)
{
    const Bytes raw = {0xde, 0xad, 0xbe, 0xef};
    const CalloutText t = decode_payload_text(raw);
    EXPECT_EQ(t.encoding, TextEncoding::HexFallback);
    EXPECT_EQ(t.decoded, "deadbeef");
}

TEST(PayloadText, Utf8Validation)
{
    EXPECT_TRUE(is_valid_utf8("plain"));
    EXPECT_TRUE(is_valid_utf8("\xd0\x93\xd0\xa0\xd0\xa3"));
    EXPECT_FALSE(is_valid_utf8("\xc0\xaf"));
    EXPECT_FALSE(is_valid_utf8("\xed\xa0\x80"));
    EXPECT_FALSE(is_valid_utf8("\xe2\x82"));
}

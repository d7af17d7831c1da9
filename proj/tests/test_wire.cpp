// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "test_util.hpp"

#include <burnscope/error.hpp>

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace burnscope;
using namespace burnscope::test;

namespace {

Errc code_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return Errc::Io;
}

Block genesis_block()
{
    Block b;
    b.transactions.push_back(parse_transaction(fixture_hex("genesis_coinbase.hex")));
    b.header.version = 1;
    b.header.merkle_root = compute_merkle_root(b.transactions);
    b.header.time = 1231006505;
    b.header.bits = 0x1d00ffff;
    b.header.nonce = 2083236893;
    return b;
}

Transaction witness_tx()
{
    Transaction tx;
    tx.version = 2;
    TxInput in;
    in.previous = OutPoint{TxId(sha256(to_bytes("prev"))), 3};
    in.sequence = 0xfffffffd;
    in.witness = {Bytes(71, 0x30), Bytes(33, 0x02)};
    tx.inputs.push_back(in);
    tx.outputs.push_back(TxOutput{Amount(12345), p2wpkh_script(key("w"))});
    tx.locktime = 700000;
    return tx;
}

} // namespace

TEST(Varint, EncodesEachWidth)
{
    EXPECT_EQ(hex_encode(encode_varint(0)), "00");
    EXPECT_EQ(hex_encode(encode_varint(0xfc)), "fc");
    EXPECT_EQ(hex_encode(encode_varint(0xfd)), "fdfd00");
    EXPECT_EQ(hex_encode(encode_varint(0xffff)), "fdffff");
    EXPECT_EQ(hex_encode(encode_varint(0x10000)), "fe00000100");
    EXPECT_EQ(hex_encode(encode_varint(0x100000000ull)), "ff0000000001000000");
}

TEST(Varint, DecodesAndReportsNextOffset)
{
    const Bytes b = hex_decode("aafd3412");
    const auto [v, next] = read_varint(ByteSpan(b), 1);
    EXPECT_EQ(v, 0x1234u);
    EXPECT_EQ(next, 4u);
}

TEST(Varint, RejectsNonMinimalForms)
{
    for (const char* hex : {"fd0500", "fdfc00", "feffff0000", "ffffffffff00000000"}) {
        const Bytes b = hex_decode(hex);
        EXPECT_EQ(code_of([&] { read_varint(ByteSpan(b), 0); }), Errc::NonMinimal) << hex;
    }
}

TEST(Varint, RejectsTruncation)
{
    for (const char* hex : {"", "fd01", "fe010203", "ff01020304050607"}) {
        const Bytes b = hex_decode(hex);
        EXPECT_EQ(code_of([&] { read_varint(ByteSpan(b), 0); }), Errc::Truncated) << hex;
    }
}

TEST(Varint, RoundTripsRandomValues)
{
    std::mt19937_64 rng(42);
    for (int i = 0; i < 2000; ++i) {
        const uint64_t v = rng() >> (rng() % 64);
        const Bytes b = encode_varint(v);
        const auto [got, next] = read_varint(ByteSpan(b), 0);
        EXPECT_EQ(got, v);
        EXPECT_EQ(next, b.size());
    }
}

TEST(Transaction, GenesisCoinbaseTxid)
{
    const Bytes raw = fixture_hex("genesis_coinbase.hex");
    const Transaction tx = parse_transaction(ByteSpan(raw));
    EXPECT_TRUE(tx.is_coinbase());
    EXPECT_EQ(txid(tx).display(), "4a5e1e4baab89f3a32518a88c31bc87f618f76673e2cc77ab2127b7afdeda33b");
    ASSERT_EQ(tx.outputs.size(), 1u);
    EXPECT_EQ(tx.outputs[0].value, Amount(50 * COIN));
    EXPECT_EQ(serialize_transaction(tx), raw);
}

TEST(Transaction, Block170SpendTxid)
{
    const Bytes raw = fixture_hex("block170_tx.hex");
    const Transaction tx = parse_transaction(ByteSpan(raw));
    EXPECT_EQ(txid(tx).display(), "f4184fc596403b9d638783cf57adfe4c75c605f6356fbc91338530e9831e9e16");
    ASSERT_EQ(tx.inputs.size(), 1u);
    EXPECT_EQ(tx.inputs[0].previous.txid.display(), "0437cd7f8525ceed2324359c2d0ba26006d92d856a9c20fa0241106ee5a597c9");
    ASSERT_EQ(tx.outputs.size(), 2u);
    EXPECT_EQ(tx.outputs[0].value, Amount(10 * COIN));
    EXPECT_EQ(tx.outputs[1].value, Amount(40 * COIN));
    EXPECT_EQ(serialize_transaction(tx), raw);
}

TEST(Transaction, WitnessRoundTripAndIds)
{
    const Transaction tx = witness_tx();
    ASSERT_TRUE(tx.has_witness());
    const Bytes full = serialize_transaction(tx);
    EXPECT_EQ(full[4], 0x00);
    EXPECT_EQ(full[5], 0x01);
    EXPECT_EQ(parse_transaction(ByteSpan(full)), tx);
    EXPECT_EQ(txid(tx).raw(), sha256d(ByteSpan(serialize_transaction_legacy(tx))));
    EXPECT_NE(txid(tx).raw(), wtxid(tx));
}

TEST(Transaction, LegacyWtxidEqualsTxid)
{
    const Transaction tx = parse_transaction(fixture_hex("block170_tx.hex"));
    EXPECT_EQ(wtxid(tx), txid(tx).raw());
}

TEST(Transaction, RejectsSuperfluousWitness)
{
    Transaction tx = witness_tx();
    tx.inputs[0].witness.clear();
    ByteWriter w;
    w.u32(2);
    w.u8(0x00);
    w.u8(0x01);
    w.varint(1);
    w.bytes(ByteSpan(tx.inputs[0].previous.txid.raw()));
    w.u32(tx.inputs[0].previous.vout);
    w.varint(0);
    w.u32(0xffffffff);
    w.varint(1);
    w.u64(5);
    w.varint(0);
    w.varint(0);
    w.u32(0);
    const Bytes b = std::move(w).take();
    EXPECT_EQ(code_of([&] { parse_transaction(ByteSpan(b)); }), Errc::SuperfluousWitness);
}

TEST(Transaction, RejectsTrailingAndTruncatedBytes)
{
    Bytes raw = fixture_hex("block170_tx.hex");
    Bytes longer = raw;
    longer.push_back(0x00);
    EXPECT_EQ(code_of([&] { parse_transaction(ByteSpan(longer)); }), Errc::TrailingBytes);
    for (size_t cut : {size_t{0}, size_t{3}, size_t{40}, raw.size() - 1}) {
        const Bytes shorter(raw.begin(), raw.begin() + static_cast<std::ptrdiff_t>(cut));
        EXPECT_EQ(code_of([&] { parse_transaction(ByteSpan(shorter)); }), Errc::Truncated) << cut;
    }
}

TEST(Block, GenesisHeaderHash)
{
    const Block b = genesis_block();
    EXPECT_EQ(display_hash(b.header.merkle_root), "4a5e1e4baab89f3a32518a88c31bc87f618f76673e2cc77ab2127b7afdeda33b");
    EXPECT_EQ(display_hash(b.header.hash()), "000000000019d6689c085ae165831e934ff763ae46a2a6c172b3f1b60a8ce26f");
    const Bytes payload = serialize_block(b);
    EXPECT_EQ(payload.size(), 285u);
    EXPECT_EQ(parse_block(ByteSpan(payload)), b);
    EXPECT_TRUE(merkle_root_matches(b));
}

TEST(Block, MerkleDuplicatesOddLevel)
{
    std::vector<Transaction> txs;
    for (uint32_t i = 0; i < 3; ++i) txs.push_back(coinbase(i, Amount(1), p2pkh("m")));
    std::vector<Hash256> ids;
    for (const Transaction& tx : txs) ids.push_back(txid(tx).raw());
    Bytes l01(ids[0].begin(), ids[0].end());
    l01.insert(l01.end(), ids[1].begin(), ids[1].end());
    Bytes l22(ids[2].begin(), ids[2].end());
    l22.insert(l22.end(), ids[2].begin(), ids[2].end());
    const Hash256 a = sha256d(ByteSpan(l01));
    const Hash256 c = sha256d(ByteSpan(l22));
    Bytes top(a.begin(), a.end());
    top.insert(top.end(), c.begin(), c.end());
    EXPECT_EQ(compute_merkle_root(txs), sha256d(ByteSpan(top)));
}

TEST(BlockFile, FramesAndParsesWithPadding)
{
    const Block g = genesis_block();
    Bytes file = frame_block(Network::Mainnet, g);
    EXPECT_EQ(hex_encode(ByteSpan(file.data(), 8)), "f9beb4d91d010000");
    file.insert(file.end(), 16, 0x00);
    const Bytes second = frame_block(Network::Mainnet, g);
    file.insert(file.end(), second.begin(), second.end());
    file.insert(file.end(), 7, 0x00);
    const auto blocks = parse_block_file(ByteSpan(file), Network::Mainnet);
    ASSERT_EQ(blocks.size(), 2u);
    EXPECT_EQ(blocks[1], g);
}

TEST(BlockFile, StreamParserAcceptsAnyChunking)
{
    ChainBuilder chain;
    for (int i = 0; i < 5; ++i) chain.add({});
    Bytes file;
    for (const Block& b : chain.blocks()) {
        const Bytes f = frame_block(Network::Regtest, b);
        file.insert(file.end(), f.begin(), f.end());
    }
    for (size_t chunk : {size_t{1}, size_t{7}, size_t{80}, file.size()}) {
        std::vector<Block> got;
        BlockStreamParser p(Network::Regtest, [&](Block&& b) { got.push_back(std::move(b)); });
        for (size_t i = 0; i < file.size(); i += chunk) {
            p.feed(ByteSpan(file.data() + i, std::min(chunk, file.size() - i)));
        }
        p.finish();
        EXPECT_EQ(got, chain.blocks()) << chunk;
    }
}

TEST(BlockFile, RejectsWrongMagicAndShortRecords)
{
    const Bytes file = frame_block(Network::Regtest, genesis_block());
    EXPECT_EQ(hex_encode(ByteSpan(file.data(), 4)), "fabfb5da");
    EXPECT_EQ(code_of([&] { parse_block_file(ByteSpan(file), Network::Mainnet); }), Errc::BadMagic);
    const Bytes cut(file.begin(), file.end() - 10);
    EXPECT_EQ(code_of([&] { parse_block_file(ByteSpan(cut), Network::Regtest); }), Errc::Truncated);
}

TEST(BlockFile, RejectsLengthMismatch)
{
    Bytes file = frame_block(Network::Regtest, genesis_block());
    // claim one extra byte of payload, then supply it
    file[4] += 1;
    file.push_back(0x00);
    EXPECT_EQ(code_of([&] { parse_block_file(ByteSpan(file), Network::Regtest); }), Errc::LengthMismatch);
}

TEST(OutPoint, ParsesDisplayForm)
{
    const OutPoint op = OutPoint::parse("f4184fc596403b9d638783cf57adfe4c75c605f6356fbc91338530e9831e9e16:1");
    EXPECT_EQ(op.vout, 1u);
    EXPECT_EQ(op.str(), "f4184fc596403b9d638783cf57adfe4c75c605f6356fbc91338530e9831e9e16:1");
    EXPECT_EQ(code_of([] { OutPoint::parse("abc:1"); }), Errc::BadConfig);
    EXPECT_EQ(code_of([] { OutPoint::parse("f4184fc596403b9d638783cf57adfe4c75c605f6356fbc91338530e9831e9e16"); }),
              Errc::BadConfig);
}

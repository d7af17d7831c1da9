// Copyright (c) 2026 The burnscope developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "test_util.hpp"

#include <burnscope/error.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

using namespace burnscope;
using namespace burnscope::test;

namespace {

// block 0 pays alice; block 1 alice pays bob and burns; block 2 bob spends an unknown output too
struct SmallChain {
    ChainBuilder chain;
    Transaction pay;
    Transaction mixed;
    OutPoint unknown{TxId(sha256(to_bytes("elsewhere"))), 7};

    SmallChain()
    {
        const Transaction fund = coinbase(0, Amount(50 * COIN), p2pkh("alice"));
        Block& b0 = chain.add({});
        b0.transactions[0] = fund;
        b0.header.merkle_root = compute_merkle_root(b0.transactions);
        pay = spend({OutPoint{txid(fund), 0}}, {TxOutput{Amount(10 * COIN), p2pkh("bob")},
                                                TxOutput{Amount(1000), op_return_script(to_bytes("GRU to SVR"))},
                                                TxOutput{Amount(40 * COIN - 6000), p2pkh("alice")}});
        chain.add({pay});
        mixed = spend({OutPoint{txid(pay), 0}, unknown}, {TxOutput{Amount(5 * COIN), p2pkh("carol")}});
        chain.add({mixed});
    }
};

} // namespace

TEST(Ledger, ResolvesInputsAndFees)
{
    SmallChain s;
    const LedgerIndex idx = s.chain.index();
    const ResolvedTransaction r = idx.resolve(txid(s.pay));
    ASSERT_EQ(r.inputs.size(), 1u);
    EXPECT_EQ(r.inputs[0].address, addr("alice"));
    EXPECT_EQ(r.inputs[0].value, Amount(50 * COIN));
    ASSERT_TRUE(r.fee);
    EXPECT_EQ(*r.fee, Amount(5000));
    EXPECT_EQ(r.op_return_value(), Amount(1000));
    EXPECT_TRUE(r.has_op_return());
    EXPECT_EQ(r.outputs[1].kind, ScriptKind::OpReturn);
    EXPECT_EQ(r.outputs[1].op_return_payload, to_bytes("GRU to SVR"));
    EXPECT_EQ(r.input_addresses(), (std::set<std::string>{addr("alice")}));
    EXPECT_EQ(r.output_addresses(), (std::set<std::string>{addr("alice"), addr("bob")}));
}

TEST(Ledger, CoinbaseResolution)
{
    SmallChain s;
    const LedgerIndex idx = s.chain.index();
    const ResolvedTransaction r = idx.resolve(idx.transactions().front());
    EXPECT_TRUE(r.coinbase);
    EXPECT_TRUE(r.inputs[0].coinbase);
    EXPECT_EQ(r.fee, Amount(0));
}

TEST(Ledger, MissingPrevoutsAreCountedNotFatal)
{
    SmallChain s;
    const LedgerIndex idx = s.chain.index();
    ASSERT_EQ(idx.missing_prevouts().size(), 1u);
    EXPECT_EQ(idx.missing_prevouts()[0].prevout, s.unknown);
    const ResolvedTransaction r = idx.resolve(txid(s.mixed));
    EXPECT_FALSE(r.fee);
    EXPECT_FALSE(r.inputs[1].value);
    EXPECT_EQ(r.inputs[0].value, Amount(10 * COIN));
    const IngestionReport rep = idx.report();
    EXPECT_EQ(rep.blocks, 3u);
    EXPECT_EQ(rep.transactions, 5u);
    EXPECT_EQ(rep.inputs, 3u);
    EXPECT_EQ(rep.op_return_outputs, 1u);
    EXPECT_EQ(rep.missing_prevouts, 1u);
    EXPECT_EQ(rep.merkle_mismatches, 0u);
}

TEST(Ledger, SpentOutputsStayResolvable)
{
    SmallChain s;
    const LedgerIndex idx = s.chain.index();
    const OutPoint bob{txid(s.pay), 0};
    ASSERT_TRUE(idx.output(bob));
    EXPECT_EQ(idx.output(bob)->value, Amount(10 * COIN));
    EXPECT_EQ(idx.spender(bob), txid(s.mixed));
    EXPECT_FALSE(idx.spender(OutPoint{txid(s.pay), 2}));
}

TEST(Ledger, UnknownTransaction)
{
    SmallChain s;
    const LedgerIndex idx = s.chain.index();
    try {
        idx.resolve(TxId(sha256(to_bytes("nope"))));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::UnknownTx);
    }
}

TEST(Ledger, AddressHistoryIsChronological)
{
    SmallChain s;
    const LedgerIndex idx = s.chain.index();
    const auto h = idx.history(addr("alice"));
    ASSERT_EQ(h.size(), 3u);
    EXPECT_EQ(h[0].role, Role::Output);
    EXPECT_EQ(h[1].txid, txid(s.pay));
    EXPECT_LE(h[0].time, h[1].time);
    const auto bob = address_history(idx, addr("bob"));
    ASSERT_EQ(bob.size(), 2u);
    EXPECT_EQ(bob[0].role, Role::Output);
    EXPECT_EQ(bob[1].role, Role::Input);
    EXPECT_TRUE(idx.history("unseen").empty());
}

TEST(Ledger, MerkleMismatchIsReported)
{
    SmallChain s;
    std::vector<Block> blocks = s.chain.blocks();
    blocks[1].header.merkle_root[0] ^= 1;
    EXPECT_EQ(build_index(blocks, Network::Regtest).report().merkle_mismatches, 1u);
}

TEST(Ledger, SnapshotRoundTrip)
{
    SmallChain s;
    const LedgerIndex idx = s.chain.index();
    const Bytes snap = idx.snapshot();
    const LedgerIndex back = LedgerIndex::from_snapshot(ByteSpan(snap));
    EXPECT_EQ(back.snapshot(), snap);
    EXPECT_EQ(back.network(), Network::Regtest);
    EXPECT_EQ(back.report().missing_prevouts, 1u);
    EXPECT_EQ(back.resolve(txid(s.pay)).fee, Amount(5000));
}

TEST(Ledger, SnapshotRejectsCorruption)
{
    SmallChain s;
    Bytes snap = s.chain.index().snapshot();
    for (size_t cut : {size_t{0}, size_t{5}, snap.size() / 2, snap.size() - 1}) {
        const Bytes bad(snap.begin(), snap.begin() + static_cast<std::ptrdiff_t>(cut));
        try {
            LedgerIndex::from_snapshot(ByteSpan(bad));
            ADD_FAILURE() << cut;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::BadSnapshot) << cut;
        }
    }
    snap[0] = 'X';
    EXPECT_THROW(LedgerIndex::from_snapshot(ByteSpan(snap)), Error);
}

TEST(Ledger, OutputsCsvIsSortedWithSchema)
{
    SmallChain s;
    std::ostringstream out;
    s.chain.index().export_outputs_csv(out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "# schema_version: 1");
    std::getline(in, line);
    EXPECT_EQ(line, "txid,vout,value_sat,address,script_class");
    std::vector<std::string> rows;
    while (std::getline(in, line)) rows.push_back(line);
    EXPECT_EQ(rows.size(), 7u);
    EXPECT_TRUE(std::is_sorted(rows.begin(), rows.end()));
}

TEST(OrderChain, RestoresParentOrder)
{
    ChainBuilder chain;
    for (int i = 0; i < 12; ++i) chain.add({});
    std::vector<Block> shuffled = chain.blocks();
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        EXPECT_EQ(order_chain(shuffled), chain.blocks());
    }
}

TEST(OrderChain, IndexIsIndependentOfFileOrder)
{
    SmallChain s;
    std::vector<Block> rev = s.chain.blocks();
    std::reverse(rev.begin(), rev.end());
    EXPECT_EQ(build_index(order_chain(rev), Network::Regtest).snapshot(), s.chain.index().snapshot());
}
